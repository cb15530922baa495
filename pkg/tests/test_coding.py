import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omni.coding import (
    CODER_SLACK_BITS,
    NoiseModel,
    ZeroProbabilityError,
    arithmetic_roundtrip,
    fit_noise_model,
    shannon_code_length,
)


def _self_loop_model(p_stay=0.9):
    t = {}
    for a in "01":
        t[(a, a)] = p_stay
        t[(a, "1" if a == "0" else "0")] = 1.0 - p_stay
    return NoiseModel(["0", "1"], t, initial={"0": p_stay, "1": 1.0 - p_stay})


def test_fit_counts_bigrams():
    m = fit_noise_model(["a", "a", "b", "a"])
    assert m.alphabet == ["a", "b"]
    assert m.transition_prob("a", "a") == pytest.approx(0.5)
    assert m.transition_prob("a", "b") == pytest.approx(0.5)
    assert m.transition_prob("b", "a") == pytest.approx(1.0)
    m.validate()


def test_validate_rejects_bad_rows():
    with pytest.raises(ValueError):
        NoiseModel(["a"], {("a", "a"): 0.5}).validate()
    with pytest.raises(ValueError):
        NoiseModel(["a", "a"], {("a", "a"): 1.0}).validate()
    with pytest.raises(ValueError):
        NoiseModel(["a"], {("a", "a"): 1.0}, initial={"a": 0.7}).validate()


def test_shannon_length_frozen():
    model = _self_loop_model(0.9)
    bits = shannon_code_length(["0"] * 100, model)
    assert bits == pytest.approx(100 * -math.log2(0.9), abs=1e-9)
    assert shannon_code_length([], model) == 0.0


def test_shannon_length_deterministic_chain_is_plus_zero():
    m = NoiseModel(["a"], {("a", "a"): 1.0}, initial={"a": 1.0})
    bits = shannon_code_length(["a"] * 5, m)
    assert bits == 0.0 and math.copysign(1.0, bits) == 1.0


def test_zero_probability_error_names_the_step():
    model = _self_loop_model(1.0)  # forbids switching
    with pytest.raises(ZeroProbabilityError) as exc:
        shannon_code_length(["0", "0", "1"], model)
    assert exc.value.step == 2
    assert "'0' -> '1'" in str(exc.value)
    with pytest.raises(ZeroProbabilityError):
        arithmetic_roundtrip(["0", "1"], model)


def test_roundtrip_frozen_sequence():
    model = _self_loop_model(0.9)
    seq = ["0"] * 14 + ["1", "1"]
    bits, decoded = arithmetic_roundtrip(seq, model)
    assert decoded == seq
    assert set(bits) <= {"0", "1"}
    assert len(bits) <= shannon_code_length(seq, model) + CODER_SLACK_BITS


def test_roundtrip_empty():
    assert arithmetic_roundtrip([], _self_loop_model()) == ("", [])


def test_roundtrip_unknown_state():
    with pytest.raises(ZeroProbabilityError):
        arithmetic_roundtrip(["2"], _self_loop_model())


def _random_model(rng, size):
    alphabet = [str(i) for i in range(size)]
    transitions = {}
    for a in alphabet:
        weights = [rng.random() + 1e-3 for _ in alphabet]
        s = sum(weights)
        for b, w in zip(alphabet, weights):
            transitions[(a, b)] = w / s
    return NoiseModel(alphabet, transitions)


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=2, max_value=4))
@settings(max_examples=120, deadline=None)
def test_roundtrip_random_models(seed, size):
    rng = random.Random(seed)
    model = _random_model(rng, size)
    model.validate()
    seq = [rng.choice(model.alphabet)]
    for _ in range(rng.randrange(0, 40)):
        r = rng.random()
        cum = 0.0
        for b in model.alphabet:
            cum += model.transition_prob(seq[-1], b)
            if r < cum:
                seq.append(b)
                break
        else:
            seq.append(model.alphabet[-1])
    bits, decoded = arithmetic_roundtrip(seq, model)
    assert decoded == seq
    assert len(bits) <= shannon_code_length(seq, model) + CODER_SLACK_BITS


def test_fit_then_code_own_sequence():
    rng = random.Random(5)
    seq = [rng.choice("ab") for _ in range(200)]
    model = fit_noise_model(seq)
    bits, decoded = arithmetic_roundtrip(seq, model)
    assert decoded == seq
