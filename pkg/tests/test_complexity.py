import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omni import complexity, machine
from omni.complexity import (
    compressibility_census,
    conditional_upper_bound,
    mutual_information_estimate,
    shortest_program_upper_bound,
)


def test_frozen_upper_bounds():
    assert shortest_program_upper_bound("", 4, 100).k_hat == 0
    b = shortest_program_upper_bound("0", 4, 100)
    assert (b.k_hat, b.witness) == (2, "00")
    b = shortest_program_upper_bound("0,1", 8, 500)
    assert (b.k_hat, b.witness) == (6, "000,01")


def test_search_miss_returns_none():
    b = shortest_program_upper_bound("0101", 6, 500)
    assert b.k_hat is None and b.witness is None


def test_ten_zeros_needs_the_full_literal():
    # loop constructions cost 2k+2m+6 >= 20 symbols for k*m = 10 zeros, so
    # nothing below the literal exists; checked to L=10 here, L=14 offline
    assert shortest_program_upper_bound("0" * 10, 10, 1000).k_hat is None
    lit = machine.run("00" * 10, 100)
    loop = machine.run("1010,,000000000011,0", 1000)
    assert lit.output == loop.output == "0" * 10


def test_conditional_uses_aux_copies():
    b = conditional_upper_bound("0101", "0101", 6, 100)
    assert (b.k_hat, b.witness, b.conditional_on) == (2, ",,", "0101")
    b = conditional_upper_bound("0101", "01", 6, 100)
    assert (b.k_hat, b.witness) == (4, ",,,,")


def test_conditional_never_worse_than_plain_for_unconditional_witness():
    # the plain literal contains no ',,' block, so it runs unchanged on aux
    plain = shortest_program_upper_bound("0,", 6, 100)
    cond = conditional_upper_bound("0,", "111", 6, 100)
    assert cond.k_hat <= plain.k_hat


def test_mutual_information_frozen():
    m = mutual_information_estimate("0101", "0101", 8, 500)
    assert (m.value, m.clamped) == (6, False)
    assert m.plain.k_hat == 8 and m.conditional.k_hat == 2


def test_mutual_information_none_propagates():
    m = mutual_information_estimate("0", "000000", 4, 100)
    assert m.value is None


def test_mutual_information_clamps_at_zero():
    # y is easy, conditioning on junk cannot push the estimate negative
    m = mutual_information_estimate("111", "0", 4, 100)
    assert m.value == 0 and not m.clamped


def test_census_frozen_small():
    rep = compressibility_census(2, 1, 6, 200)
    assert (rep.total, rep.compressible, rep.fraction) == (9, 0, 0.0)
    assert rep.to_json()["L"] == 6


def test_census_counting_bound_small():
    # fewer than 3^(n-c) programs are short enough, so the fraction of
    # n-symbol strings compressible by c symbols stays below 3^-c
    for n in (1, 2, 3):
        for c in (1, 2):
            rep = compressibility_census(n, c, n + 2, 500)
            assert rep.total == 3**n
            assert rep.fraction < 3.0**-c


def test_census_worker_count_invisible():
    a = compressibility_census(2, 1, 5, 200, workers=1)
    b = compressibility_census(2, 1, 5, 200, workers=3)
    assert a.to_json() == b.to_json()


def test_census_validation():
    with pytest.raises(ValueError):
        compressibility_census(0, 1, 4, 100)
    with pytest.raises(ValueError):
        compressibility_census(2, 0, 4, 100)


@given(
    st.text(alphabet="01,", max_size=5),
    st.text(alphabet="01,", max_size=3),
    st.integers(min_value=1, max_value=60),
)
@settings(max_examples=300, deadline=None)
def test_match_search_agrees_with_plain_runner(p, target, budget):
    # the pruned matcher must answer exactly "halts in budget with output ==
    # target"; its aborts may only skip programs that cannot match
    r = machine.run(p, budget)
    expected = r.halted and r.output == target
    assert complexity._matches(machine.to_ints(p), machine.to_ints(target), budget) == expected
