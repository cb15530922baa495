"""Algorithmic prior mass of an output string, by two independent routes.

Monte Carlo route: run the machine lazily while filling each tape square on
first visit with a uniformly random symbol (probability 1/3 each).  The
fraction of runs that halt within the budget and print the target estimates
its prior mass from below (runs that would need more steps count as misses).

Enumeration route: sum (1/3)^|p| over every canonical program p up to a
length cap whose output is the target.  Canonical means the lazy run halts
consuming exactly |p|, which makes the counted set prefix-free, so the full
sum over all lengths can never exceed 1 (Kraft).  Both routes are lower
bounds on the same quantity and must agree within sampling noise plus the
mass the enumeration truncates away.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from . import machine
from .enumeration import programs
from .machine import DUAL, HALTED, LAZY, T3, run, to_str
from .workers import parallel_map

_MIX1 = 0x9E3779B97F4A7C15
_MIX2 = 0xBF58476D1CE4E5B9
_U64 = (1 << 64) - 1


def sample_seed(seed: int, index: int) -> int:
    """Per-sample generator seed; depends only on (master seed, index), so
    worker partitioning cannot change any sample."""
    return (seed * _MIX1 + (index + 1) * _MIX2) & _U64


def trinary_source(rng: random.Random):
    """Uniform symbols from 2-bit slices of the generator's bit stream,
    rejecting the fourth pattern.  Yields '0', '1', ','."""
    getrb = rng.getrandbits
    while True:
        block = getrb(62)
        for _ in range(31):
            v = block & 3
            block >>= 2
            if v != 3:
                yield machine.SYMBOLS[v]


def _run_guess(rng: random.Random, max_steps: int) -> str | None:
    """Output of one guessed run, or None if it does not halt in budget.

    Exactly machine.run_lazy_sampled over trinary_source(rng), inlined for
    the million-sample sweeps (the equivalence is pinned by a test).
    """
    getrb = rng.getrandbits
    block = 0
    left = 0
    tape: list[int] = []
    ip = 0
    reg = 0
    anchor = 0
    steps = 0
    out: list[int] = []
    while steps < max_steps:
        while len(tape) < ip + 2:
            while True:
                if left == 0:
                    block = getrb(62)
                    left = 31
                v = block & 3
                block >>= 2
                left -= 1
                if v != 3:
                    tape.append(v)
                    break
        op = tape[ip] * 3 + tape[ip + 1]
        ip += 2
        steps += 1
        if op < 3:
            out.append(op)
        elif op == 3:
            reg += 1
        elif op == 4:
            if reg:
                reg -= 1
        elif op == 5:
            if reg == 0:
                ip += 2
                while len(tape) < ip:
                    while True:
                        if left == 0:
                            block = getrb(62)
                            left = 31
                        v = block & 3
                        block >>= 2
                        left -= 1
                        if v != 3:
                            tape.append(v)
                            break
        elif op == 6:
            if reg:
                ip = anchor
        elif op == 7:
            return to_str(out)
        else:
            anchor = ip
    return None


@dataclass
class PriorEstimate:
    target: str
    p_hat: float
    method: str  # "mc" or "enum"
    samples: int | None
    max_len: int | None
    budget: int
    hits: int
    stderr: float | None
    exact: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "method": self.method,
            "p_hat": self.p_hat,
            "stderr": self.stderr,
            "samples": self.samples,
            "L": self.max_len,
            "B": self.budget,
            "hits": self.hits,
        }


def _mc_chunk(targets, budget, seed, bounds):
    lo, hi = bounds
    hit_for = {t: 0 for t in targets}
    for i in range(lo, hi):
        out = _run_guess(random.Random(sample_seed(seed, i)), budget)
        if out is not None and out in hit_for:
            hit_for[out] += 1
    return [hit_for[t] for t in targets]


def estimate_prior_mc_batch(
    targets: list[str],
    samples: int,
    budget: int,
    seed: int,
    workers: int = 1,
) -> dict[str, PriorEstimate]:
    """One sampling sweep scored against several targets at once.  Sample i
    is fully determined by sample_seed(seed, i), so this equals running
    estimate_prior_mc per target with the same arguments."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    uniq = list(dict.fromkeys(targets))
    chunk = max(1, min(samples, 50_000))
    bounds = [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]
    parts = parallel_map(partial(_mc_chunk, uniq, budget, seed), bounds, workers)
    totals = [sum(col) for col in zip(*parts)]
    result = {}
    for t, hits in zip(uniq, totals):
        p = hits / samples
        err = math.sqrt(p * (1.0 - p) / samples)
        result[t] = PriorEstimate(t, p, "mc", samples, None, budget, hits, err)
    return result


def estimate_prior_mc(
    target: str, samples: int, budget: int, seed: int, workers: int = 1
) -> PriorEstimate:
    return estimate_prior_mc_batch([target], samples, budget, seed, workers)[target]


def canonical_programs(max_len: int, budget: int, variant: str = T3):
    """Yield (program, output) over canonical programs up to max_len,
    shortlex order."""
    for prog in programs(max_len):
        p = to_str(prog)
        r = run(p, budget, LAZY, variant)
        if r.halted and r.consumed == len(p):
            yield p, r.output


def enumerate_prior(
    target: str, max_len: int, budget: int, variant: str = T3
) -> PriorEstimate:
    """Exact truncated prior mass: sum of 3^-|p| over canonical programs of
    length <= max_len printing the target."""
    mass = Fraction(0)
    hits = 0
    for p, out in canonical_programs(max_len, budget, variant):
        if out == target:
            mass += Fraction(1, 3 ** len(p))
            hits += 1
    return PriorEstimate(
        target, float(mass), "enum", None, max_len, budget, hits, None, mass
    )


@dataclass
class KraftReport:
    total_mass: Fraction
    program_count: int
    max_len: int
    budget: int

    def to_json(self) -> dict:
        return {
            "total_mass": float(self.total_mass),
            "program_count": self.program_count,
            "L": self.max_len,
            "B": self.budget,
        }


def kraft_sum(max_len: int, budget: int, variant: str = T3) -> KraftReport:
    """Sum of 3^-|p| over all canonical programs up to max_len.  Bounded by
    1 at every truncation because the canonical set is prefix-free."""
    mass = Fraction(0)
    count = 0
    for p, _ in canonical_programs(max_len, budget, variant):
        mass += Fraction(1, 3 ** len(p))
        count += 1
    return KraftReport(mass, count, max_len, budget)


def canonicalize_witness(witness: str, budget: int) -> str | None:
    """Shortest self-delimiting form of a witness found by the finite-mode
    search: the witness itself if its lazy run already halts cleanly, its
    consumed prefix if it halts early, else the witness with a HALT (or a
    padding instruction plus HALT, when a pending skip would eat the HALT)
    appended."""
    r = run(witness, budget, LAZY)
    if r.status == HALTED:
        return witness[: r.consumed]
    for suffix in (",1", ",,,1"):
        cand = witness + suffix
        r = run(cand, budget, LAZY)
        if r.status == HALTED and r.consumed == len(cand):
            return cand
    return None


@dataclass
class GapEntry:
    target: str
    k_hat: int | None
    k_canonical: int | None
    mass: float
    gap: float | None

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "k_hat": self.k_hat,
            "k_canonical": self.k_canonical,
            "mass": self.mass,
            "gap": self.gap,
        }


@dataclass
class GapReport:
    entries: list[GapEntry]
    max_len: int
    budget: int

    @property
    def gaps(self) -> list[float]:
        return [e.gap for e in self.entries if e.gap is not None]

    def to_json(self) -> dict:
        gaps = self.gaps
        return {
            "L": self.max_len,
            "B": self.budget,
            "targets": [e.to_json() for e in self.entries],
            "min_gap": min(gaps) if gaps else None,
            "max_gap": max(gaps) if gaps else None,
            "spread": (max(gaps) - min(gaps)) if gaps else None,
        }


def coding_theorem_gap(targets: list[str], max_len: int, budget: int) -> GapReport:
    """Per target: gap = -log3(enumerated mass) - K_hat_canonical.

    The canonicalized witness itself sits in the enumeration (its length is
    covered by construction), so mass >= 3^-k and the gap cannot be
    positive; how negative it goes shows how much mass short programs share.
    """
    from .complexity import shortest_program_upper_bound

    entries = []
    for t in targets:
        bound = shortest_program_upper_bound(t, max_len, budget)
        if bound.k_hat is None:
            entries.append(GapEntry(t, None, None, 0.0, None))
            continue
        canon = canonicalize_witness(bound.witness, budget)
        if canon is None:
            entries.append(GapEntry(t, bound.k_hat, None, 0.0, None))
            continue
        level = max(max_len, len(canon))
        est = enumerate_prior(t, level, budget)
        gap = -math.log(est.exact, 3) - len(canon)
        entries.append(GapEntry(t, bound.k_hat, len(canon), est.p_hat, gap))
    return GapReport(entries, max_len, budget)


@dataclass
class CompilerCheckReport:
    max_len: int
    budget: int
    outputs_checked: int
    output_counterexamples: list[str]
    targets_checked: int
    mass_counterexamples: list[str]

    @property
    def ok(self) -> bool:
        return not self.output_counterexamples and not self.mass_counterexamples

    def to_json(self) -> dict:
        return {
            "L": self.max_len,
            "B": self.budget,
            "outputs_checked": self.outputs_checked,
            "output_counterexamples": self.output_counterexamples,
            "targets_checked": self.targets_checked,
            "mass_counterexamples": self.mass_counterexamples,
            "ok": self.ok,
        }


def compiler_prefix_check(max_len: int, budget: int) -> CompilerCheckReport:
    """Hosting inequality for the one-symbol compiler prefix "0".

    Output equality: DUAL on "0"+p matches T3 on p for every |p| <= max_len
    in finite mode (DUAL gets one extra step for the selector fetch).  Mass
    dominance: each target with T3 mass at max_len keeps at least a third of
    it under DUAL at max_len+1, since "0"+p costs exactly one more symbol.
    """
    out_bad: list[str] = []
    checked = 0
    for prog in programs(max_len):
        p = to_str(prog)
        base = run(p, budget) if p else run("", budget)
        hosted = run("0" + p, budget + 1, variant=DUAL)
        checked += 1
        if base.output != hosted.output:
            out_bad.append(p)

    t3_mass: dict[str, Fraction] = {}
    for p, out in canonical_programs(max_len, budget, T3):
        t3_mass[out] = t3_mass.get(out, Fraction(0)) + Fraction(1, 3 ** len(p))
    dual_mass: dict[str, Fraction] = {}
    for p, out in canonical_programs(max_len + 1, budget, DUAL):
        dual_mass[out] = dual_mass.get(out, Fraction(0)) + Fraction(1, 3 ** len(p))
    mass_bad = [
        t
        for t, m in sorted(t3_mass.items())
        if dual_mass.get(t, Fraction(0)) < Fraction(m, 3)
    ]
    return CompilerCheckReport(
        max_len, budget, checked, out_bad, len(t3_mass), mass_bad
    )
