"""Command line front end.

Every subcommand writes one JSON report (or a JSONL stream for the two
registry-shaped outputs) to --out or stdout.  Reports carry "schema": 1;
JSONL streams carry it in their header line.  Exit codes: 0 success, 1
usage error, 2 guarded runtime error (bad program text, zero-probability
state, snapshot/prefix mismatch, and similar).

OMNI_SEED in the environment overrides --seed wherever a seed is consumed,
so sweeps can be re-pointed without editing scripts.  Identical invocations
produce byte-identical output, regardless of --workers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import complexity, enumeration, machine, multiverse, prior, ssa
from .coding import ZeroProbabilityError, arithmetic_roundtrip, fit_noise_model, shannon_code_length

_MODES = {"finite": machine.FINITE, "lazy": machine.LAZY}
_VARIANTS = {"t3": machine.T3, "t3c": machine.T3C, "dual": machine.DUAL}


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2 (2 is reserved for
    # guarded runtime errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="omni", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--out", help="write the report here instead of stdout")
        return sp

    sp = add("enumerate", "list programs by index in the shortlex bijection")
    sp.add_argument("--from", dest="start", type=int, required=True)
    sp.add_argument("--to", dest="stop", type=int, required=True)

    sp = add("run", "run one program and report the outcome")
    sp.add_argument("--program", required=True)
    sp.add_argument("--max-steps", type=int, default=1000)
    sp.add_argument("--mode", choices=sorted(_MODES), default="finite")
    sp.add_argument("--variant", choices=sorted(_VARIANTS), default="t3")
    sp.add_argument("--aux", default=None)

    sp = add("dovetail", "share steps across all programs, snapshot the registry")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--mode", choices=sorted(_MODES), default="finite")
    sp.add_argument("--workers", type=int, default=1)

    sp = add("dedup", "group registry entries by output prefix")
    sp.add_argument("--snapshot", required=True)
    sp.add_argument("--prefix-len", dest="prefix_len", type=int, required=True)

    sp = add("census", "fraction of n-symbol outputs compressible by c")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("kcomp", "shortest-program upper bound for a target")
    sp.add_argument("--target", required=True)
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--cond", default=None, help="condition on this string via the aux tape")

    sp = add("mutual", "algorithmic mutual information estimate")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)

    sp = add("prior", "Monte Carlo prior mass of a target output")
    sp.add_argument("--target", required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("prior-exact", "enumerated prior mass of a target output")
    sp.add_argument("--target", required=True)
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--variant", choices=sorted(_VARIANTS), default="t3")

    sp = add("kraft", "total canonical program mass up to a length cap")
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp.add_argument("--variant", choices=sorted(_VARIANTS), default="t3")

    sp = add("coding-gap", "compare -log3(prior mass) against shortest witnesses")
    sp.add_argument("--target", action="append", required=True)
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)

    sp = add("demo-compiler", "hosting check for the one-symbol compiler prefix")
    sp.add_argument("--max-len", dest="max_len", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True)

    sp = add("entropy", "fit a bigram model to states and code them")
    sp.add_argument("--x", required=True, help="comma-separated state sequence")

    sp = add("ssa", "run the self-modifying learner")
    sp.add_argument("--env", choices=["switching"], default="switching")
    sp.add_argument("--period", type=int, required=True)
    sp.add_argument("--lifetime", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trace", default=None, help="also write a JSONL step trace here")

    return p


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps({"schema": 1, **payload}, indent=2) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_jsonl(rows, out: str | None) -> None:
    text = "".join(json.dumps(r) + "\n" for r in rows)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    env = os.environ.get("OMNI_SEED")
    return int(env) if env is not None else args.seed


def _load_registry(path: str) -> enumeration.DovetailRegistry:
    with open(path) as f:
        lines = [json.loads(line) for line in f if line.strip()]
    if not lines or lines[0].get("kind") != "dovetail-registry":
        raise ValueError("snapshot is not a dovetail registry")
    head = lines[0]
    entries = {
        row["k"]: enumeration.RegistryEntry(
            row["program"], row["steps"], row["halted"], row["output_prefix"], row["truncated"]
        )
        for row in lines[1:]
    }
    return enumeration.DovetailRegistry(
        entries, head["executed_steps"], head["requested_steps"], head["cap"], head["mode"]
    )


def _cmd_enumerate(args):
    if args.start < 1 or args.stop < args.start:
        raise ValueError("need 1 <= from <= to")
    progs = [
        {"k": k, "program": enumeration.index_to_program(k)}
        for k in range(args.start, args.stop + 1)
    ]
    _emit_json({"from": args.start, "to": args.stop, "programs": progs}, args.out)


def _cmd_run(args):
    variant = _VARIANTS[args.variant]
    aux = args.aux
    if variant == machine.T3C and aux is None:
        aux = ""
    r = machine.run(args.program, args.max_steps, _MODES[args.mode], variant, aux)
    _emit_json(r.to_json(), args.out)


def _cmd_dovetail(args):
    reg = enumeration.dovetail(args.steps, mode=_MODES[args.mode], workers=args.workers)
    _emit_jsonl(reg.snapshot_rows(), args.out)


def _cmd_dedup(args):
    reg = _load_registry(args.snapshot)
    groups = multiverse.dedup_universes(reg, args.prefix_len)
    _emit_json(
        {
            "kind": "dedup",
            "prefix_len": args.prefix_len,
            "groups": [{"prefix": g.prefix, "members": g.members} for g in groups],
        },
        args.out,
    )


def _cmd_census(args):
    rep = complexity.compressibility_census(
        args.n, args.c, args.max_len, args.budget, workers=args.workers
    )
    _emit_json(rep.to_json(), args.out)


def _cmd_kcomp(args):
    if args.cond is None:
        b = complexity.shortest_program_upper_bound(args.target, args.max_len, args.budget)
    else:
        b = complexity.conditional_upper_bound(args.target, args.cond, args.max_len, args.budget)
    _emit_json(b.to_json(), args.out)


def _cmd_mutual(args):
    m = complexity.mutual_information_estimate(args.x, args.y, args.max_len, args.budget)
    _emit_json(m.to_json(), args.out)


def _cmd_prior(args):
    est = prior.estimate_prior_mc(
        args.target, args.samples, args.budget, _seed(args), workers=args.workers
    )
    _emit_json(est.to_json(), args.out)


def _cmd_prior_exact(args):
    est = prior.enumerate_prior(args.target, args.max_len, args.budget, _VARIANTS[args.variant])
    _emit_json(est.to_json(), args.out)


def _cmd_kraft(args):
    rep = prior.kraft_sum(args.max_len, args.budget, _VARIANTS[args.variant])
    _emit_json(rep.to_json(), args.out)


def _cmd_coding_gap(args):
    rep = prior.coding_theorem_gap(args.target, args.max_len, args.budget)
    _emit_json(rep.to_json(), args.out)


def _cmd_demo_compiler(args):
    rep = prior.compiler_prefix_check(args.max_len, args.budget)
    _emit_json(rep.to_json(), args.out)


def _cmd_entropy(args):
    states = args.x.split(",")
    if not states or any(not s for s in states):
        raise ValueError("--x must be a comma-separated list of nonempty state names")
    model = fit_noise_model(states)
    bits = shannon_code_length(states, model)
    encoded, decoded = arithmetic_roundtrip(states, model)
    _emit_json(
        {
            "states": len(states),
            "alphabet": model.alphabet,
            "shannon_bits": bits,
            "encoded_bits": len(encoded),
            "roundtrip_ok": decoded == states,
        },
        args.out,
    )


def _cmd_ssa(args):
    if args.period < 1 or args.lifetime < 1:
        raise ValueError("need period >= 1 and lifetime >= 1")
    seed = _seed(args)
    env = ssa.SwitchingBandit(args.period)
    trace = ssa.run_learner(env, args.lifetime, seed, record_steps=args.trace is not None)
    if args.trace:
        header = {
            "schema": 1,
            "kind": "learner-trace",
            "period": args.period,
            "steps": args.lifetime,
            "seed": seed,
        }
        rows = [header]
        rows.extend(trace.jsonl_rows())
        _emit_jsonl(rows, args.trace)
    payload = trace.summary_json()
    payload["period"] = args.period
    _emit_json(payload, args.out)


_DISPATCH = {
    "enumerate": _cmd_enumerate,
    "run": _cmd_run,
    "dovetail": _cmd_dovetail,
    "dedup": _cmd_dedup,
    "census": _cmd_census,
    "kcomp": _cmd_kcomp,
    "mutual": _cmd_mutual,
    "prior": _cmd_prior,
    "prior-exact": _cmd_prior_exact,
    "kraft": _cmd_kraft,
    "coding-gap": _cmd_coding_gap,
    "demo-compiler": _cmd_demo_compiler,
    "entropy": _cmd_entropy,
    "ssa": _cmd_ssa,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _DISPATCH[args.command](args)
    except (ValueError, ZeroProbabilityError, OSError, json.JSONDecodeError, KeyError) as e:
        sys.stderr.write(f"omni: error: {e}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
