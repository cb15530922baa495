"""Interpreter for a tiny prefix machine over the alphabet {'0', '1', ','}.

Programs are strings of those three symbols.  The head fetches two symbols
at a time and decodes them as one instruction:

    00  OUT0    append '0' to the output
    01  OUT1    append '1' to the output
    0,  OUTC    append ',' to the output
    10  INC     register += 1
    11  DEC     register -= 1, saturating at 0
    1,  SKIPZ   if register == 0, skip the next instruction; the skipped
                squares count as consumed because the head moves over them
    ,0  LOOP    if register != 0, jump to the anchor (defaults to square 0)
    ,1  HALT    stop; the output is final
    ,,  MARK    set the anchor to the next instruction's square

Variants:

* T3    -- the table above.
* T3C   -- conditional variant.  ',,' becomes READAUX: append the entire
           auxiliary tape to the output (no-op when the aux tape is empty).
           MARK is unavailable, so the anchor stays at square 0.
* DUAL  -- the first fetched symbol selects a table: '0' runs the rest as
           T3, '1' runs the rest as T3 with the OUT0/OUT1 emissions
           swapped, ',' halts immediately with empty output.  The one
           selector symbol is the whole cost of hosting a T3 program.

Run modes:

* FINITE -- the program is all the tape there is.  Fetching past the end
            (including over a single trailing symbol, which is consumed)
            halts with status 'halted'.
* LAZY   -- the tape is unbounded in principle and symbols come from a
            source on first visit.  Only HALT halts; running out of budget
            (or, for a fixed program string, out of symbols) gives status
            'budget' with the partial output.

A program is *canonical* when its lazy-mode run halts having consumed
exactly its own length.  Canonical programs are prefix-free by
construction: a halting run never looks at squares past the ones it
consumed, so no proper extension can be canonical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

SYMBOLS = "01,"
_IDX = {"0": 0, "1": 1, ",": 2}

FINITE = "finite"
LAZY = "lazy"

T3 = "t3"
T3C = "t3c"
DUAL = "dual"

HALTED = "halted"
BUDGET = "budget"

# opcode ids, laid out as 3 * first_symbol + second_symbol
_OUT0, _OUT1, _OUTC, _INC, _DEC, _SKIPZ, _LOOP, _HALT, _MARK = range(9)


class Instruction(enum.Enum):
    OUT0 = "00"
    OUT1 = "01"
    OUTC = "0,"
    INC = "10"
    DEC = "11"
    SKIPZ = "1,"
    LOOP = ",0"
    HALT = ",1"
    MARK = ",,"


_INSTRUCTION_BY_ID = [
    Instruction.OUT0,
    Instruction.OUT1,
    Instruction.OUTC,
    Instruction.INC,
    Instruction.DEC,
    Instruction.SKIPZ,
    Instruction.LOOP,
    Instruction.HALT,
    Instruction.MARK,
]


def decode_instruction(first: str, second: str) -> Instruction:
    """Decode a symbol pair.  Total: every pair maps to an instruction."""
    try:
        return _INSTRUCTION_BY_ID[3 * _IDX[first] + _IDX[second]]
    except KeyError:
        raise ValueError(f"not a symbol: {first!r}/{second!r}") from None


@dataclass
class RunResult:
    """Outcome of one run.

    consumed counts tape squares the head visited (highest index + 1).
    For lazy sampled runs, program holds the realized visited prefix.
    """

    program: str
    output: str
    status: str
    consumed: int
    steps: int
    truncated: bool = False

    @property
    def halted(self) -> bool:
        return self.status == HALTED

    def to_json(self) -> dict:
        return {
            "program": self.program,
            "output": self.output,
            "status": self.status,
            "consumed": self.consumed,
            "steps": self.steps,
        }


def to_ints(s: str) -> list[int]:
    try:
        return [_IDX[c] for c in s]
    except KeyError as e:
        raise ValueError(f"not a machine symbol: {e.args[0]!r}") from None


def to_str(ints) -> str:
    return "".join(map(SYMBOLS.__getitem__, ints))


def _run_ints(prog, max_steps, finite, readaux, aux, out_cap=None):
    """Core fetch-decode-execute loop on int symbol sequences.

    Returns (out_ints, halted, consumed, steps, truncated).  readaux=True
    gives T3C semantics for opcode ',,'.  out_cap stops output growth at
    the cap (execution continues) and flips the truncated flag.
    """
    n = len(prog)
    ip = 0
    reg = 0
    anchor = 0
    consumed = 0
    steps = 0
    truncated = False
    out: list[int] = []
    while steps < max_steps:
        if ip >= n:
            # off the end of the given string: a halt in finite mode, out
            # of tape (not a real halt) in lazy mode
            return out, finite, consumed, steps, truncated
        if ip == n - 1:
            consumed = n  # the lone trailing symbol is consumed
            return out, finite, consumed, steps, truncated
        op = prog[ip] * 3 + prog[ip + 1]
        ip += 2
        if ip > consumed:
            consumed = ip
        steps += 1
        if op < 3:  # OUT0 / OUT1 / OUTC
            if out_cap is None or len(out) < out_cap:
                out.append(op)
            else:
                truncated = True
        elif op == _INC:
            reg += 1
        elif op == _DEC:
            if reg:
                reg -= 1
        elif op == _SKIPZ:
            if reg == 0:
                ip += 2
                c = ip if ip <= n else n
                if c > consumed:
                    consumed = c
        elif op == _LOOP:
            if reg:
                ip = anchor
        elif op == _HALT:
            return out, True, consumed, steps, truncated
        elif readaux:  # ',,' in T3C
            if aux:
                if out_cap is None:
                    out.extend(aux)
                else:
                    room = out_cap - len(out)
                    if room < len(aux):
                        out.extend(aux[:room])
                        truncated = True
                    else:
                        out.extend(aux)
        else:  # ',,' in T3: MARK
            anchor = ip
    return out, False, consumed, steps, truncated


def run(
    program: str,
    max_steps: int,
    mode: str = FINITE,
    variant: str = T3,
    aux: str | None = None,
    out_cap: int | None = None,
) -> RunResult:
    """Run a fixed program string.

    pre: max_steps >= 1; aux is given exactly for variant T3C.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if mode not in (FINITE, LAZY):
        raise ValueError(f"unknown mode: {mode!r}")
    if variant == T3C:
        if aux is None:
            raise ValueError("variant t3c requires an aux tape")
    elif aux is not None:
        raise ValueError(f"variant {variant} takes no aux tape")
    prog = to_ints(program)
    finite = mode == FINITE

    if variant == DUAL:
        return _run_dual(program, prog, max_steps, finite, out_cap)

    aux_ints = to_ints(aux) if aux is not None else None
    out, halted, consumed, steps, truncated = _run_ints(
        prog, max_steps, finite, variant == T3C, aux_ints, out_cap
    )
    return RunResult(
        program, to_str(out), HALTED if halted else BUDGET, consumed, steps, truncated
    )


def _run_dual(program, prog, max_steps, finite, out_cap):
    if not prog:
        status = HALTED if finite else BUDGET
        return RunResult(program, "", status, 0, 0)
    sel = prog[0]
    if sel == 2:  # ',' selector: halt with empty output
        return RunResult(program, "", HALTED, 1, 1)
    out, halted, consumed, steps, truncated = _run_ints(
        prog[1:], max_steps - 1, finite, False, None, out_cap
    )
    if sel == 1:  # swapped table: OUT0 emits '1', OUT1 emits '0'
        out = [1 - v if v < 2 else v for v in out]
    return RunResult(
        program,
        to_str(out),
        HALTED if halted else BUDGET,
        consumed + 1,
        steps + 1,
        truncated,
    )


def run_lazy_sampled(source, max_steps: int) -> RunResult:
    """Lazy run on an unbounded tape fed by `source` (iterator of symbols).

    Squares are filled on first visit only, including squares SKIPZ moves
    over.  On halt, the visited prefix is the realized program; by the
    canonical-program argument it is prefix-free against every other
    realizable halting program.  A finite source running dry counts as
    starvation, same as a fixed program read past its end in lazy mode.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    draw = source.__next__ if hasattr(source, "__next__") else source
    tape: list[int] = []
    fill = tape.append

    def need(upto: int) -> bool:
        while len(tape) < upto:
            try:
                fill(_IDX[draw()])
            except StopIteration:
                return False
        return True

    ip = 0
    reg = 0
    anchor = 0
    steps = 0
    out: list[int] = []
    while steps < max_steps:
        if not need(ip + 2):
            break
        op = tape[ip] * 3 + tape[ip + 1]
        ip += 2
        steps += 1
        if op < 3:
            out.append(op)
        elif op == _INC:
            reg += 1
        elif op == _DEC:
            if reg:
                reg -= 1
        elif op == _SKIPZ:
            if reg == 0:
                ip += 2
                if not need(ip):
                    break
        elif op == _LOOP:
            if reg:
                ip = anchor
        elif op == _HALT:
            return RunResult(to_str(tape), to_str(out), HALTED, len(tape), steps)
        else:
            anchor = ip
    return RunResult(to_str(tape), to_str(out), BUDGET, len(tape), steps)


def is_canonical(
    program: str, budget: int, variant: str = T3, aux: str | None = None
) -> bool:
    """True iff the lazy-mode run halts consuming exactly len(program)."""
    r = run(program, budget, LAZY, variant, aux)
    return r.halted and r.consumed == len(program)
