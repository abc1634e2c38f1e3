"""Set register machines over a materialized constructible level.

Seven instructions, 1-based program lines, registers r_0..r_k.  A run halts
when the active line exceeds the program length.  Limit stages are computed
for eventually periodic runs: once a configuration repeats, the ω-limit takes
the least line of the cycle and, per register, the <_L-least value seen in
the cycle.  That is exactly the liminf of a periodic tail.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .complexity import is_delta0
from .errors import (
    AssemblyError, ClassificationError, NotInLevelError, ValueEscapesLevelError,
)
from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Formula, Implies, Membership, Not, Or,
    free_vars,
)
from .hfs import HSet, format_set
from .levels import Level, build, l_min
from .macros import expand_all


@dataclass(frozen=True)
class Clear:
    i: int


@dataclass(frozen=True)
class Add:
    i: int
    j: int


@dataclass(frozen=True)
class Copy:
    i: int
    j: int


@dataclass(frozen=True)
class Take:
    i: int
    j: int


@dataclass(frozen=True)
class Remove:
    i: int
    j: int


@dataclass(frozen=True)
class JumpIfEmpty:
    i: int
    k: int


@dataclass(frozen=True)
class JumpIfMember:
    i: int
    j: int
    k: int


Instruction = Union[Clear, Add, Copy, Take, Remove, JumpIfEmpty, JumpIfMember]

MNEMONIC = {Clear: "CLEAR", Add: "ADD", Copy: "COPY", Take: "TAKE", Remove: "REMOVE",
            JumpIfEmpty: "JEMPTY", JumpIfMember: "JMEM"}
BY_MNEMONIC = {v: k for k, v in MNEMONIC.items()}
ARITY = {Clear: 1, Add: 2, Copy: 2, Take: 2, Remove: 2, JumpIfEmpty: 2, JumpIfMember: 3}


def _registers(ins: Instruction) -> tuple[int, ...]:
    if isinstance(ins, Clear):
        return (ins.i,)
    if isinstance(ins, JumpIfEmpty):
        return (ins.i,)
    return (ins.i, ins.j)


@dataclass(frozen=True)
class SrmProgram:
    lines: tuple[Instruction, ...]

    def __post_init__(self):
        n = len(self.lines)
        for pos, ins in enumerate(self.lines, 1):
            if isinstance(ins, (JumpIfEmpty, JumpIfMember)) and not 1 <= ins.k <= n + 1:
                raise AssemblyError(f"line {pos}: jump target {ins.k} outside 1..{n + 1}")
            if any(r < 0 for r in _registers(ins)):
                raise AssemblyError(f"line {pos}: negative register index")

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def register_count(self) -> int:
        return max((r for ins in self.lines for r in _registers(ins)), default=-1) + 1


@dataclass(frozen=True)
class Configuration:
    line: int
    registers: tuple[HSet, ...]

    def to_json(self) -> dict:
        return {"line": self.line, "registers": [format_set(r) for r in self.registers]}


@dataclass(frozen=True, order=True)
class OrdinalClock:
    """The stage ω·limit_count + step."""
    limit_count: int = 0
    step: int = 0

    def tick(self) -> OrdinalClock:
        return OrdinalClock(self.limit_count, self.step + 1)

    def limit(self) -> OrdinalClock:
        return OrdinalClock(self.limit_count + 1, 0)

    def __str__(self) -> str:
        return f"ω·{self.limit_count}+{self.step}"

    def to_json(self) -> dict:
        return {"limitCount": self.limit_count, "step": self.step}


HALTED, BUDGET_EXHAUSTED, LIMIT_UNDETERMINED = "halted", "budget_exhausted", "limit_undetermined"


@dataclass
class RunResult:
    outcome: str
    configuration: Configuration
    clock: OrdinalClock
    trace: list[tuple[OrdinalClock, Configuration]] = field(default_factory=list)
    values: set = field(default_factory=set, repr=False)
    diagnostics: dict = field(default_factory=dict)

    @property
    def halted(self) -> bool:
        return self.outcome == HALTED

    @property
    def output(self) -> HSet:
        return self.configuration.registers[0]

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "configuration": self.configuration.to_json(),
                "clock": self.clock.to_json(), "diagnostics": self.diagnostics}


def initial(p: SrmProgram, inputs: Sequence[HSet], lv: Level) -> Configuration:
    count = max(p.register_count, len(inputs), 1)
    empty = lv.engine.empty
    for x in inputs:
        if x not in lv.position:
            raise NotInLevelError(f"input {format_set(x)} is not in L_{lv.index}")
    return Configuration(1, tuple(inputs) + (empty,) * (count - len(inputs)))


def step(p: SrmProgram, c: Configuration, lv: Level) -> Optional[Configuration]:
    """The successor configuration, or None when the computation has halted."""
    if c.line > len(p.lines) or c.line < 1:
        return None
    ins = p.lines[c.line - 1]
    r = c.registers
    eng = lv.engine
    nxt = c.line + 1
    if isinstance(ins, JumpIfEmpty):
        return Configuration(ins.k if r[ins.i].is_empty else nxt, r)
    if isinstance(ins, JumpIfMember):
        return Configuration(ins.k if r[ins.i] in r[ins.j] else nxt, r)
    if isinstance(ins, Clear):
        target, value = ins.i, eng.empty
    elif isinstance(ins, Add):
        target, value = ins.j, eng.add_element(r[ins.j], r[ins.i])
    elif isinstance(ins, Copy):
        target, value = ins.j, r[ins.i]
    elif isinstance(ins, Take):
        if r[ins.i].is_empty:
            return Configuration(nxt, r)
        target, value = ins.j, l_min(lv, r[ins.i].elements)
    else:  # Remove: r_j := r_j ∖ {r_i}
        target, value = ins.j, eng.diff_element(r[ins.j], r[ins.i])
    if value not in lv.position:
        raise ValueEscapesLevelError(
            f"line {c.line}: value {format_set(value)} is not in L_{lv.index}")
    regs = r[:target] + (value,) + r[target + 1:]
    return Configuration(nxt, regs)


def limit_configuration(cycle: Sequence[Configuration], lv: Level) -> Configuration:
    """liminf of a periodic tail: least line, <_L-least value per register."""
    line = min(c.line for c in cycle)
    regs = tuple(l_min(lv, {c.registers[i] for c in cycle}) for i in range(len(cycle[0].registers)))
    return Configuration(line, regs)


DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_LIMITS = 3


def run(p: SrmProgram, inputs: Sequence[HSet], lv: Level, max_steps: int = DEFAULT_MAX_STEPS,
        max_limits: int = DEFAULT_MAX_LIMITS, trace: bool = False,
        collect_values: bool = False) -> RunResult:
    c = initial(p, inputs, lv)
    clock = OrdinalClock()
    out_trace: list[tuple[OrdinalClock, Configuration]] = []
    values: set = set(c.registers) if collect_values else set()
    seen: dict[Configuration, int] = {}
    segment: list[Configuration] = []
    while True:
        if trace:
            out_trace.append((clock, c))
        if c.line > len(p.lines):
            return RunResult(HALTED, c, clock, out_trace, values)
        if c in seen:
            cycle = segment[seen[c]:]
            info = {"cycleStart": seen[c], "cycleLength": len(cycle),
                    "limitsTaken": clock.limit_count}
            if clock.limit_count >= max_limits:
                return RunResult(LIMIT_UNDETERMINED, c, clock, out_trace, values, info)
            c = limit_configuration(cycle, lv)
            clock = clock.limit()
            seen.clear()
            segment.clear()
            continue
        if clock.step >= max_steps:
            return RunResult(BUDGET_EXHAUSTED, c, clock, out_trace, values,
                             {"maxSteps": max_steps})
        seen[c] = len(segment)
        segment.append(c)
        c = step(p, c, lv)
        clock = clock.tick()
        if collect_values:
            values.update(c.registers)


# -- assembly text -------------------------------------------------------------------


def assemble(text: str) -> SrmProgram:
    lines: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        cls = BY_MNEMONIC.get(parts[0].upper())
        if cls is None:
            raise AssemblyError(f"line {lineno}: unknown instruction {parts[0]!r}")
        if len(parts) - 1 != ARITY[cls]:
            raise AssemblyError(f"line {lineno}: {parts[0]} takes {ARITY[cls]} operands")
        try:
            args = [int(a) for a in parts[1:]]
        except ValueError:
            raise AssemblyError(f"line {lineno}: operands must be decimal integers") from None
        lines.append(cls(*args))
    return SrmProgram(tuple(lines))


def disassemble(p: SrmProgram) -> str:
    out = []
    for ins in p.lines:
        ops = [getattr(ins, f) for f in ins.__dataclass_fields__]
        out.append(" ".join([MNEMONIC[type(ins)]] + [str(o) for o in ops]))
    return "\n".join(out) + ("\n" if out else "")


# -- Δ_0 decision programs -------------------------------------------------------------


class _Label:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


class _Compiler:
    """Emit code jumping to a true or false label.

    Register frame: inputs in 0..k-1, register k is never written (so
    ``JEMPTY k L`` is an unconditional jump), then one scratch register per
    bound variable and per quantifier or subset loop.
    """

    def __init__(self, n_inputs: int):
        self.code: list = []
        self.zero = n_inputs
        self.next_reg = n_inputs + 1
        self.labels = itertools.count()

    def reg(self) -> int:
        r = self.next_reg
        self.next_reg += 1
        return r

    def label(self) -> _Label:
        return _Label(f"L{next(self.labels)}")

    def mark(self, lab: _Label) -> None:
        self.code.append(lab)

    def emit(self, cls, *args) -> None:
        self.code.append((cls, args))

    def goto(self, lab: _Label) -> None:
        self.emit(JumpIfEmpty, self.zero, lab)

    def subset(self, a: int, b: int, t_lab: _Label, f_lab: _Label) -> None:
        t, e = self.reg(), self.reg()
        loop, found = self.label(), self.label()
        self.emit(Copy, a, t)
        self.mark(loop)
        self.emit(JumpIfEmpty, t, t_lab)
        self.emit(Take, t, e)
        self.emit(JumpIfMember, e, b, found)
        self.goto(f_lab)
        self.mark(found)
        self.emit(Remove, e, t)
        self.goto(loop)

    def gen(self, f: Formula, env: dict[str, int], t_lab: _Label, f_lab: _Label) -> None:
        if isinstance(f, Membership):
            self.emit(JumpIfMember, env[f.left], env[f.right], t_lab)
            self.goto(f_lab)
        elif isinstance(f, Equality):
            a, b = env[f.left], env[f.right]
            if a == b:
                self.goto(t_lab)
                return
            mid = self.label()
            self.subset(a, b, mid, f_lab)
            self.mark(mid)
            self.subset(b, a, t_lab, f_lab)
        elif isinstance(f, Not):
            self.gen(f.body, env, f_lab, t_lab)
        elif isinstance(f, And):
            mid = self.label()
            self.gen(f.left, env, mid, f_lab)
            self.mark(mid)
            self.gen(f.right, env, t_lab, f_lab)
        elif isinstance(f, Or):
            mid = self.label()
            self.gen(f.left, env, t_lab, mid)
            self.mark(mid)
            self.gen(f.right, env, t_lab, f_lab)
        elif isinstance(f, Implies):
            mid = self.label()
            self.gen(f.left, env, mid, t_lab)
            self.mark(mid)
            self.gen(f.right, env, t_lab, f_lab)
        elif isinstance(f, (BoundedExists, BoundedForAll)):
            t, x = self.reg(), self.reg()
            loop, nxt = self.label(), self.label()
            inner = {**env, f.var: x}
            self.emit(Copy, env[f.bound], t)
            self.mark(loop)
            if isinstance(f, BoundedExists):
                self.emit(JumpIfEmpty, t, f_lab)
                self.emit(Take, t, x)
                self.gen(f.body, inner, t_lab, nxt)
            else:
                self.emit(JumpIfEmpty, t, t_lab)
                self.emit(Take, t, x)
                self.gen(f.body, inner, nxt, f_lab)
            self.mark(nxt)
            self.emit(Remove, x, t)
            self.goto(loop)
        else:
            raise ClassificationError(f"cannot compile {type(f).__name__}")

    def link(self) -> SrmProgram:
        where: dict[_Label, int] = {}
        n = 0
        for item in self.code:
            if isinstance(item, _Label):
                where[item] = n + 1
            else:
                n += 1
        out = []
        for item in self.code:
            if isinstance(item, _Label):
                continue
            cls, args = item
            out.append(cls(*(where[a] if isinstance(a, _Label) else a for a in args)))
        return SrmProgram(tuple(out))


def compile_delta0(f: Formula) -> SrmProgram:
    """A program deciding f: inputs in free-variable order, answer #1 or #0 in r_0."""
    g = expand_all(f)
    if not is_delta0(g):
        raise ClassificationError("compile_delta0 needs a Δ_0 formula without interpreted atoms")
    params = free_vars(f)
    comp = _Compiler(len(params))
    env = {v: i for i, v in enumerate(params)}
    yes, no, end = comp.label(), comp.label(), comp.label()
    comp.gen(g, env, yes, no)
    comp.mark(yes)
    comp.emit(Clear, 0)
    comp.emit(Add, comp.zero, 0)
    comp.goto(end)
    comp.mark(no)
    comp.emit(Clear, 0)
    comp.mark(end)
    return comp.link()


def decide(p: SrmProgram, inputs: Sequence[HSet], lv: Level, **budget) -> Optional[bool]:
    """Run a compiled decision program; None if it does not halt in budget."""
    res = run(p, inputs, lv, **budget)
    if not res.halted:
        return None
    out = res.output
    return out.as_natural() == 1


# -- height -----------------------------------------------------------------------


def height(p: SrmProgram, lv: Level, max_steps: int = DEFAULT_MAX_STEPS,
           max_limits: int = DEFAULT_MAX_LIMITS) -> Optional[int]:
    """Least b ≤ lv.index such that the run without input and every halting run
    on an input x ∈ L_b only ever hold values from L_b.  None if the run without
    input does not halt or some run leaves lv."""
    try:
        base = run(p, [], lv, max_steps, max_limits, collect_values=True)
        if not base.halted:
            return None
        runs = {}
        for x in lv.elements:
            res = run(p, [x], lv, max_steps, max_limits, collect_values=True)
            runs[x] = res.values if res.halted else None
    except ValueEscapesLevelError:
        return None
    for b in range(lv.index + 1):
        lb = build(b, lv.engine) if b != lv.index else lv
        inside = lb.position
        if not all(v in inside for v in base.values):
            continue
        if all(vals is None or all(v in inside for v in vals)
               for x, vals in runs.items() if x in inside):
            return b
    return None
