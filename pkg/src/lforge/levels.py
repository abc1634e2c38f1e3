"""Finite levels of the constructible hierarchy.

L_0 = ∅ and L_{n+1} is the set of subsets of L_n definable over (L_n, ∈) with
parameters.  The definable subsets are found by enumerating formula templates
with free variables x, p0, p1 in ascending Gödel-code order and, for each
template, parameter tuples in <_L-lexicographic order.  The first template and
tuple defining a set is recorded as its witness.  <_L orders sets by birth
stage and then by the order in which that enumeration first produced them.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import threading
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, Optional

from ._version import ENGINE_VERSION
from .coding import encode
from .errors import NotInLevelError, ResourceLimitError
from .formula import (
    And, Equality, Exists, ForAll, Formula, Membership, Not, Or, canonical_text, free_vars,
)
from .hfs import DEFAULT_ENGINE, HSet, SetEngine, format_set

FULL_BUILD_LIMIT = 4
DEFAULT_SIZE_BOUND = 3
PARAMS = ("p0", "p1")


@dataclass(frozen=True)
class Witness:
    stage: int
    formula: str
    code: int
    params: tuple[HSet, ...]


@dataclass(frozen=True)
class Level:
    index: int
    elements: tuple[HSet, ...]
    birth_stage: Mapping[HSet, int]
    witness: Mapping[HSet, Witness]
    position: Mapping[HSet, int] = field(repr=False)
    engine: SetEngine = field(repr=False, compare=False, default=DEFAULT_ENGINE)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: HSet) -> bool:
        return x in self.position

    @cached_property
    def as_set(self) -> HSet:
        return self.engine.make(self.elements)

    def to_json(self) -> dict:
        items = []
        for i, x in enumerate(self.elements):
            w = self.witness[x]
            items.append({
                "position": i,
                "set": format_set(x),
                "stage": self.birth_stage[x],
                "witness": {
                    "formula": w.formula,
                    "params": [format_set(p) for p in w.params],
                },
            })
        return {"index": self.index, "size": len(self.elements), "elements": items,
                "engineVersion": ENGINE_VERSION}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=1)

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()


# -- template enumeration ----------------------------------------------------------


def _gen(size: int, scope: tuple[str, ...], depth: int) -> list[Formula]:
    """All formulas of exactly ``size`` nodes over variables in scope."""
    out: list[Formula] = []
    if size == 1:
        for a in scope:
            for b in scope:
                out.append(Membership(a, b))
                out.append(Equality(a, b))
        return out
    for g in _gen(size - 1, scope, depth):
        out.append(Not(g))
    bound = f"v{depth}"
    for g in _gen(size - 1, scope + (bound,), depth + 1):
        out.append(Exists(bound, g))
        out.append(ForAll(bound, g))
    for k in range(1, size - 1):
        lefts = _gen(k, scope, depth)
        rights = _gen(size - 1 - k, scope, depth)
        for left in lefts:
            for right in rights:
                out.append(And(left, right))
                out.append(Or(left, right))
    return out


_TEMPLATE_CACHE: dict[int, list[tuple[int, Formula, int]]] = {}
_TEMPLATE_LOCK = threading.Lock()


def templates(size_bound: int = DEFAULT_SIZE_BOUND) -> list[tuple[int, Formula, int]]:
    """(code, template, parameter count) sorted by code, deduplicated."""
    with _TEMPLATE_LOCK:
        cached = _TEMPLATE_CACHE.get(size_bound)
        if cached is not None:
            return cached
        seen: dict[int, tuple[Formula, int]] = {}
        scope = ("x",) + PARAMS
        for size in range(1, size_bound + 1):
            for f in _gen(size, scope, 0):
                fv = set(free_vars(f))
                used = [p for p in PARAMS if p in fv]
                # parameters must be used contiguously: p1 only together with p0
                if used != list(PARAMS[:len(used)]):
                    continue
                code = encode(f)
                if code not in seen:
                    seen[code] = (f, len(used))
        out = sorted((code, f, k) for code, (f, k) in seen.items())
        _TEMPLATE_CACHE[size_bound] = out
        return out


def definable_subsets(M: Level, size_bound: int = DEFAULT_SIZE_BOUND,
                      engine: Optional[SetEngine] = None) -> list[tuple[HSet, Witness]]:
    """Distinct parameter-definable subsets of M in enumeration order."""
    from .truth import Evaluator
    engine = engine or M.engine
    elems = M.elements
    target = 1 << len(elems)
    ev = Evaluator(elems, engine)
    found: dict[HSet, Witness] = {}
    stage = M.index + 1
    for code, tmpl, k in templates(size_bound):
        for params in itertools.product(elems, repeat=k):
            env = dict(zip(PARAMS, params))
            members = []
            for x in elems:
                env["x"] = x
                if ev.eval(tmpl, env):
                    members.append(x)
            s = engine.make(members)
            if s not in found:
                found[s] = Witness(stage, canonical_text(tmpl), code, tuple(params))
                if len(found) == target:
                    return list(found.items())
    raise ResourceLimitError(
        f"templates up to size {size_bound} found {len(found)} of {target} subsets of L_{M.index}")


_LEVELS: dict[tuple[int, int], list[Level]] = {}
_BUILD_LOCK = threading.Lock()


def _empty_level(engine: SetEngine) -> Level:
    return Level(0, (), MappingProxyType({}), MappingProxyType({}), MappingProxyType({}), engine)


def build(n: int, engine: SetEngine = DEFAULT_ENGINE, size_bound: int = DEFAULT_SIZE_BOUND,
          limit: int = FULL_BUILD_LIMIT) -> Level:
    """L_n with its <_L order; memoized per engine."""
    if n < 0:
        raise ValueError("level index must be a natural number")
    if n > limit:
        raise ResourceLimitError(f"full construction is limited to n ≤ {limit}; use level_size")
    with _BUILD_LOCK:
        chain = _LEVELS.setdefault((id(engine), size_bound), [_empty_level(engine)])
        while len(chain) <= n:
            prev = chain[-1]
            fresh = [(s, w) for s, w in definable_subsets(prev, size_bound, engine)
                     if s not in prev.position]
            elements = prev.elements + tuple(s for s, _ in fresh)
            stage = dict(prev.birth_stage)
            wit = dict(prev.witness)
            for s, w in fresh:
                stage[s] = prev.index + 1
                wit[s] = w
            chain.append(Level(
                prev.index + 1, elements, MappingProxyType(stage), MappingProxyType(wit),
                MappingProxyType({x: i for i, x in enumerate(elements)}), engine))
        return chain[n]


def level_size(n: int, engine: SetEngine = DEFAULT_ENGINE) -> int:
    """|L_n|.  Beyond the full-build limit every subset of the previous finite
    level is definable (a disjunction of equalities with parameters), so the
    size is 2^|L_{n-1}| and no sets are materialized."""
    if n <= FULL_BUILD_LIMIT:
        return len(build(n, engine))
    size = len(build(FULL_BUILD_LIMIT, engine))
    for _ in range(FULL_BUILD_LIMIT, n):
        size = 1 << size
    return size


_LEVEL_SETS: dict[tuple[int, int], HSet] = {}


def level_set(k: int, engine: SetEngine = DEFAULT_ENGINE) -> HSet:
    """L_k as a single set."""
    key = (id(engine), k)
    s = _LEVEL_SETS.get(key)
    if s is None:
        s = _LEVEL_SETS[key] = build(k, engine).as_set
    return s


def l_order(lv: Level, x: HSet, y: HSet) -> int:
    """-1, 0 or 1 as x <_L y, x = y, x >_L y."""
    try:
        i, j = lv.position[x], lv.position[y]
    except KeyError:
        raise NotInLevelError(f"not an element of L_{lv.index}") from None
    return (i > j) - (i < j)


def l_min(lv: Level, xs) -> HSet:
    """The <_L-least element of a nonempty collection."""
    pos = lv.position
    try:
        return min(xs, key=pos.__getitem__)
    except KeyError:
        raise NotInLevelError(f"not an element of L_{lv.index}") from None
