"""Seeded random formula generators for property tests and acceptance runs."""
from __future__ import annotations

import random
from typing import Sequence

from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Exists, ForAll, Formula, Implies, Macro,
    Membership, Not, Or,
)

# Δ_0 macros with only variable arguments, by arity
_MACROS = {1: ("Empty", "Transitive", "Ordinal"), 2: ("Subset", "Singleton", "Succ", "Union"),
           3: ("Pair", "KPair", "Union2")}


def random_atom(rng: random.Random, scope: Sequence[str], macros: bool = True) -> Formula:
    r = rng.random()
    if macros and r < 0.15:
        arity = rng.choice((1, 2, 3))
        name = rng.choice(_MACROS[arity])
        return Macro(name, tuple(rng.choice(scope) for _ in range(arity)))
    a, b = rng.choice(scope), rng.choice(scope)
    return Membership(a, b) if r < 0.6 else Equality(a, b)


def random_delta0(rng: random.Random, scope: Sequence[str], depth: int = 3,
                  macros: bool = True, _fresh: int = 0) -> Formula:
    """A Δ_0 formula whose free variables come from scope (scope must be nonempty)."""
    scope = tuple(scope)
    if depth <= 0 or rng.random() < 0.25:
        return random_atom(rng, scope, macros)
    r = rng.random()
    if r < 0.15:
        return Not(random_delta0(rng, scope, depth - 1, macros, _fresh))
    if r < 0.55:
        op = rng.choice((And, Or, Implies))
        return op(random_delta0(rng, scope, depth - 1, macros, _fresh),
                  random_delta0(rng, scope, depth - 1, macros, _fresh))
    v = f"b{_fresh}"
    bound = rng.choice(scope)
    q = rng.choice((BoundedExists, BoundedForAll))
    return q(v, bound, random_delta0(rng, scope + (v,), depth - 1, macros, _fresh + 1))


def random_formula(rng: random.Random, scope: Sequence[str] = (), qdepth: int = 3,
                   size: int = 4, macros: bool = False, _fresh: int = 0) -> Formula:
    """A formula mixing unbounded and bounded quantifiers and connectives.

    With empty scope the result is closed.  ``qdepth`` bounds the nesting
    depth of unbounded quantifiers.
    """
    scope = tuple(scope)
    if not scope and qdepth <= 0:
        return _closed_delta0(rng, f"u{_fresh}")
    if qdepth > 0 and (not scope or rng.random() < 0.35):
        v = f"u{_fresh}"
        q = rng.choice((Exists, ForAll))
        return q(v, random_formula(rng, scope + (v,), qdepth - 1, size - 1, macros, _fresh + 1))
    if size <= 1:
        return random_delta0(rng, scope, 1, macros, _fresh)
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, scope, qdepth, size - 1, macros, _fresh))
    if r < 0.6:
        op = rng.choice((And, Or, Implies))
        return op(random_formula(rng, scope, qdepth, size // 2, macros, _fresh),
                  random_formula(rng, scope, qdepth, size // 2, macros, _fresh + 10))
    if r < 0.8:
        v = f"b{_fresh}"
        q = rng.choice((BoundedExists, BoundedForAll))
        return q(v, rng.choice(scope), random_formula(rng, scope + (v,), qdepth, size - 1,
                                                       macros, _fresh + 1))
    return random_delta0(rng, scope, 2, macros, _fresh)


def _closed_delta0(rng: random.Random, v: str) -> Formula:
    # closed formulas need a quantifier to bind anything; use a trivial one
    return ForAll(v, Equality(v, v)) if rng.random() < 0.5 else Exists(v, Not(Equality(v, v)))


def random_prenex(rng: random.Random, n: int, kind: str = "E", scope: Sequence[str] = (),
                  matrix_depth: int = 2, macros: bool = True) -> Formula:
    """A strict prenex Σ_n (kind 'E') or Π_n (kind 'A') formula."""
    vars_ = [f"q{i}" for i in range(n)]
    matrix = random_delta0(rng, tuple(scope) + tuple(vars_), matrix_depth, macros)
    out = matrix
    for i in reversed(range(n)):
        q = kind if i % 2 == 0 else ("A" if kind == "E" else "E")
        out = Exists(vars_[i], out) if q == "E" else ForAll(vars_[i], out)
    return out


def random_witness_matrix(rng: random.Random, x: str = "x") -> Formula:
    """A Δ_0 matrix A(x) with x as its only free variable."""
    r = rng.random()
    if r < 0.3:
        k = rng.randrange(0, 4)
        return Macro("Is", (x, f"#{k}"))
    if r < 0.45:
        lit = rng.choice(("{#1}", "{#2}", "{#0, #2}", "{{#1}}", "{#1, #2}"))
        return Macro("Is", (x, lit))
    return random_delta0(rng, (x,), 3)
