"""Formulas of the ∈-language with macros and interpreted atoms.

Nodes are frozen dataclasses; variables are plain strings.  Macro and atom
arguments are strings too: identifiers are variables, anything starting with
``#``, ``{`` or ``∅`` is a set literal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import CaptureError

_VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def is_var(arg: str) -> bool:
    return bool(_VAR_RE.match(arg))


@dataclass(frozen=True)
class Membership:
    left: str
    right: str


@dataclass(frozen=True)
class Equality:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class BoundedForAll:
    var: str
    bound: str
    body: Formula


@dataclass(frozen=True)
class BoundedExists:
    var: str
    bound: str
    body: Formula


@dataclass(frozen=True)
class Macro:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class InterpretedAtom:
    name: str
    args: tuple[str, ...]


Formula = Union[
    Membership, Equality, Not, And, Or, Implies, ForAll, Exists,
    BoundedForAll, BoundedExists, Macro, InterpretedAtom,
]

ATOMIC = (Membership, Equality, Macro, InterpretedAtom)
BINARY = (And, Or, Implies)
UNBOUNDED = (ForAll, Exists)
BOUNDED = (BoundedForAll, BoundedExists)
QUANTIFIERS = UNBOUNDED + BOUNDED


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def atom_vars(f: Formula) -> tuple[str, ...]:
    if isinstance(f, (Membership, Equality)):
        return (f.left, f.right)
    return tuple(a for a in f.args if is_var(a))


def free_vars(f: Formula) -> tuple[str, ...]:
    """Free variables in order of first occurrence."""
    out: dict[str, None] = {}
    _free(f, frozenset(), out)
    return tuple(out)


def _free(f: Formula, bound: frozenset, out: dict) -> None:
    if isinstance(f, ATOMIC):
        for v in atom_vars(f):
            if v not in bound:
                out.setdefault(v)
    elif isinstance(f, Not):
        _free(f.body, bound, out)
    elif isinstance(f, BINARY):
        _free(f.left, bound, out)
        _free(f.right, bound, out)
    elif isinstance(f, BOUNDED):
        if f.bound not in bound:
            out.setdefault(f.bound)
        _free(f.body, bound | {f.var}, out)
    else:
        _free(f.body, bound | {f.var}, out)


def all_vars(f: Formula) -> set[str]:
    """Every variable name occurring anywhere, free or bound."""
    out: set[str] = set()
    for node in walk(f):
        if isinstance(node, ATOMIC):
            out.update(atom_vars(node))
        elif isinstance(node, BOUNDED):
            out.add(node.var)
            out.add(node.bound)
        elif isinstance(node, UNBOUNDED):
            out.add(node.var)
    return out


def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.body)
        elif isinstance(node, BINARY):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, QUANTIFIERS):
            stack.append(node.body)


def fresh_var(avoid: Iterable[str]) -> str:
    """Lowest unused canonical name v0, v1, ..."""
    used = set(avoid)
    i = 0
    while f"v{i}" in used:
        i += 1
    return f"v{i}"


def rebuild(f: Formula, body: Formula) -> Formula:
    """Same quantifier/negation node with a new body."""
    if isinstance(f, Not):
        return Not(body)
    if isinstance(f, BOUNDED):
        return type(f)(f.var, f.bound, body)
    return type(f)(f.var, body)


def rename_atom(f: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(f, (Membership, Equality)):
        return type(f)(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    return type(f)(f.name, tuple(mapping.get(a, a) if is_var(a) else a for a in f.args))


# -- substitution -----------------------------------------------------------------


def substitute(f: Formula, v: str, w: str) -> Formula:
    """Capture-avoiding replacement of free occurrences of variable v by w."""
    if v == w:
        return f
    return _subst(f, {v: w})


def substitute_many(f: Formula, mapping: dict[str, str]) -> Formula:
    """Simultaneous capture-avoiding substitution of variables."""
    mapping = {k: x for k, x in mapping.items() if k != x}
    return _subst(f, mapping) if mapping else f


def _subst(f: Formula, mapping: dict[str, str]) -> Formula:
    if not mapping:
        return f
    if isinstance(f, ATOMIC):
        return rename_atom(f, mapping)
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, mapping), _subst(f.right, mapping))
    bound_name = f.bound if isinstance(f, BOUNDED) else None
    new_bound = mapping.get(bound_name, bound_name) if bound_name is not None else None
    inner = {k: x for k, x in mapping.items() if k != f.var}
    body_free = set(free_vars(f.body))
    inner = {k: x for k, x in inner.items() if k in body_free}
    var = f.var
    body = f.body
    if var in inner.values():
        # the binder would capture an incoming variable
        var = fresh_var(all_vars(body) | set(inner) | set(inner.values()) | {f.var}
                        | ({new_bound} if new_bound else set()))
        body = _subst(body, {f.var: var})
    body = _subst(body, inner)
    if isinstance(f, BOUNDED):
        return type(f)(var, new_bound, body)
    return type(f)(var, body)


# -- alpha-canonical form -----------------------------------------------------------


def canonical(f: Formula) -> Formula:
    """Rename bound variables by binder depth to v0, v1, ... skipping free names."""
    free = set(free_vars(f))
    names: list[str] = []

    def name_at(depth: int) -> str:
        while len(names) <= depth:
            i = len(names) and int(names[-1][1:]) + 1
            while f"v{i}" in free:
                i += 1
            names.append(f"v{i}")
        return names[depth]

    def go(g: Formula, env: dict[str, str], depth: int) -> Formula:
        if isinstance(g, ATOMIC):
            return rename_atom(g, env)
        if isinstance(g, Not):
            return Not(go(g.body, env, depth))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, env, depth), go(g.right, env, depth))
        new = name_at(depth)
        inner = dict(env)
        inner[g.var] = new
        body = go(g.body, inner, depth + 1)
        if isinstance(g, BOUNDED):
            return type(g)(new, env.get(g.bound, g.bound), body)
        return type(g)(new, body)

    return go(f, {}, 0)


def alpha_equal(f: Formula, g: Formula) -> bool:
    return canonical(f) == canonical(g)


# -- relativization -------------------------------------------------------------------


def relativize(f: Formula, bound: str, rename: bool = True) -> Formula:
    """Restrict every unbounded quantifier of f to the variable ``bound``."""
    if bound in all_vars(f):
        binders = {n.var for n in walk(f) if isinstance(n, QUANTIFIERS)}
        if not rename:
            raise CaptureError(f"variable {bound!r} already occurs in the formula")
        if bound in binders:
            f = _rename_binder(f, bound, all_vars(f) | {bound})
    return _relativize(f, bound)


def _rename_binder(f: Formula, name: str, avoid: set[str]) -> Formula:
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(_rename_binder(f.body, name, avoid))
    if isinstance(f, BINARY):
        return type(f)(_rename_binder(f.left, name, avoid), _rename_binder(f.right, name, avoid))
    body = _rename_binder(f.body, name, avoid)
    if f.var == name:
        new = fresh_var(avoid)
        avoid.add(new)
        body = _subst(body, {name: new})
        return type(f)(new, f.bound, body) if isinstance(f, BOUNDED) else type(f)(new, body)
    return rebuild(f, body)


def _relativize(f: Formula, bound: str) -> Formula:
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(_relativize(f.body, bound))
    if isinstance(f, BINARY):
        return type(f)(_relativize(f.left, bound), _relativize(f.right, bound))
    body = _relativize(f.body, bound)
    if isinstance(f, ForAll):
        return BoundedForAll(f.var, bound, body)
    if isinstance(f, Exists):
        return BoundedExists(f.var, bound, body)
    return rebuild(f, body)


def has_unbounded(f: Formula) -> bool:
    return any(isinstance(n, UNBOUNDED) for n in walk(f))


def simplify_negations(f: Formula) -> Formula:
    """Remove double negations everywhere."""
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        if isinstance(f.body, Not):
            return simplify_negations(f.body.body)
        return Not(simplify_negations(f.body))
    if isinstance(f, BINARY):
        return type(f)(simplify_negations(f.left), simplify_negations(f.right))
    return rebuild(f, simplify_negations(f.body))


def negate(f: Formula) -> Formula:
    return f.body if isinstance(f, Not) else Not(f)


# -- printing ---------------------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}
_OPS = {Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Concrete syntax; parse(to_text(f)) == f."""
    parts: list[str] = []
    _emit(f, 0, parts)
    return "".join(parts)


def _emit(f: Formula, ctx: int, out: list[str]) -> None:
    p = _prec(f)
    if p < ctx:
        out.append("(")
    if isinstance(f, Membership):
        out.append(f"{f.left} in {f.right}")
    elif isinstance(f, Equality):
        out.append(f"{f.left} = {f.right}")
    elif isinstance(f, (Macro, InterpretedAtom)):
        out.append(f"{f.name}({', '.join(f.args)})")
    elif isinstance(f, Not):
        out.append("~")
        _emit(f.body, 4, out)
    elif isinstance(f, BINARY):
        _emit(f.left, p + 1, out)
        out.append(f" {_OPS[type(f)]} ")
        _emit(f.right, p + 1, out)
    else:
        q = "forall" if isinstance(f, (ForAll, BoundedForAll)) else "exists"
        if isinstance(f, BOUNDED):
            out.append(f"{q} {f.var} in {f.bound}. ")
        else:
            out.append(f"{q} {f.var}. ")
        _emit(f.body, 0, out)
    if p < ctx:
        out.append(")")


def canonical_text(f: Formula) -> str:
    return to_text(canonical(f))


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, ATOMIC):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, BINARY):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)
