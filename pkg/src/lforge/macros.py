"""Named abbreviations over the ∈-language.

Macros are Δ_0 notions with an expansion into primitive syntax and a native
evaluator (the two are tested to agree).  Interpreted atoms are Δ_1 notions
such as ``IsLevel(a, ξ)`` whose expansion would be intractable; they carry a
declared complexity and are evaluated natively.  A few atoms exist only so
that provability templates can be written down and are never evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Exists, Formula, Macro, Membership,
    Not, Or, ATOMIC, BINARY, QUANTIFIERS, conj, disj, fresh_var, rebuild,
)
from .hfs import DEFAULT_ENGINE, HSet, SetEngine, is_ordinal, is_transitive


@dataclass(frozen=True)
class MacroDef:
    name: str
    arity: int
    expand: Optional[Callable[[tuple[str, ...]], Formula]] = None
    evaluate: Optional[Callable[..., bool]] = None
    interpreted: bool = False
    evaluable: bool = True
    # least (Σ, Π) levels of the notion; (0, 0) is Δ_0
    complexity: tuple[int, int] = (0, 0)
    literal_slots: frozenset = field(default_factory=frozenset)
    doc: str = ""


REGISTRY: dict[str, MacroDef] = {}


def register(d: MacroDef) -> MacroDef:
    REGISTRY[d.name] = d
    return d


def lookup(name: str) -> MacroDef | None:
    return REGISTRY.get(name)


def is_literal(arg: str) -> bool:
    return arg[:1] in ("#", "{", "∅")


# -- expansions -------------------------------------------------------------------


def _fresh(args: Sequence[str], *more: str) -> str:
    return fresh_var([a for a in args if not is_literal(a)] + list(more))


def _empty(a):
    (z,) = a
    w = _fresh(a)
    return BoundedForAll(w, z, Not(Equality(w, w)))


def _subset(a):
    x, y = a
    w = _fresh(a)
    return BoundedForAll(w, x, Membership(w, y))


def _pair(a):
    z, x, y = a
    w = _fresh(a)
    return conj(Membership(x, z), Membership(y, z),
                BoundedForAll(w, z, Or(Equality(w, x), Equality(w, y))))


def _singleton(a):
    z, x = a
    w = _fresh(a)
    return And(Membership(x, z), BoundedForAll(w, z, Equality(w, x)))


def _kpair(a):
    z, x, y = a
    u = _fresh(a)
    v = _fresh(a, u)
    w = _fresh(a, u, v)
    return BoundedExists(u, z, BoundedExists(v, z, conj(
        Macro("Singleton", (u, x)),
        Macro("Pair", (v, x, y)),
        BoundedForAll(w, z, Or(Equality(w, u), Equality(w, v))),
    )))


def _inpair(a):
    # x is a component of the pair z: x ∈ ⋃z
    x, z = a
    u = _fresh(a)
    return BoundedExists(u, z, Membership(x, u))


def _union(a):
    z, x = a
    w = _fresh(a)
    y = _fresh(a, w)
    return And(BoundedForAll(w, z, BoundedExists(y, x, Membership(w, y))),
               BoundedForAll(y, x, BoundedForAll(w, y, Membership(w, z))))


def _union2(a):
    z, x, y = a
    w = _fresh(a)
    return conj(BoundedForAll(w, z, Or(Membership(w, x), Membership(w, y))),
                BoundedForAll(w, x, Membership(w, z)),
                BoundedForAll(w, y, Membership(w, z)))


def _transitive(a):
    (x,) = a
    y = _fresh(a)
    w = _fresh(a, y)
    return BoundedForAll(y, x, BoundedForAll(w, y, Membership(w, x)))


def _ordinal(a):
    (x,) = a
    y = _fresh(a)
    return And(Macro("Transitive", (x,)), BoundedForAll(y, x, Macro("Transitive", (y,))))


def _succ(a):
    z, x = a
    w = _fresh(a)
    return conj(Membership(x, z), BoundedForAll(w, x, Membership(w, z)),
                BoundedForAll(w, z, Or(Membership(w, x), Equality(w, x))))


def _is(a):
    x, lit = a
    if lit.startswith("#") and lit[1:].isdigit():
        k = int(lit[1:])
        if k == 0:
            return Macro("Empty", (x,))
        y = _fresh(a)
        return BoundedExists(y, x, And(Macro("Is", (y, f"#{k - 1}")), Macro("Succ", (x, y))))
    value = DEFAULT_ENGINE.parse(lit)
    return _is_value(x, value, [x])


def _is_value(x: str, value: HSet, avoid: list[str]) -> Formula:
    n = value.as_natural()
    if n is not None:
        return Macro("Is", (x, f"#{n}"))
    w = fresh_var(avoid)
    members = [_literal_text(e) for e in value.elements]
    cover = BoundedForAll(w, x, disj(*(Macro("Is", (w, m)) for m in members)))
    each = [BoundedExists(w, x, Macro("Is", (w, m))) for m in members]
    return conj(cover, *each)


def _literal_text(x: HSet) -> str:
    from .hfs import format_set
    return format_set(x)


# -- native evaluators ----------------------------------------------------------------


def _ev_pair(eng: SetEngine, z, x, y):
    return z is eng.pair(x, y)


def _ev_kpair(eng: SetEngine, z, x, y):
    return z is eng.kpair(x, y)


def _ev_union(eng: SetEngine, z, x):
    return z is eng.union(x)


def _ev_union2(eng: SetEngine, z, x, y):
    return z is eng.union2(x, y)


def _ev_succ(eng: SetEngine, z, x):
    return z is eng.successor(x)


def _ev_inpair(eng: SetEngine, x, z):
    return any(x in u for u in z)


def _ev_tc(eng: SetEngine, z, x):
    return z is eng.transitive_closure(x)


def _ev_islevel(eng: SetEngine, a, xi):
    k = xi.as_natural()
    if k is None:
        return False
    # a level L_k contains sets of rank < k, so a = L_k forces rank(a) = k
    if a.rank != k:
        return False
    from .levels import level_set
    return a is level_set(k, eng)


for _d in (
    MacroDef("Empty", 1, _empty, lambda e, z: z.is_empty, doc="z = ∅"),
    MacroDef("Subset", 2, _subset, lambda e, x, y: all(w in y for w in x), doc="x ⊆ y"),
    MacroDef("Pair", 3, _pair, _ev_pair, doc="z = {x, y}"),
    MacroDef("Singleton", 2, _singleton, lambda e, z, x: z is e.singleton(x), doc="z = {x}"),
    MacroDef("KPair", 3, _kpair, _ev_kpair, doc="z = ⟨x, y⟩ (Kuratowski)"),
    MacroDef("InPair", 2, _inpair, _ev_inpair, doc="x ∈ ⋃z"),
    MacroDef("Union", 2, _union, _ev_union, doc="z = ⋃x"),
    MacroDef("Union2", 3, _union2, _ev_union2, doc="z = x ∪ y"),
    MacroDef("Transitive", 1, _transitive, lambda e, x: is_transitive(x), doc="x is transitive"),
    MacroDef("Ordinal", 1, _ordinal, lambda e, x: is_ordinal(x), doc="x is an ordinal"),
    MacroDef("Succ", 2, _succ, _ev_succ, doc="z = x ∪ {x}"),
    MacroDef("Is", 2, _is, lambda e, x, v: x is v, literal_slots=frozenset({1}),
             doc="x equals a set literal"),
    MacroDef("IsLevel", 2, None, _ev_islevel, interpreted=True, complexity=(1, 1),
             literal_slots=frozenset({1}), doc="a = L_ξ"),
    MacroDef("TC", 2, None, _ev_tc, interpreted=True, complexity=(1, 1),
             doc="z is the transitive closure of x"),
):
    register(_d)

# Atoms for the provability templates: syntax only.
for _name, _arity, _doc in (
    ("Diag", 2, "m is the code of θ(numeral(n), x) where n codes θ"),
    ("Delta0Code", 1, "p codes a Δ_0 formula"),
    ("Sigma1Code", 1, "p codes a Σ_1 sentence"),
    ("BExistsCode", 3, "q codes ∃x∈a φ where p codes φ"),
    ("RelCode", 3, "q codes σ relativized to a where p codes σ"),
    ("SatSigma1", 2, "a ⊨_Σ1 ∃x φ(x) where p codes φ"),
    ("Sat", 2, "b ⊨ σ where p codes σ"),
):
    register(MacroDef(_name, _arity, None, None, interpreted=True, evaluable=False,
                      complexity=(1, 1), doc=_doc))


def expand_once(m: Macro) -> Formula:
    d = REGISTRY[m.name]
    if d.expand is None:
        return m
    return d.expand(m.args)


def expand_all(f: Formula) -> Formula:
    """Replace every macro by its primitive expansion (interpreted atoms stay)."""
    if isinstance(f, Macro):
        out = expand_once(f)
        return f if out is f else expand_all(out)
    if isinstance(f, ATOMIC):
        return f
    if isinstance(f, Not):
        return Not(expand_all(f.body))
    if isinstance(f, BINARY):
        return type(f)(expand_all(f.left), expand_all(f.right))
    return rebuild(f, expand_all(f.body))


def macro_free(f: Formula) -> bool:
    from .formula import walk
    return not any(isinstance(n, Macro) for n in walk(f))
