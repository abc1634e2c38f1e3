"""Formula complexity: Δ_0, strict Σ_n/Π_n, and the underlined closure classes.

Strict classes follow the alternation definition: a Σ_{n+1} formula is ∃x ψ
with ψ in Π_n, so every unbounded block holds exactly one quantifier.  The
underlined class Σ_{n+1} is the least class containing underlined Π_n and
closed under ∧, ∨, bounded quantification and unbounded ∃ (dually for Π).

Normalization turns a formula of an underlined class into a strict prenex
formula of the same level: negations are pushed to the matrix, quantifiers are
pulled out of ∧/∨ block-by-block, bounded quantifiers are moved inward past
unbounded blocks (using Collection when the kinds disagree), and finally each
block is collapsed to one quantifier with Kuratowski pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ClassificationError, NormalizationRefused, PreconditionError
from .formula import (
    ATOMIC, BINARY, BOUNDED, And, BoundedExists, BoundedForAll, Exists, ForAll, Formula,
    Implies, InterpretedAtom, Macro, Membership, Not, Or, all_vars, free_vars, fresh_var,
    negate, walk,
)
from .macros import REGISTRY

E, A = "E", "A"


@dataclass(frozen=True)
class ComplexityClass:
    kind: str  # Delta0, Sigma, Pi, USigma, UPi, Unclassified
    n: Optional[int] = None

    def __str__(self) -> str:
        return self.kind if self.n is None else f"{self.kind}({self.n})"

    def to_json(self) -> dict:
        return {"class": self.kind, "n": self.n}

    @property
    def strict(self) -> bool:
        return self.kind in ("Sigma", "Pi")


DELTA0 = ComplexityClass("Delta0")


def Sigma(n: int) -> ComplexityClass:
    return ComplexityClass("Sigma", n)


def Pi(n: int) -> ComplexityClass:
    return ComplexityClass("Pi", n)


# -- classification -------------------------------------------------------------------


def _atom_levels(f: Formula) -> tuple[int, int]:
    if isinstance(f, InterpretedAtom):
        d = REGISTRY.get(f.name)
        return d.complexity if d else (math.inf, math.inf)
    return (0, 0)


def levels(f: Formula) -> tuple[float, float]:
    """Least (s, p) with f in underlined Σ_s and underlined Π_s-dual p."""
    if isinstance(f, ATOMIC):
        s, p = _atom_levels(f)
    elif isinstance(f, Not):
        p, s = levels(f.body)
    elif isinstance(f, Implies):
        (pa, sa), (sb, pb) = levels(f.left), levels(f.right)
        s, p = max(sa, sb), max(pa, pb)
    elif isinstance(f, BINARY):
        (sa, pa), (sb, pb) = levels(f.left), levels(f.right)
        s, p = max(sa, sb), max(pa, pb)
    elif isinstance(f, BOUNDED):
        s, p = levels(f.body)
    elif isinstance(f, Exists):
        sb, _ = levels(f.body)
        s = max(1, sb)
        p = s + 1
    else:
        _, pb = levels(f.body)
        p = max(1, pb)
        s = p + 1
    # cumulativity: Π_k ⊆ Σ_{k+1} and Σ_k ⊆ Π_{k+1}
    return min(s, p + 1), min(p, s + 1)


def is_delta0(f: Formula, allow_interpreted: bool = False) -> bool:
    for node in walk(f):
        if isinstance(node, (ForAll, Exists)):
            return False
        if isinstance(node, InterpretedAtom) and not allow_interpreted:
            return False
    return True


def prefix_of(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    """Leading unbounded quantifiers [(kind, var)] and the remaining matrix."""
    out = []
    while isinstance(f, (ForAll, Exists)):
        out.append((E if isinstance(f, Exists) else A, f.var))
        f = f.body
    return out, f


def strict_class(f: Formula) -> Optional[ComplexityClass]:
    prefix, matrix = prefix_of(f)
    if not prefix:
        return DELTA0 if is_delta0(f) else None
    # interpreted atoms are Δ_1 and absolute, so they may sit in a matrix above level 0
    if not is_delta0(matrix, allow_interpreted=True):
        return None
    for (q1, _), (q2, _) in zip(prefix, prefix[1:]):
        if q1 == q2:
            return None
    return Sigma(len(prefix)) if prefix[0][0] == E else Pi(len(prefix))


def classify(f: Formula) -> ComplexityClass:
    strict = strict_class(f)
    if strict is not None:
        return strict
    s, p = levels(f)
    if s == math.inf and p == math.inf:
        return ComplexityClass("Unclassified")
    # ties go to the Σ side
    if s <= p:
        return ComplexityClass("USigma", int(s))
    return ComplexityClass("UPi", int(p))


# -- duals and pair collapse ----------------------------------------------------------


def dual(f: Formula) -> Formula:
    """Flip the unbounded prefix and negate the matrix (double negation removed)."""
    prefix, matrix = prefix_of(f)
    out = negate(matrix)
    for q, v in reversed(prefix):
        out = ForAll(v, out) if q == E else Exists(v, out)
    return out


def pair_collapse(phi: Formula, x0: str, x1: str, fresh: str, universal: bool = False) -> Formula:
    """φ'(fresh) := ∃u∈fresh ∃x0∈u ∃x1∈u [KPair(fresh, x0, x1) ∧ φ].

    With ``universal`` the dual form ∀u∈fresh ∀x0∈u ∀x1∈u [KPair(fresh, x0, x1) → φ]
    is returned, which is what a universal block collapses to.
    """
    if not is_delta0(phi, allow_interpreted=True):
        raise PreconditionError("pair_collapse needs a Δ_0 matrix")
    if len({x0, x1, fresh}) != 3:
        raise PreconditionError("x0, x1 and the fresh variable must be distinct")
    if fresh in free_vars(phi):
        raise PreconditionError(f"{fresh!r} occurs free in the matrix")
    u = fresh_var(all_vars(phi) | {x0, x1, fresh})
    pair = Macro("KPair", (fresh, x0, x1))
    if universal:
        body: Formula = Implies(pair, phi)
        return BoundedForAll(u, fresh, BoundedForAll(x0, u, BoundedForAll(x1, u, body)))
    body = And(pair, phi)
    return BoundedExists(u, fresh, BoundedExists(x0, u, BoundedExists(x1, u, body)))


# -- normalization ------------------------------------------------------------------


def _flip(q: str) -> str:
    return A if q == E else E


class _Normalizer:
    def __init__(self, f: Formula, m: int, collection_level: Optional[int]):
        self.used = set(all_vars(f))
        self.m = m
        self.collection_level = collection_level
        self.collections = 0
        self.collapses = 0
        self.paddings = 0

    def fresh(self) -> str:
        v = fresh_var(self.used)
        self.used.add(v)
        return v

    def standardize(self, f: Formula, env: dict[str, str]) -> Formula:
        """Give every binder a distinct fresh name."""
        if isinstance(f, ATOMIC):
            from .formula import rename_atom
            return rename_atom(f, env)
        if isinstance(f, Not):
            return Not(self.standardize(f.body, env))
        if isinstance(f, BINARY):
            return type(f)(self.standardize(f.left, env), self.standardize(f.right, env))
        new = self.fresh()
        body = self.standardize(f.body, {**env, f.var: new})
        if isinstance(f, BOUNDED):
            return type(f)(new, env.get(f.bound, f.bound), body)
        return type(f)(new, body)

    # A prefix is a list of n blocks of variables; block i has kind `kind` for
    # even i and the dual kind for odd i.  Blocks may be empty.

    def prenex(self, f: Formula, kind: str, n: int) -> tuple[list[list[str]], Formula]:
        if is_delta0(f, allow_interpreted=True):
            return [[] for _ in range(n)], f
        if n == 0:
            raise ClassificationError("unbounded quantifier inside a Δ_0 position")
        if isinstance(f, Not):
            blocks, m = self.prenex(f.body, _flip(kind), n)
            return blocks, negate(m)
        if isinstance(f, Implies):
            return self.prenex(Or(Not(f.left), f.right), kind, n)
        if isinstance(f, (And, Or)):
            lb, lm = self.prenex(f.left, kind, n)
            rb, rm = self.prenex(f.right, kind, n)
            return [a + b for a, b in zip(lb, rb)], type(f)(lm, rm)
        if isinstance(f, (ForAll, Exists)):
            q = E if isinstance(f, Exists) else A
            if q == kind:
                blocks, m = self.prenex(f.body, kind, n)
                blocks[0].insert(0, f.var)
                return blocks, m
            blocks, m = self.prenex(f, q, n - 1)
            return [[]] + blocks, m
        # bounded quantifier over a formula with unbounded quantifiers
        blocks, m = self.prenex(f.body, kind, n)
        qb = E if isinstance(f, BoundedExists) else A
        return self.push(qb, f.var, f.bound, blocks, m, kind, 0)

    def push(self, qb: str, x: str, a: str, blocks: list[list[str]], m: Formula,
             kind: str, start: int) -> tuple[list[list[str]], Formula]:
        """Move the bounded quantifier Qb x∈a inward past blocks[start:]."""
        def q_at(i: int) -> str:
            return kind if i % 2 == 0 else _flip(kind)

        j = next((i for i in range(start, len(blocks)) if blocks[i]), None)
        if j is None:
            bq = BoundedExists if qb == E else BoundedForAll
            return blocks, bq(x, a, m)
        if q_at(j) == qb or j > start:
            # same kind as block j, or the empty block before it has kind Qb
            target = j if q_at(j) == qb else j - 1
            blocks = [list(b) for b in blocks]
            blocks[target].insert(0, x)
            guard = Membership(x, a)
            m = And(guard, m) if qb == E else Implies(guard, m)
            return blocks, m
        # Collection: ∀x∈a ∃ȳ ψ ⟺ ∃b ∀x∈a ∃ȳ∈b ψ, and dually
        if self.collection_level is not None and self.m > self.collection_level:
            raise NormalizationRefused(
                f"moving a bounded quantifier needs Σ_{self.m}-Collection "
                f"but only level {self.collection_level} is assumed")
        self.collections += 1
        b = self.fresh()
        inner_q = q_at(j)
        ys = blocks[j]
        blocks = [list(bl) for bl in blocks]
        blocks[j] = [b]
        for y in reversed(ys):
            blocks, m = self.push(inner_q, y, b, blocks, m, kind, j + 1)
        blocks, m = self.push(qb, x, a, blocks, m, kind, j + 1)
        return blocks, m

    def collapse(self, blocks: list[list[str]], m: Formula, kind: str) -> tuple[list[str], Formula]:
        """Reduce every block to one variable, innermost block first."""
        out: list[str] = [""] * len(blocks)
        for i in reversed(range(len(blocks))):
            q = kind if i % 2 == 0 else _flip(kind)
            vs = list(blocks[i])
            while len(vs) > 1:
                w = self.fresh()
                self.used.update(all_vars(m))
                m = pair_collapse(m, vs[0], vs[1], w, universal=(q == A))
                self.collapses += 1
                vs = [w] + vs[2:]
            out[i] = vs[0] if vs else ""
        for i, v in enumerate(out):
            if not v:
                # vacuous quantifier; harmless over a nonempty domain
                out[i] = self.fresh()
                self.paddings += 1
        return out, m


def _quantify(kind: str, blocks: list[list[str]], m: Formula) -> Formula:
    out = m
    for i in reversed(range(len(blocks))):
        q = kind if i % 2 == 0 else _flip(kind)
        for v in reversed(blocks[i]):
            out = Exists(v, out) if q == E else ForAll(v, out)
    return out


def _start(f: Formula, collection_level: Optional[int]):
    c = classify(f)
    if c.kind == "Unclassified":
        raise ClassificationError("formula has no declared complexity")
    if c.kind not in ("USigma", "UPi"):
        return c, None, None, None, None
    kind = E if c.kind == "USigma" else A
    norm = _Normalizer(f, c.n, collection_level)
    g = norm.standardize(f, {})
    blocks, m = norm.prenex(g, kind, c.n)
    return c, kind, norm, blocks, m


def normalize(f: Formula, collection_level: Optional[int] = None,
              report: Optional[dict] = None) -> Formula:
    """Strict prenex Σ_m/Π_m equivalent of a formula in underlined Σ_m/Π_m.

    ``collection_level`` bounds the Collection instances assumed; None means
    all.  If ``report`` is a dict it receives counts of Collection moves,
    pair collapses and vacuous quantifiers used.
    """
    c, kind, norm, blocks, m = _start(f, collection_level)
    if norm is None:
        return f
    vars_, m = norm.collapse(blocks, m, kind)
    if report is not None:
        report.update(collections=norm.collections, collapses=norm.collapses,
                      paddings=norm.paddings, target=str(c))
    return _quantify(kind, [[v] for v in vars_], m)


def prenex_form(f: Formula, collection_level: Optional[int] = None) -> Formula:
    """The prenex form before blocks are collapsed: every block may bind several
    variables, so the result is prenex but not strict in general."""
    c, kind, norm, blocks, m = _start(f, collection_level)
    if norm is None:
        return f
    return _quantify(kind, blocks, m)
