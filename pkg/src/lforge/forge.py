"""Ordinal representations, comparison and reflection sentences.

A representation is a Σ_1 formula in one free variable meant to hold of at
most one ordinal.  The displayed form keeps the interpreted ``IsLevel`` atom
and the shape of the construction; ``normalized`` gives the strict prenex Σ_1
equivalent.  Semantic checks run on the displayed form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from .complexity import ComplexityClass, classify, is_delta0, normalize
from .errors import ClassificationError, SlotError
from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Exists, ForAll, Formula, Implies,
    InterpretedAtom, Macro, Not, all_vars, conj, free_vars, fresh_var, relativize, substitute,
)
from .hfs import DEFAULT_ENGINE, HSet, SetEngine
from .levels import Level, build
from .truth import least_witness_level, model_check

XI = "xi"


@dataclass(frozen=True)
class Representation:
    sigma_form: Formula
    pi_dual: Formula
    label: str
    var: str = XI

    @cached_property
    def normalized(self) -> Formula:
        return normalize(self.sigma_form)

    @cached_property
    def normalized_dual(self) -> Formula:
        return normalize(self.pi_dual)

    def satisfiers(self, lv: Level, dual: bool = False) -> list[HSet]:
        f = self.pi_dual if dual else self.sigma_form
        return [x for x in lv.elements if model_check(lv, f, {self.var: x}, lv.engine, check=False)]


def _fresh(avoid, *names) -> str:
    return fresh_var(set(avoid) | set(names))


def pi_dual_of(sigma: Formula, var: str) -> Formula:
    """∀y[R(y) → var = y]."""
    y = _fresh(all_vars(sigma), var)
    return ForAll(y, Implies(substitute(sigma, var, y), Equality(var, y)))


def kleene_representation(A: Formula, x: str = "x", var: str = XI,
                          label: Optional[str] = None) -> Representation:
    """R(ξ): ξ is the least ordinal whose level L_ξ holds a witness of ∃x A."""
    if not is_delta0(A):
        raise ClassificationError(f"the matrix must be Δ_0, got {classify(A)}")
    extra = [v for v in free_vars(A) if v != x]
    if extra:
        raise SlotError(f"matrix has free variables besides {x!r}: {extra}")
    used = all_vars(A) | {x}
    if var in used:
        raise SlotError(f"representation variable {var!r} occurs in the matrix")
    a = _fresh(used, var)
    eta = _fresh(used, var, a)
    witness_at_xi = Exists(a, And(InterpretedAtom("IsLevel", (a, var)), BoundedExists(x, a, A)))
    none_below = BoundedForAll(eta, var, Exists(a, And(
        InterpretedAtom("IsLevel", (a, eta)), BoundedForAll(x, a, Not(A)))))
    sigma = conj(Macro("Ordinal", (var,)), witness_at_xi, none_below)
    from .formula import to_text
    return Representation(sigma, pi_dual_of(sigma, var), label or f"kleene[{to_text(A)}]", var)


def base_representation(k: int) -> Representation:
    """The Kleene representation of the natural k ≥ 1: A(x) := x = #(k-1)."""
    if k < 1:
        raise ValueError("the Kleene construction represents successor stages k ≥ 1")
    return kleene_representation(Macro("Is", ("x", f"#{k - 1}")), label=f"#{k}")


def successor_representation(r: Representation) -> Representation:
    """R^{β+1}(ξ) := ∃η∈ξ R(η) ∧ ∀η∈ξ[R_*(η) → ξ = η ∪ {η}].

    The first conjunct is added to the displayed construction: without it every
    ξ containing no η with R_*(η), such as ∅, satisfies the formula vacuously.
    """
    var = r.var
    used = all_vars(r.sigma_form) | all_vars(r.pi_dual) | {var}
    eta = _fresh(used)
    has_pred = BoundedExists(eta, var, substitute(r.sigma_form, var, eta))
    succ = BoundedForAll(eta, var, Implies(substitute(r.pi_dual, var, eta),
                                           Macro("Succ", (var, eta))))
    sigma = And(has_pred, succ)
    return Representation(sigma, pi_dual_of(sigma, var), r.label + "+1", var)


def successor_displayed(r: Representation) -> Formula:
    """The construction exactly as displayed, without the existence conjunct."""
    var = r.var
    eta = _fresh(all_vars(r.pi_dual) | {var})
    return BoundedForAll(eta, var, Implies(substitute(r.pi_dual, var, eta),
                                           Macro("Succ", (var, eta))))


def exists_sentence(r: Representation) -> Formula:
    """Exists(r) := ∃x R(x)."""
    x = _fresh(all_vars(r.sigma_form), r.var)
    return Exists(x, substitute(r.sigma_form, r.var, x))


def comp_sentence(g: Representation, d: Representation) -> Formula:
    """Comp(γ, δ) := ∀ξ[R^δ(ξ) → L_ξ ⊨ Exists(γ)].

    Satisfaction in L_ξ is relativization to a bounded variable a with
    IsLevel(a, ξ); the universal form ∀a(IsLevel(a, ξ) → ...) keeps it Π_1.
    """
    ex = exists_sentence(g)
    xi = _fresh(all_vars(ex) | all_vars(d.sigma_form))
    a = _fresh(all_vars(ex) | all_vars(d.sigma_form), xi)
    inner = ForAll(a, Implies(InterpretedAtom("IsLevel", (a, xi)), relativize(ex, a)))
    return ForAll(xi, Implies(substitute(d.sigma_form, d.var, xi), inner))


# -- reflection templates (syntax only) -----------------------------------------------


def _theory_slot(theory_def: Formula) -> str:
    fv = free_vars(theory_def)
    if len(fv) != 1:
        raise SlotError(f"theory definition needs exactly one free code variable, found {list(fv)}")
    return fv[0]


def rfn_template(theory_def: Formula, level_var: str = "a") -> Formula:
    """∀p[Δ_0-code p → ∀q(q codes ∃x∈a φ_p → (θ(q) → a ⊨_Σ1 ∃x φ_p))]."""
    slot = _theory_slot(theory_def)
    used = all_vars(theory_def) | {level_var}
    if level_var == slot:
        raise SlotError("level variable clashes with the code slot")
    p = _fresh(used)
    q = _fresh(used, p)
    theta = substitute(theory_def, slot, q)
    body = Implies(InterpretedAtom("BExistsCode", (q, p, level_var)),
                   Implies(theta, InterpretedAtom("SatSigma1", (level_var, p))))
    return ForAll(p, Implies(InterpretedAtom("Delta0Code", (p,)), ForAll(q, body)))


def phiT_template(theory_def: Formula, level_var: str = "a", var: str = XI) -> Formula:
    """φ_T(ξ): every Σ_1 sentence σ with θ(σ relativized to a) holds in L_ξ."""
    slot = _theory_slot(theory_def)
    used = all_vars(theory_def) | {level_var, var}
    if len({slot, level_var, var}) != 3:
        raise SlotError("slot, level and ordinal variables must be distinct")
    s = _fresh(used)
    q = _fresh(used, s)
    b = _fresh(used, s, q)
    theta = substitute(theory_def, slot, q)
    holds = ForAll(b, Implies(InterpretedAtom("IsLevel", (b, var)), InterpretedAtom("Sat", (b, s))))
    body = Implies(InterpretedAtom("RelCode", (q, s, level_var)), Implies(theta, holds))
    return ForAll(s, Implies(InterpretedAtom("Sigma1Code", (s,)), ForAll(q, body)))


# -- spectrum -------------------------------------------------------------------------


@dataclass
class SpectrumResult:
    value: Optional[int]  # None: not reached within the built levels
    per_sentence: dict[str, Optional[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": "unbounded-at-scale" if self.value is None else self.value,
                "perSentence": {k: ("unbounded-at-scale" if v is None else v)
                                for k, v in self.per_sentence.items()}}


def spectrum(sentences: Sequence[Formula], max_n: int = 4,
             engine: SetEngine = DEFAULT_ENGINE) -> SpectrumResult:
    """Least n ≤ max_n with L_n satisfying every sentence."""
    from .formula import to_text
    per = {to_text(s): least_witness_level(s, max_n, engine) for s in sentences}
    value = None
    for n in range(max_n + 1):
        lv = build(n, engine)
        if all(model_check(lv, s, {}, engine, check=False) for s in sentences):
            value = n
            break
    return SpectrumResult(value, per)


def spectrum_leq(a: Optional[int], b: Optional[int]) -> bool:
    """Order on spectrum values with 'unbounded-at-scale' as the top."""
    if b is None:
        return True
    return a is not None and a <= b
