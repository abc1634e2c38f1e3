"""Gödel coding and the two-variable diagonal construction.

A code is the alpha-canonical print form read as a base-256 natural.  The
numeral for k is the von Neumann natural #k, introduced through the ``Is``
macro: θ(numeral(k), x) is ∃n[Is(n, #k) ∧ θ(n, x)].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import SlotError
from .formula import (
    And, Exists, Formula, InterpretedAtom, Macro, canonical, canonical_text, free_vars,
    fresh_var, all_vars,
)


def encode(f: Formula) -> int:
    return int.from_bytes(canonical_text(f).encode("utf-8"), "big")


def decode(code: int) -> Formula:
    from .parser import parse
    if code <= 0:
        raise ValueError("codes are positive naturals")
    raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
    return parse(raw.decode("utf-8"))


def _slots(f: Formula, slots: Optional[tuple[str, str]]) -> tuple[str, str]:
    fv = free_vars(f)
    if slots is None:
        if len(fv) != 2:
            raise SlotError(f"expected exactly two free variables (code, x), found {len(fv)}")
        return fv[0], fv[1]
    if len(slots) != 2 or slots[0] == slots[1]:
        raise SlotError("need two distinct slot names")
    extra = [v for v in fv if v not in slots]
    if extra:
        raise SlotError(f"free variables outside the slots: {extra}")
    return slots


def instantiate(theta: Formula, k: int, slot: str) -> Formula:
    """θ(numeral(k), x): bind the code slot to the natural #k."""
    return Exists(slot, And(Macro("Is", (slot, f"#{k}")), theta))


def diag_function(code: int) -> int:
    """d(⌜θ⌝) = ⌜θ(numeral(⌜θ⌝), x)⌝ for θ with two free slots (code first)."""
    theta = decode(code)
    n, _ = _slots(theta, None)
    return encode(instantiate(theta, code, n))


@dataclass(frozen=True)
class DiagonalResult:
    psi: Formula
    phi_prime: Formula
    code: int
    slots: tuple[str, str]


def diagonalize(phi: Formula, slots: Optional[tuple[str, str]] = None) -> DiagonalResult:
    """ψ(x) := φ'(numeral(⌜φ'⌝), x) with φ'(n, x) := ∃m[Diag(n, m) ∧ φ(m, x)]."""
    n, x = _slots(phi, slots)
    m = fresh_var(all_vars(phi) | {n, x})
    from .formula import substitute
    phi_prime = Exists(m, And(InterpretedAtom("Diag", (n, m)), substitute(phi, n, m)))
    # canonical form keeps the slot names (they are free) and fixes the bound ones
    phi_prime = canonical(phi_prime)
    k = encode(phi_prime)
    psi = instantiate(phi_prime, k, n)
    return DiagonalResult(psi=psi, phi_prime=phi_prime, code=k, slots=(n, x))
