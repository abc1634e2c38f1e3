"""Truth over finite transitive structures (M, ∈).

``model_check`` is the Tarskian oracle.  ``sigma0_truth`` evaluates a Δ_0
formula inside the transitive closure of its parameters, and
``sigma_n_truth`` follows the layered recursion
⊨_{Σ_{n+1}} ∃x ψ  iff  there is x with ⊭_{Σ_n} dual(ψ), bottoming out in
``sigma0_truth``; the witness search is bounded by the given level.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Optional, Sequence, Union

from .complexity import classify, dual, is_delta0, prefix_of
from .errors import (
    ClassificationError, NonTransitiveDomainError, NotEvaluableError, NotInLevelError,
    UnboundVariableError,
)
from .formula import (
    And, BoundedExists, BoundedForAll, Equality, Exists, ForAll, Formula, Implies,
    InterpretedAtom, Macro, Membership, Not, Or, free_vars,
)
from .hfs import DEFAULT_ENGINE, HSet, SetEngine, is_transitive
from .macros import REGISTRY, is_literal

Env = Mapping[str, HSet]


class Evaluator:
    """Evaluate formulas over a fixed finite domain.

    Unbounded quantifiers range over ``domain``; bounded ones over the actual
    members of the bounding value.  Results of quantifier nodes are memoized
    on (node, values of the node's free variables).
    """

    def __init__(self, domain: Sequence[HSet], engine: SetEngine = DEFAULT_ENGINE):
        self.domain = tuple(domain)
        self.engine = engine
        self._fv: dict[int, tuple[str, ...]] = {}
        self._memo: dict[tuple, bool] = {}
        self._literals: dict[str, HSet] = {}
        self._keep: list[Formula] = []  # keep memoized nodes alive so ids stay unique

    def literal(self, text: str) -> HSet:
        v = self._literals.get(text)
        if v is None:
            v = self._literals[text] = self.engine.parse(text)
        return v

    def value(self, arg: str, env: Env) -> HSet:
        if is_literal(arg):
            return self.literal(arg)
        try:
            return env[arg]
        except KeyError:
            raise UnboundVariableError(f"variable {arg!r} has no value") from None

    def eval(self, f: Formula, env: Env) -> bool:
        if isinstance(f, Membership):
            return self.value(f.left, env) in self.value(f.right, env)
        if isinstance(f, Equality):
            return self.value(f.left, env) is self.value(f.right, env)
        if isinstance(f, Not):
            return not self.eval(f.body, env)
        if isinstance(f, And):
            return self.eval(f.left, env) and self.eval(f.right, env)
        if isinstance(f, Or):
            return self.eval(f.left, env) or self.eval(f.right, env)
        if isinstance(f, Implies):
            return (not self.eval(f.left, env)) or self.eval(f.right, env)
        if isinstance(f, (Macro, InterpretedAtom)):
            d = REGISTRY[f.name]
            if not d.evaluable or d.evaluate is None:
                raise NotEvaluableError(f"{f.name} is a syntax-only atom")
            return d.evaluate(self.engine, *(self.value(a, env) for a in f.args))
        return self._quant(f, env)

    def _quant(self, f: Formula, env: Env) -> bool:
        key_id = id(f)
        fv = self._fv.get(key_id)
        if fv is None:
            fv = self._fv[key_id] = free_vars(f)
            self._keep.append(f)
        key = (key_id,) + tuple(self.value(v, env) for v in fv)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, (ForAll, Exists)):
            rng: Iterable[HSet] = self.domain
        else:
            rng = self.value(f.bound, env).elements
        inner = dict(env)
        if isinstance(f, (Exists, BoundedExists)):
            out = False
            for x in rng:
                inner[f.var] = x
                if self.eval(f.body, inner):
                    out = True
                    break
        else:
            out = True
            for x in rng:
                inner[f.var] = x
                if not self.eval(f.body, inner):
                    out = False
                    break
        self._memo[key] = out
        return out


def _domain_of(M) -> tuple[HSet, ...]:
    elements = getattr(M, "elements", M)
    return tuple(elements)


def model_check(M, f: Formula, env: Optional[Env] = None,
                engine: SetEngine = DEFAULT_ENGINE, check: bool = True) -> bool:
    """Truth of f in (M, ∈); M is a Level or an explicit list of sets."""
    env = dict(env or {})
    domain = _domain_of(M)
    if check:
        members = frozenset(domain)
        for x in domain:
            for y in x.elements:
                if y not in members:
                    raise NonTransitiveDomainError(f"{y} ∈ {x} is missing from the domain")
        for v in free_vars(f):
            if v not in env:
                raise UnboundVariableError(f"free variable {v!r} has no value")
            if env[v] not in members:
                raise NotInLevelError(f"value of {v!r} is not in the domain")
    return Evaluator(domain, engine).eval(f, env)


def tc_domain(values: Iterable[HSet], engine: SetEngine = DEFAULT_ENGINE) -> tuple[HSet, ...]:
    """TC of the parameter set: the least transitive set containing the values."""
    return engine.transitive_closure(engine.make(values)).elements


def sigma0_truth(f: Formula, env: Optional[Env] = None, engine: SetEngine = DEFAULT_ENGINE,
                 allow_interpreted: bool = False) -> bool:
    if not is_delta0(f, allow_interpreted=allow_interpreted):
        raise ClassificationError(f"not Δ_0: {classify(f)}")
    env = dict(env or {})
    for v in free_vars(f):
        if v not in env:
            raise UnboundVariableError(f"free variable {v!r} has no value")
    domain = tc_domain(env[v] for v in free_vars(f))
    return Evaluator(domain, engine).eval(f, env)


def sigma_n_truth(n: int, f: Formula, env: Optional[Env], M,
                  engine: SetEngine = DEFAULT_ENGINE) -> bool:
    """Layered Σ_n truth with witnesses drawn from M."""
    c = classify(f)
    if n < 1 or c.kind != "Sigma" or c.n != n:
        raise ClassificationError(f"expected a strict Σ_{n} formula, got {c}")
    return _sat_sigma(n, f, dict(env or {}), _domain_of(M), engine)


def pi_n_truth(n: int, f: Formula, env: Optional[Env], M,
               engine: SetEngine = DEFAULT_ENGINE) -> bool:
    c = classify(f)
    if n < 1 or c.kind != "Pi" or c.n != n:
        raise ClassificationError(f"expected a strict Π_{n} formula, got {c}")
    return not _sat_sigma(n, dual(f), dict(env or {}), _domain_of(M), engine)


def _sat_sigma(n: int, f: Formula, env: dict, domain: tuple[HSet, ...], engine: SetEngine) -> bool:
    if n == 0:
        return sigma0_truth(f, env, engine, allow_interpreted=True)
    assert isinstance(f, Exists)
    psi_dual = dual(f.body)
    for x in domain:
        env2 = dict(env)
        env2[f.var] = x
        if not _sat_sigma(n - 1, psi_dual, env2, domain, engine):
            return True
    return False


def least_witness_level(f: Formula, max_n: int = 4, engine: SetEngine = DEFAULT_ENGINE) -> Optional[int]:
    """Least n ≤ max_n such that L_n satisfies the closed Σ_1 sentence f."""
    c = classify(f)
    if c.kind != "Sigma" or c.n != 1:
        raise ClassificationError(f"expected a strict Σ_1 sentence, got {c}")
    if free_vars(f):
        raise ClassificationError("expected a sentence (no free variables)")
    from .levels import build
    for n in range(max_n + 1):
        if model_check(build(n, engine), f, {}, engine, check=False):
            return n
    return None
