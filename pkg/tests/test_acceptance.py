"""The twelve acceptance criteria, each checked at its stated tolerance.

Every criterion records one PASS/FAIL line in RESULTS; conftest prints them in
the terminal summary.  Run this file directly to print the lines without pytest.
"""
from __future__ import annotations

import itertools
import random
import time

import pytest

from lforge.complexity import Pi, classify, normalize, pair_collapse, prenex_form
from lforge.corpus import random_delta0, random_formula, random_prenex, random_witness_matrix
from lforge.forge import (
    base_representation, comp_sentence, kleene_representation, spectrum, spectrum_leq,
    successor_representation,
)
from lforge.formula import Exists, ForAll, free_vars
from lforge.hfs import DEFAULT_ENGINE, SetEngine
from lforge.levels import build, definable_subsets, l_order
from lforge.srm import (
    HALTED, LIMIT_UNDETERMINED, Clear, Add, JumpIfEmpty, SrmProgram, compile_delta0, run,
)
from lforge.truth import least_witness_level, model_check, pi_n_truth, sigma0_truth, sigma_n_truth

ENG = DEFAULT_ENGINE
RESULTS: dict[str, str] = {}


def record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[f"{num} {title}"] = line
    print(line)


def _two_var_matrices(count: int, seed: int, extra: tuple[str, ...] = ()):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_delta0(rng, ("x0", "x1") + extra, 3)
        fv = set(free_vars(f))
        if {"x0", "x1"} <= fv:
            out.append(f)
    return out


# -- 1 ---------------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    fresh = SetEngine()
    equal = all(set(build(n, fresh).elements) == set(fresh.rank_level(n).elements)
                for n in range(5))
    size4 = len(build(4, fresh))
    L3 = build(3, fresh)
    subsets = {s for s, _ in definable_subsets(L3)}
    power = set(fresh.power_set(L3.as_set).elements)
    elapsed = time.perf_counter() - t0
    ok = equal and size4 == 16 and subsets == power and len(subsets) == 16 and elapsed < 10
    return ok, f"L_n = V_n for n<=4: {equal}, |L_4| = {size4}, " \
               f"{len(subsets)}/16 subsets of L_3, {elapsed:.2f}s from a fresh engine"


# -- 2 ---------------------------------------------------------------------------------


def criterion_2():
    elems = build(3).elements
    bad = 0
    for a, b, c, d in itertools.product(elems, repeat=4):
        if ENG.kpair(a, b) is ENG.kpair(c, d) and (a is not c or b is not d):
            bad += 1
    return bad == 0, f"{len(elems) ** 4} quadruples, {bad} collisions"


# -- 3 ---------------------------------------------------------------------------------


def criterion_3():
    L3 = build(3)
    elems = L3.elements
    corpus = _two_var_matrices(50, 3, ("y",))
    rng = random.Random(33)
    bad_i = bad_ii = bad_ii_literal = 0
    for phi in corpus:
        collapsed = pair_collapse(phi, "x0", "x1", "w")
        for a, b in itertools.product(elems, repeat=2):
            for y in elems:
                env = {"x0": a, "x1": b, "y": y}
                if sigma0_truth(phi, env) != sigma0_truth(collapsed, {"w": ENG.kpair(a, b), "y": y}):
                    bad_i += 1
        q = rng.choice((Exists, ForAll))
        lhs = ForAll("x0", ForAll("x1", q("y", phi)))
        rhs = ForAll("w", q("y", pair_collapse(phi, "x0", "x1", "w", universal=True)))
        rhs_literal = ForAll("w", q("y", collapsed))
        truth = model_check(L3, lhs)
        bad_ii += truth != model_check(L3, rhs)
        bad_ii_literal += truth != model_check(L3, rhs_literal)
    ok = bad_i == 0 and bad_ii == 0
    return ok, f"{len(corpus)} matrices; (i) {bad_i} counterexamples; (ii) {bad_ii} " \
               f"counterexamples over L_3 (universal-block template), {bad_ii_literal} with " \
               f"the existential template"


# -- 4 ---------------------------------------------------------------------------------


def normalization_corpus(count: int = 500, seed: int = 4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_formula(rng, (), qdepth=3, size=5)
        if classify(f).kind in ("USigma", "UPi"):
            out.append(f)
    return out


def criterion_4():
    L3, L4 = build(3), build(4)
    corpus = normalization_corpus()
    fail = nonstrict = pre_fail = fail_without_collapse = 0
    for f in corpus:
        report: dict = {}
        g = normalize(f, report=report)
        if not classify(g).strict:
            nonstrict += 1
        p = prenex_form(f)
        for lv in (L3, L4):
            t = model_check(lv, f)
            if t != model_check(lv, g):
                fail += 1
                fail_without_collapse += report["collapses"] == 0
            if t != model_check(lv, p):
                pre_fail += 1
    ok = fail == 0 and nonstrict == 0
    return ok, f"{len(corpus)} formulas x 2 levels: {fail} truth changes, {nonstrict} " \
               f"non-strict outputs; {fail_without_collapse} of the changes involve no pair " \
               f"collapse; the uncollapsed prenex form changes truth {pre_fail} times"


# -- 5 ---------------------------------------------------------------------------------


def criterion_5():
    L3, L4 = build(3), build(4)
    rng = random.Random(5)
    corpus = [random_delta0(rng, ("x", "y"), 3) for _ in range(40)]
    bad = cases = 0
    for f in corpus:
        for a, b in itertools.product(L3.elements, repeat=2):
            env = {"x": a, "y": b}
            env = {v: env[v] for v in free_vars(f)}
            t = sigma0_truth(f, env)
            cases += 1
            if not (t == model_check(L3, f, env) == model_check(L4, f, env)):
                bad += 1
    return bad == 0, f"{len(corpus)} formulas, {cases} parameter tuples, {bad} disagreements"


# -- 6 ---------------------------------------------------------------------------------


def criterion_6():
    L3, L4 = build(3), build(4)
    rng = random.Random(6)
    bad = cases = 0
    for n in (1, 2, 3):
        for _ in range(20):
            for kind in ("E", "A"):
                f = random_prenex(rng, n, kind, (), 2)
                for lv in (L3, L4):
                    layered = (sigma_n_truth if kind == "E" else pi_n_truth)(n, f, {}, lv)
                    cases += 1
                    if layered != model_check(lv, f):
                        bad += 1
    return bad == 0, f"{cases} (formula, level) cases for n<=3, {bad} disagreements"


# -- 7 ---------------------------------------------------------------------------------


def criterion_7():
    L3, L4 = build(3), build(4)
    rng = random.Random(7)
    bad = cases3 = cases4 = not_halted = 0
    grid = [random_delta0(rng, ("x", "y"), 2) for _ in range(16)]
    for f in grid:
        fv = list(free_vars(f))
        p = compile_delta0(f)
        for vals in itertools.product(L3.elements, repeat=len(fv)):
            env = dict(zip(fv, vals))
            res = run(p, list(vals), L3)
            cases3 += 1
            if not res.halted:
                not_halted += 1
            elif (res.output.as_natural() == 1) != sigma0_truth(f, env):
                bad += 1
    sample = [random_delta0(rng, ("x", "y"), 2) for _ in range(100)]
    for f in sample:
        fv = list(free_vars(f))
        vals = [rng.choice(L4.elements) for _ in fv]
        res = run(compile_delta0(f), vals, L4)
        cases4 += 1
        if not res.halted:
            not_halted += 1
        elif (res.output.as_natural() == 1) != sigma0_truth(f, dict(zip(fv, vals))):
            bad += 1
    ok = bad == 0 and not_halted == 0 and cases3 >= 200 and cases4 == 100
    return ok, f"{cases3} L_3 grid cases, {cases4} L_4 samples, {bad} disagreements, " \
               f"{not_halted} runs not halted"


# -- 8 ---------------------------------------------------------------------------------


def criterion_8():
    L4 = build(4)
    loop = SrmProgram((JumpIfEmpty(0, 1),))
    res = run(loop, [ENG.make([])], L4, max_limits=3, trace=True)
    limits = [(c, conf) for c, conf in res.trace if c.step == 0 and c.limit_count > 0]
    limit_ok = all(conf.line == 1 and conf.registers == (ENG.make([]),) for _, conf in limits)
    loop_ok = res.outcome == LIMIT_UNDETERMINED and len(limits) == 3 and limit_ok \
        and str(res.clock) == "ω·3+1"
    straight_ok = True
    for k in range(1, 6):
        lines = tuple(Clear(0) if i % 2 == 0 else Add(0, 0) for i in range(k))
        r = run(SrmProgram(lines), [], L4)
        straight_ok &= r.outcome == HALTED and r.clock.limit_count == 0 and r.clock.step == k
    ok = loop_ok and straight_ok
    return ok, f"self-loop: {res.outcome} at {res.clock} after {len(limits)} limits " \
               f"(limit line 1, registers unchanged: {limit_ok}); straight-line clocks ω·0+len: " \
               f"{straight_ok}"


# -- 9 ---------------------------------------------------------------------------------


def criterion_9():
    rng = random.Random(9)
    bad = []
    for i in range(20):
        A = random_witness_matrix(rng)
        r = kleene_representation(A)
        lwl = least_witness_level(Exists("x", A))
        for n in range(5):
            lv = build(n)
            sats = r.satisfiers(lv)
            expected = [ENG.natural(lwl)] if lwl is not None and lwl <= n - 1 else []
            if sats != expected:
                bad.append((i, n))
    L4 = build(4)
    rep = base_representation(1)
    succ_ok = rep.satisfiers(L4) == [ENG.natural(1)]
    for k in (1, 2):
        rep = successor_representation(rep)
        succ_ok &= rep.satisfiers(L4) == [ENG.natural(1 + k)]
    ok = not bad and succ_ok
    return ok, f"20 matrices x 5 levels, {len(bad)} mismatches; successor chain #1 -> #2 -> #3: " \
               f"{succ_ok}"


# -- 10 --------------------------------------------------------------------------------


def criterion_10():
    L4 = build(4)
    reps = {k: base_representation(k) for k in (1, 2, 3)}
    bad = []
    classes = set()
    for g, d in itertools.permutations(reps, 2):
        s = comp_sentence(reps[g], reps[d])
        classes.add(str(classify(s)))
        if classify(normalize(s)) != Pi(1):
            bad.append((g, d, "class"))
        if model_check(L4, s) != (g < d):
            bad.append((g, d, "truth"))
    return not bad, f"6 ordered pairs, {len(bad)} failures; displayed class {sorted(classes)}, " \
                    f"normalized Pi(1)"


# -- 11 --------------------------------------------------------------------------------


def criterion_11():
    rng = random.Random(11)
    pool = [Exists("x", random_witness_matrix(rng)) for _ in range(30)]
    single_bad = sum(spectrum([s]).value != least_witness_level(s) for s in pool)
    mono_bad = 0
    for _ in range(100):
        big = rng.sample(pool, rng.randint(0, 5))
        small = rng.sample(big, rng.randint(0, len(big)))
        if not spectrum_leq(spectrum(small).value, spectrum(big).value):
            mono_bad += 1
    ok = single_bad == 0 and mono_bad == 0
    return ok, f"{len(pool)} singletons, {single_bad} mismatches; 100 inclusion pairs, " \
               f"{mono_bad} monotonicity violations"


# -- 12 --------------------------------------------------------------------------------


def criterion_12():
    L4 = build(4)
    el = L4.elements
    total = True
    for x, y in itertools.product(el, repeat=2):
        c = l_order(L4, x, y)
        total &= (c == 0) == (x is y) and c == -l_order(L4, y, x)
        for z in el:
            if c < 0 and l_order(L4, y, z) < 0:
                total &= l_order(L4, x, z) < 0
    same = build(4, SetEngine()).dumps() == build(4, SetEngine()).dumps() == L4.dumps()
    return total and same, f"{len(el) ** 2} pairs total order: {total}; independent builds " \
                           f"byte-identical: {same}"


CRITERIA = [
    (1, "finite-level collapse", criterion_1),
    (2, "Kuratowski adequacy", criterion_2),
    (3, "two-quantifier reduction", criterion_3),
    (4, "normalization soundness", criterion_4),
    (5, "Δ_0 transitive invariance", criterion_5),
    (6, "layered truth vs oracle", criterion_6),
    (7, "Δ_0 decision programs", criterion_7),
    (8, "SRM limit semantics", criterion_8),
    (9, "representation suite", criterion_9),
    (10, "Comp semantics", criterion_10),
    (11, "spectrum", criterion_11),
    (12, "determinism and ordering", criterion_12),
]


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, title, check):
    ok, detail = check()
    record(num, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for num, title, check in CRITERIA:
        record(num, title, *check())
