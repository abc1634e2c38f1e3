from __future__ import annotations

import itertools
import json
import random

import pytest

from lforge.corpus import random_prenex
from lforge.errors import NotInLevelError, ResourceLimitError
from lforge.hfs import DEFAULT_ENGINE as E, SetEngine, format_set
from lforge.levels import build, definable_subsets, l_min, l_order, level_set, level_size, templates
from lforge.parser import parse
from lforge.truth import Evaluator, model_check

EMPTY = E.make([])


def test_small_levels():
    assert build(0).elements == ()
    assert build(1).elements == (EMPTY,)
    assert [s for s, _ in definable_subsets(build(0))] == [EMPTY]
    assert {s for s, _ in definable_subsets(build(1))} == {EMPTY, E.natural(1)}


def test_definable_subsets_of_L3_are_the_power_set(L3):
    found = [s for s, _ in definable_subsets(L3)]
    assert len(found) == len(set(found)) == 16
    assert set(found) == set(E.power_set(L3.as_set).elements)


def test_levels_are_rank_levels():
    for n in range(5):
        assert set(build(n).elements) == set(E.rank_level(n).elements)
    assert len(build(4)) == 16


def test_level_size_beyond_full_builds():
    assert level_size(4) == 16
    assert level_size(5) == 2 ** 16
    with pytest.raises(ResourceLimitError):
        build(5)


def test_cumulative_and_prefix_order():
    for n in range(4):
        a, b = build(n), build(n + 1)
        assert b.elements[:len(a)] == a.elements


def test_witnesses_define_their_sets():
    for n in range(1, 5):
        lv, prev = build(n), build(n - 1)
        ev = Evaluator(prev.elements, E)
        for s in lv.elements:
            w = lv.witness[s]
            if lv.birth_stage[s] != n:
                continue
            f = parse(w.formula)
            env = {f"p{i}": p for i, p in enumerate(w.params)}
            members = [x for x in prev.elements if ev.eval(f, {**env, "x": x})]
            assert E.make(members) is s


def test_birth_stage_order(L4):
    assert l_order(L4, EMPTY, E.natural(1)) == -1
    rank2 = [x for x in L4.elements if x.rank == 2]
    assert all(l_order(L4, E.natural(1), x) == -1 for x in rank2)
    assert [L4.birth_stage[x] for x in L4.elements] == sorted(L4.birth_stage[x] for x in L4.elements)


def test_l_order_is_a_strict_total_order(L4):
    el = L4.elements
    for x, y in itertools.product(el, repeat=2):
        assert (l_order(L4, x, y) == 0) == (x is y)
        assert l_order(L4, x, y) == -l_order(L4, y, x)
    for x, y, z in itertools.product(el, repeat=3):
        if l_order(L4, x, y) < 0 and l_order(L4, y, z) < 0:
            assert l_order(L4, x, z) < 0


def test_l_min(L4):
    rng = random.Random(0)
    for _ in range(50):
        xs = rng.sample(L4.elements, rng.randint(1, 16))
        m = l_min(L4, xs)
        assert all(l_order(L4, m, x) <= 0 for x in xs)
    with pytest.raises(NotInLevelError):
        l_order(build(2), EMPTY, E.natural(2))


def test_deterministic_dump():
    a, b = build(4, SetEngine()), build(4, SetEngine())
    assert a.dumps() == b.dumps()
    assert a.digest == b.digest
    data = json.loads(a.dumps())
    assert data["size"] == 16 and [e["position"] for e in data["elements"]] == list(range(16))


def test_level_set():
    assert level_set(3) is E.rank_level(3)


def test_templates_sorted_and_deterministic():
    ts = templates()
    codes = [c for c, _, _ in ts]
    assert codes == sorted(codes) and len(set(codes)) == len(codes)
    assert templates() == ts


def test_upward_sigma1_persistence():
    rng = random.Random(5)
    for _ in range(40):
        f = random_prenex(rng, 1, "E", (), 2)
        truth = [model_check(build(n), f) for n in range(1, 5)]
        assert truth == sorted(truth)
