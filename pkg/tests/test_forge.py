from __future__ import annotations

import itertools
import random

import pytest

from lforge.complexity import Pi, Sigma, classify, normalize
from lforge.corpus import random_witness_matrix
from lforge.errors import ClassificationError, SlotError
from lforge.forge import (
    Representation, SpectrumResult, base_representation, comp_sentence, exists_sentence,
    kleene_representation, phiT_template, pi_dual_of, rfn_template, spectrum, spectrum_leq,
    successor_displayed, successor_representation,
)
from lforge.formula import Exists, ForAll, Implies, alpha_equal, substitute, to_text, walk
from lforge.hfs import DEFAULT_ENGINE as E
from lforge.levels import build
from lforge.parser import parse
from lforge.truth import least_witness_level, model_check


def nat(k):
    return E.natural(k)


def test_kleene_examples(L4):
    r = kleene_representation(parse("Is(x, {#0})"))
    assert r.satisfiers(L4) == [nat(2)]
    assert kleene_representation(parse("Empty(x)")).satisfiers(L4) == [nat(1)]
    assert classify(r.normalized) == Sigma(1)
    with pytest.raises(ClassificationError):
        kleene_representation(parse("exists y. x in y"))
    with pytest.raises(SlotError):
        kleene_representation(parse("x in z"))


def test_kleene_uniqueness_and_dual_agreement():
    rng = random.Random(20)
    for _ in range(20):
        A = random_witness_matrix(rng)
        r = kleene_representation(A)
        lwl = least_witness_level(Exists("x", A))
        for n in range(5):
            lv = build(n)
            sats = r.satisfiers(lv)
            assert len(sats) <= 1
            if sats:
                assert sats == [nat(lwl)]
                assert r.satisfiers(lv, dual=True) == sats


def test_dual_shape():
    r = base_representation(1)
    d = r.pi_dual
    assert isinstance(d, ForAll) and isinstance(d.body, Implies)
    assert alpha_equal(d.body.left, substitute(r.sigma_form, r.var, d.var))
    assert classify(r.normalized_dual) == Pi(1)


def test_dual_is_vacuous_without_a_satisfier():
    # with no satisfier the dual holds of everything; agreement is only claimed where one exists
    r = base_representation(3)
    lv = build(2)
    assert r.satisfiers(lv) == []
    assert r.satisfiers(lv, dual=True) == list(lv.elements)


def test_successor_chain(L4):
    r = base_representation(1)
    r2 = successor_representation(r)
    r3 = successor_representation(r2)
    assert r2.satisfiers(L4) == [nat(2)] and r2.label == "#1+1"
    assert r3.satisfiers(L4) == [nat(3)]
    assert r2.satisfiers(L4, dual=True) == [nat(2)]
    assert classify(r2.normalized) == Sigma(1)


def test_successor_displayed_form_is_not_unique(L4):
    # the literal construction is also satisfied by every ξ without a predecessor satisfier
    shown = successor_displayed(base_representation(1))
    sats = [x for x in L4.elements if model_check(L4, shown, {"xi": x})]
    assert nat(2) in sats and nat(0) in sats


@pytest.mark.parametrize("g,d", list(itertools.permutations((1, 2, 3), 2)))
def test_comp(L4, g, d):
    s = comp_sentence(base_representation(g), base_representation(d))
    assert model_check(L4, s) == (g < d)
    assert classify(normalize(s)) == Pi(1)


def test_exists_sentence():
    s = exists_sentence(base_representation(1))
    assert model_check(build(2), s)
    assert not model_check(build(1), s)


def test_reflection_templates():
    theory = parse("Delta0Code(c)")
    rfn = rfn_template(theory)
    assert alpha_equal(parse(to_text(rfn)), rfn)
    phi = phiT_template(theory)
    assert alpha_equal(parse(to_text(phi)), phi)
    spliced = [n for n in walk(phi) if getattr(n, "name", None) == "Delta0Code"]
    assert len(spliced) == 1
    with pytest.raises(SlotError):
        rfn_template(parse("x in y"))


def test_spectrum_examples():
    assert spectrum([]).value == 0
    e0, e1 = parse("exists x. Empty(x)"), parse("exists x. Is(x, {#0})")
    assert spectrum([e0]).value == 1
    assert spectrum([e0, e1]).value == 2
    res = spectrum([parse("exists x. x in x")])
    assert res.value is None and res.to_json()["value"] == "unbounded-at-scale"


def test_spectrum_monotone_and_singletons():
    rng = random.Random(11)
    pool = [Exists("x", random_witness_matrix(rng)) for _ in range(15)]
    for s in pool:
        assert spectrum([s]).value == least_witness_level(s)
    for _ in range(30):
        big = rng.sample(pool, rng.randint(0, 4))
        small = big[:rng.randint(0, len(big))]
        assert spectrum_leq(spectrum(small).value, spectrum(big).value)
        res = spectrum(big)
        if res.value is not None and big:
            assert res.value == max(res.per_sentence.values())


def test_kleene_minimality():
    rng = random.Random(12)
    for _ in range(15):
        s = Exists("x", random_witness_matrix(rng))
        n = spectrum([s]).value
        if n:
            assert not model_check(build(n - 1), s)
