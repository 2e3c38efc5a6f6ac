"""Homomorphism registry, diagram commutativity, structure verifiers."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from hypergrass.fields import HF, element, one, zero
from hypergrass.homs import (
    Homomorphism,
    Ordering,
    check_diagram_commutes,
    compose,
    diagram_registry,
    hom_from_ordering,
    identity_hom,
    kappa,
    lookup_hom,
    ordering_from_hom,
    section_retraction_pairs,
    verify_argument,
    verify_homomorphism,
    verify_nonarchimedean_norm,
    verify_norm,
    verify_ordering,
    verify_phi_argument,
)


def test_registry_shape():
    reg = diagram_registry()
    solid = [h for h in reg if h.style == "solid"]
    dashed = [h for h in reg if h.style == "dashed"]
    assert len(solid) == 15 and len(dashed) == 4
    endpoints = {(h.source, h.target) for h in reg}
    assert len(endpoints) == len(reg)  # one arrow per ordered pair


def test_lookup_examples():
    ph_rs = lookup_hom(HF.R, HF.S)
    assert ph_rs(element(HF.R, F(-7, 2))) == element(HF.S, -1)
    abs_ct = lookup_hom(HF.C, HF.TRIANGLE)
    assert abs_ct(element(HF.C, (F(3, 2), F(1, 4)))) == element(HF.TRIANGLE, F(3, 2))


def test_ph_after_inc_is_identity_on_S():
    inc = lookup_hom(HF.S, HF.TR)
    ph = lookup_hom(HF.TR, HF.S)
    comp = compose(ph, inc)
    for v in (-1, 0, 1):
        assert comp(element(HF.S, v)) == element(HF.S, v)


def test_all_section_retractions_are_identities():
    for s, r in section_retraction_pairs():
        from hypergrass.fields import default_samples

        for x in default_samples(s.source):
            assert r(s(x)) == x


def test_diagram_commutes_on_probes():
    rep = check_diagram_commutes()
    assert rep.passed, rep.failures
    assert rep.path_pairs_checked > 5


def test_registered_homs_verify():
    for h in diagram_registry():
        rep = verify_homomorphism(h)
        assert rep.passed, (h.name, [c.to_json() for c in rep.checks])


def test_kappa_verifies_everywhere():
    for f in HF:
        if f in (HF.C,):
            continue  # C-sourced sums go through the numeric path below
        rep = verify_homomorphism(kappa(f))
        assert rep.passed, (f, [c.to_json() for c in rep.checks])


def test_kappa_on_complex_numeric_path():
    rep = verify_homomorphism(kappa(HF.C))
    assert rep.passed


def test_identity_tr_passes():
    rep = verify_homomorphism(identity_hom(HF.TR))
    assert rep.passed


def test_identity_R_to_TR_fails():
    # 1+1=2 classically but 1 (+) 1 = {1} in TR, and h(2)=2 is not 1
    h = Homomorphism("id:R->TR", HF.R, HF.TR, lambda x: element(HF.TR, x.value))
    rep = verify_homomorphism(
        h, probes=[element(HF.R, 1), element(HF.R, 2)]
    )
    assert not rep.passed
    failed = {c.name for c in rep.checks if not c.passed}
    assert failed == {"sum-containment"}


def test_identity_TR_to_R_fails():
    h = Homomorphism("id:TR->R", HF.TR, HF.R, lambda x: element(HF.R, x.value))
    rep = verify_homomorphism(
        h, probes=[element(HF.TR, 1), element(HF.TR, 2)]
    )
    assert not rep.passed


# ---------------------------------------------------------------------------
# orderings


def test_sign_ordering_is_identity_hom():
    o = ordering_from_hom(identity_hom(HF.S))
    assert o.positives(element(HF.S, 1))
    assert not o.positives(element(HF.S, -1)) and not o.positives(zero(HF.S))
    back = hom_from_ordering(o, [element(HF.S, v) for v in (-1, 0, 1)])
    for v in (-1, 0, 1):
        assert back(element(HF.S, v)) == element(HF.S, v)


def test_ordering_roundtrip_on_R_and_TR():
    from hypergrass.fields import default_samples

    for f in (HF.R, HF.TR):
        h = lookup_hom(f, HF.S)
        o = ordering_from_hom(h)
        probes = default_samples(f)
        if f is HF.TR:
            assert verify_ordering(o, probes) is None
        back = hom_from_ordering(o, probes if f is HF.TR else [element(f, q) for q in (1, 2, -1)])
        for x in probes:
            assert back(x) == h(x)


def test_bad_ordering_rejected():
    o = Ordering(HF.TR, lambda x: (not x.is_zero) and abs(x.value) >= 1)
    probes = [element(HF.TR, q) for q in (-2, -1, 0, 1, 2)]
    with pytest.raises(ValueError):
        hom_from_ordering(o, probes)


# ---------------------------------------------------------------------------
# norms and arguments


def test_identity_is_norm_on_triangle():
    rep = verify_norm(HF.TRIANGLE, lambda x: x.value)
    assert rep.valid and rep.agree


def test_identity_is_nonarchimedean_norm_on_ttriangle():
    rep = verify_nonarchimedean_norm(HF.TTRIANGLE, lambda x: x.value)
    assert rep.valid and rep.agree


def test_identity_on_triangle_is_not_nonarchimedean():
    # 1 (+) 1 = [0,2] reaches 2 > max(1,1)
    rep = verify_nonarchimedean_norm(HF.TRIANGLE, lambda x: x.value)
    assert not rep.valid and rep.agree


def test_trivial_norm_works_on_any_hyperfield():
    for f in (HF.S, HF.K, HF.TR, HF.P, HF.TC):
        rep = verify_norm(f, lambda x: F(0) if x.is_zero else F(1))
        assert rep.valid and rep.agree, f


def test_scaled_constant_fails_multiplicativity():
    rep = verify_norm(HF.S, lambda x: F(0) if x.is_zero else F(2))
    assert not rep.valid and rep.agree


def test_modulus_is_norm_on_tc_and_nonarchimedean():
    rep = verify_norm(HF.TC, lambda x: F(0) if x.is_zero else x.value[0])
    assert rep.valid and rep.agree
    rep2 = verify_nonarchimedean_norm(HF.TC, lambda x: F(0) if x.is_zero else x.value[0])
    assert rep2.valid and rep2.agree


def test_identity_argument_on_P():
    from hypergrass.fields import angle

    rep = verify_argument(HF.P, lambda x: angle(x))
    assert rep.valid and rep.agree


def test_phase_argument_on_TR():
    from hypergrass.fields import angle

    rep = verify_argument(HF.TR, lambda x: angle(x))
    assert rep.valid and rep.agree


def test_identity_on_phi_is_phi_argument_but_not_argument():
    from hypergrass.fields import angle

    closed = verify_phi_argument(HF.PHI, lambda x: angle(x))
    assert closed.valid and closed.agree
    opened = verify_argument(HF.PHI, lambda x: angle(x))
    assert not opened.valid and opened.agree


def test_tc_phase_is_phi_argument():
    from hypergrass.fields import angle

    rep = verify_phi_argument(HF.TC, lambda x: angle(x))
    assert rep.valid and rep.agree
