"""Hyperfield element/set arithmetic: case tables, folds, axioms."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest

from hypergrass.fields import (
    HF,
    Arc,
    SetValue,
    Subgroup,
    UnsupportedOperation,
    contains_zero,
    default_samples,
    element,
    fold_hypersum,
    format_element,
    hypersum,
    inverse,
    negate,
    one,
    parse_element,
    probes_of,
    product,
    quotient,
    scale_set,
    set_product,
    set_to_json,
    singleton,
    verify_hyperfield_axioms,
    zero,
)

S = lambda v: element(HF.S, v)
K = lambda v: element(HF.K, v)
TR = lambda v: element(HF.TR, v)
TT = lambda v: element(HF.TTRIANGLE, v)
TRI = lambda v: element(HF.TRIANGLE, v)
P = lambda t: element(HF.P, t)
PHI = lambda t: element(HF.PHI, t)
TC = lambda m, t: element(HF.TC, (F(m), F(t)))


# ---------------------------------------------------------------------------
# products


def test_product_sign_group():
    assert product(S(1), S(-1)) == S(-1)


def test_product_krasner_trivial_group():
    assert product(K(1), K(1)) == K(1)


def test_product_phase_angles_add_mod_one():
    # oracle: rational addition of turns mod 1
    a, b = F(1, 3), F(1, 2)
    assert product(P(a), P(b)) == P((a + b) % 1)
    assert product(P(F(2, 3)), P(F(1, 2))) == P(F(1, 6))


def test_product_zero_absorbs_everywhere():
    for f in HF:
        x = one(f)
        assert product(x, zero(f)).is_zero
        assert product(zero(f), x).is_zero


# ---------------------------------------------------------------------------
# binary hypersum case tables


def test_hypersum_sign_mixed_pair():
    assert hypersum(S(1), S(-1)) == SetValue.make(
        HF.S, points=[S(1), S(-1)], includes_zero=True
    )


def test_hypersum_additive_identity_everywhere():
    for f in HF:
        if f in (HF.R, HF.C):
            continue
        x = one(f)
        assert hypersum(x, zero(f)) == singleton(x)
        assert hypersum(zero(f), zero(f)) == singleton(zero(f))


def test_hypersum_triangle_is_triangle_inequality_interval():
    got = hypersum(TRI(3), TRI(4))
    assert got.intervals == ((F(1), F(7)),)
    assert not got.includes_zero
    # oracle: direct evaluation of |a-b| <= c <= a+b on a rational sweep
    for c in [F(k, 7) for k in range(0, 60)]:
        member = F(1) <= c <= F(7) and c != 0
        assert got.contains(TRI(c)) == member


def test_hypersum_tr_dominant_modulus_wins():
    # paper rule: if |a| > |b| then a (+) b = a
    assert hypersum(TR(3), TR(-2)) == singleton(TR(3))
    assert hypersum(TR(-2), TR(3)) == singleton(TR(3))


def test_hypersum_ttriangle_equal_args():
    # paper rule: a (+) a = [0, a]
    got = hypersum(TT(5), TT(5))
    assert got.includes_zero and got.intervals == ((F(0), F(5)),)


def test_hypersum_kras():
    assert hypersum(K(1), K(1)) == SetValue.make(HF.K, points=[K(1)], includes_zero=True)


def test_hypersum_phase_shortest_open_arc():
    got = hypersum(P(F(0)), P(F(1, 3)))
    assert got.arcs == (Arc(F(1), F(0), F(1, 3), False, False),)
    assert not got.contains(P(F(0))) and not got.contains(P(F(1, 3)))
    assert got.contains(P(F(1, 6)))
    # across the wrap
    got = hypersum(P(F(11, 12)), P(F(1, 12)))
    assert got.contains(P(F(0))) and not got.contains(P(F(1, 6)))


def test_hypersum_phase_antipodal():
    got = hypersum(P(F(1, 4)), P(F(3, 4)))
    assert got.includes_zero and set(got.points) == {P(F(1, 4)), P(F(3, 4))}


def test_hypersum_tropical_phase_closed_arc_and_full_circle():
    got = hypersum(PHI(F(0)), PHI(F(1, 3)))
    assert got.contains(PHI(F(0))) and got.contains(PHI(F(1, 3)))
    assert not got.contains(PHI(F(1, 2)))
    full = hypersum(PHI(F(0)), PHI(F(1, 2)))
    assert full.includes_zero and full.circles == (F(1),)


def test_hypersum_tc_cases():
    a = TC(2, 0)
    assert hypersum(a, TC(1, F(1, 3))) == singleton(a)
    disk = hypersum(a, negate(a))
    assert disk.disk == F(2) and disk.includes_zero
    assert disk.contains(TC(F(1, 2), F(5, 7)))
    arc = hypersum(TC(2, 0), TC(2, F(1, 4)))
    assert arc.contains(TC(2, F(1, 8))) and arc.contains(TC(2, 0))
    assert not arc.contains(TC(2, F(1, 2)))


def test_hypersum_classical_fields_refused():
    with pytest.raises(UnsupportedOperation):
        hypersum(element(HF.R, 1), element(HF.R, 1))
    with pytest.raises(UnsupportedOperation):
        hypersum(element(HF.C, (F(1), F(0))), element(HF.C, (F(1), F(0))))


def test_hypersum_mismatched_fields_is_caller_bug():
    with pytest.raises(ValueError):
        hypersum(S(1), K(1))


# ---------------------------------------------------------------------------
# negation


def test_negate_table():
    assert negate(S(1)) == S(-1)
    assert negate(K(1)) == K(1)  # paper: additive inverse of a is a
    assert negate(TT(5)) == TT(5)
    assert negate(TRI(F(7, 3))) == TRI(F(7, 3))
    assert negate(P(F(1, 4))) == P(F(3, 4))  # oracle: antipodal angle
    assert negate(TC(3, F(1, 8))) == TC(3, F(5, 8))
    assert negate(zero(HF.TR)) == zero(HF.TR)


def test_negate_is_involution_on_samples():
    for f in HF:
        for x in default_samples(f) if f not in (HF.R, HF.C) else [one(f)]:
            assert negate(negate(x)) == x


# ---------------------------------------------------------------------------
# folds


def test_fold_single_term():
    for f in (HF.S, HF.TR, HF.P, HF.TC):
        x = one(f)
        assert fold_hypersum([x]) == singleton(x)


def test_fold_sign_three_terms():
    # oracle: brute-force union over both fold orders
    got = fold_hypersum([S(1), S(-1), S(1)])
    both = {
        w
        for u in probes_of(hypersum(S(1), S(-1)))
        for w in probes_of(hypersum(u, S(1)))
    }
    assert got == SetValue.make(HF.S, points=[S(1), S(-1)], includes_zero=True)
    assert all(got.contains(w) for w in both)


def test_fold_tr_against_pointwise_oracle():
    # oracle: pointwise union over rational samples of [-3,3] (+) 2
    terms = [TR(3), TR(-3), TR(2)]
    got = fold_hypersum(terms)
    step1 = hypersum(TR(3), TR(-3))
    members = set()
    for num in range(-36, 37):
        u = F(num, 12)
        if u != 0 and step1.contains(TR(u)):
            s = hypersum(TR(u), TR(2))
            for w in [TR(F(num2, 12)) for num2 in range(-40, 41) if num2 != 0]:
                if s.contains(w):
                    members.add(w.value)
    assert got.includes_zero  # -2 in [-3,3] cancels the 2
    for v in members:
        assert got.contains(TR(v))
    # the dominant tail |u| > 2 of [-3,3] survives, so the fold is [-3,3]
    assert got.intervals == ((F(-3), F(3)),)
    # fold-order independence backs that value
    for perm in itertools.permutations(terms):
        assert fold_hypersum(list(perm)) == got


def test_fold_order_and_parenthesization_invariance():
    cases = {
        HF.S: [S(1), S(-1), S(1), S(-1)],
        HF.K: [K(1), K(1), K(1)],
        HF.TR: [TR(2), TR(-2), TR(F(1, 2)), TR(1)],
        HF.TTRIANGLE: [TT(1), TT(1), TT(F(1, 2))],
        HF.TRIANGLE: [TRI(1), TRI(2), TRI(4)],
        HF.P: [P(F(0)), P(F(1, 3)), P(F(1, 2)), P(F(5, 6))],
        HF.PHI: [PHI(F(0)), PHI(F(1, 3)), PHI(F(2, 3))],
        HF.TC: [TC(1, 0), TC(1, F(1, 3)), TC(2, F(2, 3)), TC(2, F(1, 6))],
    }
    for f, terms in cases.items():
        vals = {fold_hypersum(list(p)) for p in itertools.permutations(terms)}
        assert len(vals) == 1, f
        got = vals.pop()
        # nested grouping: fold the first pair, recombine on probes
        alt = hypersum(terms[0], terms[1])
        for u in probes_of(alt):
            rest = fold_hypersum([u] + list(terms[2:]))
            for w in probes_of(rest):
                assert got.contains(w)


# ---------------------------------------------------------------------------
# fold membership cross-validation (dense-sample oracle, per design decision)


def _dense_members(sv, denom=48):
    """Exact members of a set value on a fine rational grid."""
    f = sv.field
    out = list(sv.points)
    if sv.includes_zero:
        out.append(zero(f))
    for lo, hi in sv.intervals:
        span = hi - lo
        for k in range(denom + 1):
            v = lo + span * F(k, denom)
            if v != 0:
                out.append(element(f, v))
    angles = [F(k, denom) for k in range(denom)]
    for arc in sv.arcs:
        for th in angles:
            if arc.contains_angle(th):
                out.append(_polar(f, arc.modulus, th))
        for endpoint in (arc.start, (arc.start + arc.length) % 1):
            cand = _polar(f, arc.modulus, endpoint)
            if sv.contains(cand):
                out.append(cand)
    for m in sv.circles:
        out.extend(_polar(f, m, th) for th in angles)
    if sv.disk is not None:
        for m in (sv.disk, sv.disk / 2, sv.disk / 3):
            out.extend(_polar(f, m, th) for th in angles)
    return out


def _polar(f, m, th):
    if f in (HF.P, HF.PHI):
        return element(f, th)
    return element(f, (m, th))


@pytest.mark.parametrize("field", [HF.P, HF.PHI, HF.TC, HF.TR, HF.TTRIANGLE, HF.TRIANGLE])
def test_fold_matches_dense_sample_oracle(field):
    rng = random.Random(20240229)
    angles = [F(k, 12) for k in range(12)]
    mods = [F(1, 2), F(1), F(2)]

    def rand_el():
        if rng.random() < 0.12:
            return zero(field)
        if field in (HF.P, HF.PHI):
            return element(field, rng.choice(angles))
        if field is HF.TC:
            return element(field, (rng.choice(mods), rng.choice(angles)))
        v = rng.choice(mods)
        if field is HF.TR and rng.random() < 0.5:
            v = -v
        return element(field, v)

    for _ in range(120):
        terms = [rand_el() for _ in range(3)]
        if all(t.is_zero for t in terms):
            continue
        full = fold_hypersum(terms)
        part = fold_hypersum(terms[:2])
        t = terms[2]
        # soundness: every dense member of part (+) t lies in the fold
        for u in _dense_members(part):
            for w in _dense_members(hypersum(u, t)):
                assert full.contains(w), (terms, u, w, full)
        # completeness: every dense member of the fold is reached from part
        # (the hitter grid is strictly finer than the probe grid so that
        # open-arc members a half-step from the boundary get witnessed)
        hitters = _dense_members(part, denom=96)
        if part.contains(negate(t)):
            hitters.append(negate(t))
        for w in _dense_members(full):
            assert any(hypersum(u, t).contains(w) for u in hitters), (terms, w, full, part)
        # reversibility restated: w in fold(terms) iff 0 in fold(terms + [-w])
        for w in _dense_members(full)[:6]:
            assert contains_zero(terms + [negate(w)])


# ---------------------------------------------------------------------------
# contains_zero


def test_contains_zero_examples():
    assert contains_zero([S(1), S(-1)])
    assert not contains_zero([S(1)])
    assert contains_zero([K(1), K(1), K(1)])  # fold = {0,1}
    assert not contains_zero([K(1)])
    assert contains_zero([zero(HF.TR)])


def test_contains_zero_agrees_with_fold_membership():
    rng = random.Random(99)
    pools = {
        HF.S: [S(v) for v in (-1, 0, 1)],
        HF.K: [K(v) for v in (0, 1)],
        HF.TR: [TR(v) for v in (-2, -1, 0, F(1, 2), 1, 2)],
        HF.TTRIANGLE: [TT(v) for v in (0, F(1, 2), 1, 2)],
        HF.TRIANGLE: [TRI(v) for v in (0, 1, 2, 3)],
        HF.P: [zero(HF.P)] + [P(F(k, 6)) for k in range(6)],
        HF.PHI: [zero(HF.PHI)] + [PHI(F(k, 6)) for k in range(6)],
        HF.TC: [zero(HF.TC)] + [TC(m, F(k, 4)) for m in (1, 2) for k in range(4)],
    }
    for f, pool in pools.items():
        for _ in range(150):
            terms = [rng.choice(pool) for _ in range(rng.randint(1, 4))]
            assert contains_zero(terms) == fold_hypersum(terms).includes_zero, (f, terms)


# ---------------------------------------------------------------------------
# axioms


def test_axioms_sign_exhaustive():
    rep = verify_hyperfield_axioms(HF.S)
    assert rep.passed and rep.doubly_distributive is True


def test_axioms_krasner_exhaustive():
    rep = verify_hyperfield_axioms(HF.K)
    assert rep.passed and rep.doubly_distributive is True


def test_axioms_tr_samples_doubly_distributive():
    rep = verify_hyperfield_axioms(
        HF.TR, [zero(HF.TR)] + [TR(v) for v in (1, -1, 2, -2, F(1, 2), -F(1, 2))]
    )
    assert rep.passed and rep.doubly_distributive is True


@pytest.mark.parametrize("field", [HF.TTRIANGLE])
def test_axioms_tt_doubly_distributive(field):
    rep = verify_hyperfield_axioms(field)
    assert rep.passed and rep.doubly_distributive is True


@pytest.mark.parametrize("field", [HF.TRIANGLE, HF.P, HF.PHI, HF.TC])
def test_axioms_pass_and_dd_witness_found(field):
    rep = verify_hyperfield_axioms(field)
    assert rep.passed
    assert rep.doubly_distributive is False and rep.dd_witness


def test_dd_triangle_witness_concrete():
    # (1+2).(1+2) = [1,3].[1,3] = [1,9] but the 4-term fold reaches 0
    lhs = set_product(hypersum(TRI(1), TRI(2)), hypersum(TRI(1), TRI(2)))
    rhs = fold_hypersum([TRI(1), TRI(2), TRI(2), TRI(4)])
    assert lhs != rhs
    assert rhs.includes_zero and not lhs.includes_zero


def test_reversibility_probe_sweep():
    for f in (HF.S, HF.K, HF.TR, HF.TRIANGLE, HF.TTRIANGLE, HF.P, HF.PHI, HF.TC):
        for y, z in itertools.product(default_samples(f), repeat=2):
            s = hypersum(y, z)
            for x in probes_of(s):
                assert hypersum(x, negate(y)).contains(z)


def test_distributivity_exact_on_samples():
    for f in (HF.S, HF.K, HF.TR, HF.TRIANGLE, HF.TTRIANGLE, HF.P, HF.PHI, HF.TC):
        samples = default_samples(f)
        for x in samples:
            if x.is_zero:
                continue
            for y, z in itertools.combinations(samples, 2):
                assert scale_set(x, hypersum(y, z)) == hypersum(
                    product(x, y), product(x, z)
                )


# ---------------------------------------------------------------------------
# quotients


def test_quotient_complex_by_circle_is_triangle():
    target, h = quotient(HF.C, Subgroup.UNIT_CIRCLE)
    assert target is HF.TRIANGLE
    assert h(element(HF.C, (F(3, 2), F(1, 4)))) == TRI(F(3, 2))


def test_quotient_tr_by_positives_is_sign():
    target, h = quotient(HF.TR, Subgroup.POSITIVE_REALS)
    assert target is HF.S
    assert h(TR(F(-7, 2))) == S(-1)


def test_quotient_trivial_subgroup_is_identity():
    target, h = quotient(HF.K, Subgroup.TRIVIAL)
    assert target is HF.K
    assert h(K(1)) == K(1) and h(K(0)) == K(0)


def test_quotient_unregistered_pair_errors():
    with pytest.raises(ValueError):
        quotient(HF.R, Subgroup.SIGNS)


# ---------------------------------------------------------------------------
# literals, canonical form, serialization


def test_literal_roundtrip():
    texts = ["S:+", "S:-", "S:0", "K:0", "K:1", "TR:-3/2", "TT:5", "TRI:7/3",
             "P:0", "P:@1/3", "PHI:@5/6", "TC:0", "TC:3/2@1/4", "R:5/2", "C:2@1/2"]
    for t in texts:
        el = parse_element(t)
        assert parse_element(format_element(el)) == el


def test_canonical_merges_touching_arcs_through_a_point():
    # (3/4,1) + point at 0 + (0,1/4) merge into one open arc through 0
    sv = SetValue.make(
        HF.P,
        points=[P(F(0))],
        arcs=[Arc(F(1), F(3, 4), F(1, 4), False, False),
              Arc(F(1), F(0), F(1, 4), False, False)],
    )
    assert len(sv.arcs) == 1 and not sv.points
    arc = sv.arcs[0]
    assert arc.start == F(3, 4) and arc.length == F(1, 2)


def test_canonical_interval_merge_and_point_absorption():
    sv = SetValue.make(
        HF.TR,
        points=[TR(2), TR(10)],
        intervals=[(F(1), F(3)), (F(3), F(5))],
    )
    assert sv.intervals == ((F(1), F(5)),)
    assert sv.points == (TR(10),)


def test_set_value_commutativity_is_syntactic():
    for f in (HF.S, HF.TR, HF.P, HF.PHI, HF.TC, HF.TRIANGLE, HF.TTRIANGLE, HF.K):
        for x, y in itertools.combinations(default_samples(f), 2):
            assert hypersum(x, y) == hypersum(y, x)


def test_set_json_part_names():
    sv = hypersum(TC(2, 0), TC(2, F(1, 2)))
    doc = set_to_json(sv)
    assert doc["includesZero"] is True
    assert {p["kind"] for p in doc["parts"]} == {"disk"}
    sv2 = hypersum(P(F(0)), P(F(1, 3)))
    doc2 = set_to_json(sv2)
    assert doc2["parts"][0]["kind"] == "arc"
    assert doc2["parts"][0]["closedness"] == "open"


def test_inverse_and_normalforms():
    assert product(TC(2, F(1, 3)), inverse(TC(2, F(1, 3)))) == one(HF.TC)
    assert product(TR(F(-3)), inverse(TR(F(-3)))) == one(HF.TR)
