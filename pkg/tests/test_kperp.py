import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from picardcone import certificates
from picardcone.cremona import CKWord, Quadratic
from picardcone.kperp import (
    InvalidDirection,
    NefCertificate,
    NegativeDegreeSample,
    NonNefWitness,
    count_orthogonal_translates,
    nefness_test,
    on_qperp,
    orthogonal_translate_curves,
    phi_10,
    random_kperp_direction,
    reduced_claim_gap,
    sample_nef_class,
    sample_qperp,
    sample_rational_point,
    theorem1_check,
    verify_nef_certificate,
    verify_non_nef_witness,
)
from picardcone.lattice import anticanonical_nine, hyperplane, intersect, to_ray
from picardcone.negcurves import orthogonal_minus_one_classes


def test_base_point_certificate():
    cert = nefness_test(anticanonical_nine(10))
    assert isinstance(cert, NefCertificate)
    assert cert.word == CKWord() and cert.multiple == 1 and cert.support == tuple(range(1, 10))


def test_rejects_off_cone():
    with pytest.raises(ValueError):
        nefness_test(hyperplane(10))


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(10, 16))
def test_samples_lie_on_cone(seed, s):
    q = sample_qperp(s, random.Random(seed))
    assert on_qperp(q.cls.rep) and q.cls.rep.d > 0


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_sample_depends_on_line_only(seed):
    rng = random.Random(seed)
    v = random_kperp_direction(11, rng)
    try:
        a = sample_rational_point(11, v)
    except (InvalidDirection, NegativeDegreeSample):
        return
    assert sample_rational_point(11, Fraction(-7, 3) * v).cls == a.cls


def test_direction_errors():
    with pytest.raises(InvalidDirection):
        sample_rational_point(10, hyperplane(10))  # K.H != 0
    with pytest.raises(InvalidDirection):
        sample_rational_point(10, 2 * anticanonical_nine(10))
    with pytest.raises(ValueError):
        sample_rational_point(9, anticanonical_nine(9))


def test_every_rational_point_is_reached():
    # the direction P - P0 recovers P itself
    rng = random.Random(3)
    for _ in range(20):
        P = sample_nef_class(10, rng).rep
        if P == anticanonical_nine(10):
            continue
        assert sample_rational_point(10, P - anticanonical_nine(10)).cls == to_ray(P)


@settings(max_examples=60)
@given(st.integers(0, 2**32))
def test_s10_always_nef_with_unique_orthogonal_curve(seed):
    L = sample_qperp(10, random.Random(seed)).cls
    cert = nefness_test(L)
    assert isinstance(cert, NefCertificate)
    verify_nef_certificate(cert)
    curve = phi_10(L)
    assert intersect(curve.rep, L.rep) == 0
    assert orthogonal_minus_one_classes(L.rep, 6) == ([curve] if curve.rep.d <= 6 else [])


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(11, 14))
def test_nef_translates_have_s_minus_9_disjoint_curves(seed, s):
    L = sample_nef_class(s, random.Random(seed))
    curves = orthogonal_translate_curves(L)
    assert len(curves) == s - 9 == count_orthogonal_translates(L)


def test_non_nef_fixture_replays():
    obj = json.loads((FIXTURES / "non_nef_s11.json").read_text())
    w = certificates.non_nef_from_json(obj)
    verify_non_nef_witness(w)
    again = nefness_test(w.cls)
    assert isinstance(again, NonNefWitness) and again == w
    rep = theorem1_check(w.cls)
    assert rep.agree and not rep.nef and not rep.disjoint_curves


def test_tampered_witness_fails():
    w = certificates.non_nef_from_json(json.loads((FIXTURES / "non_nef_s11.json").read_text()))
    bad = NonNefWitness(w.cls, w.curve, w.value - 1, w.word, w.index)
    with pytest.raises(ValueError):
        verify_non_nef_witness(bad)


def test_tampered_certificate_fails():
    cert = nefness_test(sample_nef_class(12, random.Random(5)))
    bad = NefCertificate(cert.cls, cert.word + CKWord((Quadratic(1, 2, 3),)), cert.multiple, cert.support)
    with pytest.raises(ValueError):
        verify_nef_certificate(bad)


@pytest.mark.parametrize("s", range(10, 15))
def test_theorem1_agreement(s):
    rng = random.Random(s)
    for n in range(20):
        L = sample_qperp(s, rng).cls if n % 2 else sample_nef_class(s, rng)
        rep = theorem1_check(L)
        assert rep.agree
        if rep.nef:
            assert rep.min_pairing >= 0 and len(rep.curves) == s - 10


def test_theorem1_needs_ten_points():
    with pytest.raises(ValueError):
        theorem1_check(anticanonical_nine(9))


@settings(max_examples=300)
@given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 40), st.data())
def test_reduced_claim_inequality(a1, a2, a3, data):
    m1, m2, m3 = sorted((a1, a2, a3), reverse=True)
    a = data.draw(st.fractions(0, m3) if m3 else st.just(Fraction(0)))
    gap = reduced_claim_gap(Fraction(m1), Fraction(m2), Fraction(m3), a)
    assert gap >= 0
    assert (gap == 0) == (m2 == m3 == a)
    assert gap == 2 * ((m1 - a) * (m2 - a) + (m1 - a) * (m3 - a) + (m2 - a) * (m3 - a))


def test_reduced_claim_equality_beyond_all_equal():
    # equality without m1 = m2 = m3
    assert reduced_claim_gap(Fraction(1), Fraction(0), Fraction(0), Fraction(0)) == 0
    assert reduced_claim_gap(Fraction(5), Fraction(2), Fraction(2), Fraction(2)) == 0
