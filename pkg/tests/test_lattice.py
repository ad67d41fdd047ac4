from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import de_fernex_sign_float, numpy_inertia
from picardcone.lattice import (
    ClassVector,
    Ray,
    Sign,
    anticanonical_nine,
    canonical_class,
    class_from_json,
    class_to_json,
    de_fernex_sign,
    exceptional,
    gram_matrix,
    hyperplane,
    intersect,
    k_pairing,
    kperp_basis,
    kperp_signature,
    parse_class,
    plane_class,
    pullback,
    to_ray,
)


def vectors(s, lo=-30, hi=30):
    return st.lists(st.integers(lo, hi), min_size=s + 1, max_size=s + 1).map(ClassVector.from_coords)


def test_basis_pairings():
    s = 5
    H = hyperplane(s)
    assert intersect(H, H) == 1
    for i in range(1, s + 1):
        assert intersect(exceptional(i, s), exceptional(i, s)) == -1
        assert intersect(H, exceptional(i, s)) == 0
        assert k_pairing(exceptional(i, s)) == -1
    assert intersect(exceptional(1, s), exceptional(2, s)) == 0
    assert k_pairing(H) == -3


def test_canonical_class():
    for s in range(1, 15):
        K = canonical_class(s)
        assert intersect(K, K) == 9 - s
        assert k_pairing(K) == intersect(K, K)


def test_parse_and_print():
    L = parse_class("L6(2^8,0,1^4)")
    assert L.s == 13 and L.d == 6
    assert L.m == (2,) * 8 + (0,) + (1,) * 4
    assert str(L) == "L6(2,2,2,2,2,2,2,2,0,1,1,1,1)"
    assert parse_class(str(L)) == L
    assert parse_class("L3(1/3^2,0)").m == (Fraction(1, 3), Fraction(1, 3), 0)
    assert plane_class(3, (1, 9), 0) == anticanonical_nine(10)
    with pytest.raises(ValueError):
        parse_class("M3(1)")
    with pytest.raises(ValueError):
        parse_class("L3(1,x)")


def test_k13_fixture():
    assert k_pairing(parse_class("L6(1^4,2^8,0)")) == 2


def test_pairing_example():
    assert intersect(exceptional(1, 10), parse_class("L1(1,1,0^8)")) == 1


def test_rejects_floats_and_bad_sizes():
    with pytest.raises(TypeError):
        ClassVector(2, 1.0, (0, 0))
    with pytest.raises(TypeError):
        ClassVector(2, True, (0, 0))
    with pytest.raises(ValueError):
        ClassVector(3, 1, (0, 0))
    with pytest.raises(ValueError):
        intersect(hyperplane(2), hyperplane(3))


@given(vectors(6), vectors(6), vectors(6), st.integers(-5, 5))
def test_form_is_symmetric_bilinear(a, b, c, t):
    assert intersect(a, b) == intersect(b, a)
    assert intersect(a + t * b, c) == intersect(a, c) + t * intersect(b, c)


@given(vectors(7))
def test_k_pairing_matches_canonical_class(a):
    assert k_pairing(a) == intersect(canonical_class(7), a)


@given(vectors(8).filter(lambda v: not v.is_zero()))
def test_ray_normalization(v):
    r = to_ray(v)
    assert to_ray(3 * v) == r
    assert to_ray(-v) == r or to_ray(-v).rep == -r.rep
    assert Ray(r.rep) == r


def test_ray_rejects_non_primitive():
    with pytest.raises(ValueError):
        Ray(ClassVector(2, 2, (2, 0)))
    with pytest.raises(ValueError):
        Ray(ClassVector(2, -1, (0, 0)))
    assert to_ray(exceptional(2, 3)).rep == exceptional(2, 3)
    with pytest.raises(ValueError):
        to_ray(ClassVector(2, 0, (0, 0)))


@given(st.integers(2, 20), st.integers(-50, 50), st.lists(st.integers(-60, 60), min_size=20, max_size=20))
def test_de_fernex_sign_against_float_oracle(s, d, m):
    L = ClassVector(s, d, tuple(m[:s]))
    assert int(de_fernex_sign(L)) == de_fernex_sign_float(d, m[:s])


def test_de_fernex_exact_zero():
    # s - 1 = 9: sqrt(9) d - sum m = 0 for d = 3, sum m = 9
    assert de_fernex_sign(anticanonical_nine(10)) is Sign.ZERO
    assert de_fernex_sign(ClassVector(10, -3, (-1,) * 9 + (0,))) is Sign.ZERO


@pytest.mark.parametrize("s,expected", [(8, (0, 8, 0)), (9, (0, 8, 1))] + [(s, (1, s - 1, 0)) for s in range(10, 21)])
def test_kperp_signature_table(s, expected):
    assert tuple(kperp_signature(s)) == expected


@pytest.mark.parametrize("s", [3, 8, 9, 12, 20])
def test_kperp_signature_oracle(s):
    basis = kperp_basis(s)
    assert len(basis) == s
    assert all(k_pairing(b) == 0 for b in basis)
    assert numpy_inertia(gram_matrix(basis)) == tuple(kperp_signature(s))


def test_json_round_trip():
    L = parse_class("L3(1/2,0,-4)")
    obj = class_to_json(L)
    assert obj == {"s": 3, "d": "3", "m": ["1/2", "0", "-4"]}
    assert class_from_json(obj) == L
    assert class_from_json({"s": 2, "d": 1, "m": [0, "1/3"]}).m[1] == Fraction(1, 3)
    with pytest.raises(ValueError):
        class_from_json({"s": 2, "d": 1.5, "m": [0, 0]})
    with pytest.raises(ValueError):
        class_from_json({"s": 2, "m": [0, 0]})


def test_pullback():
    L = pullback(anticanonical_nine(9), 12)
    assert L == anticanonical_nine(12)
    assert intersect(L, L) == 0 and k_pairing(L) == 0
    with pytest.raises(ValueError):
        pullback(L, 10)
