"""Uncollision of a point into r^2 points and good-ray certificates.

``uncollide(L, i, r)`` drops the i-th multiplicity m_i and appends r^2 slots of
multiplicity m_i / r. It is linear and injective, keeps L^2, and raises the
canonical pairing by (r^2 - r) * m_i / r.

Non-effectivity of an uncollided class is only ever justified by the single
h^0 fact available here: a Cremona translate of a positive multiple of
L_3(1^9, 0^(s-9)) has exactly one section. Classes outside that family are
rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from picardcone.kperp import NefCertificate, nefness_test, verify_nef_certificate
from picardcone.lattice import (
    ClassVector,
    Ray,
    Sign,
    de_fernex_sign,
    intersect,
    k_pairing,
    to_ray,
)

H0_JUSTIFICATION = "CK-orbit of multiple of L3(1^9,0^(s-9))"


def uncollide(L: ClassVector, i: int, r: int) -> ClassVector:
    """Class on s + r^2 - 1 points; the new slots are appended at the end."""
    if not 1 <= i <= L.s:
        raise ValueError(f"index {i} out of range 1..{L.s}")
    if r < 2:
        raise ValueError("uncollision needs r >= 2")
    mi = L.m[i - 1]
    m = L.m[: i - 1] + L.m[i:] + (mi / r,) * (r * r)
    return ClassVector(L.s + r * r - 1, L.d, m)


def collide(L: ClassVector, i: int, r: int) -> ClassVector:
    """Left inverse of :func:`uncollide` on its image."""
    s = L.s - r * r + 1
    if r < 2 or s < 1 or not 1 <= i <= s:
        raise ValueError(f"cannot undo an uncollision of r={r} at slot {i} from s={L.s}")
    tail = L.m[s - 1:]
    if any(x != tail[0] for x in tail):
        raise ValueError("the last r^2 multiplicities are not equal; not an uncollided class")
    rest = L.m[: s - 1]
    m = rest[: i - 1] + (r * tail[0],) + rest[i - 1:]
    return ClassVector(s, L.d, m)


def self_intersection_preserved(L: ClassVector, i: int, r: int) -> bool:
    u = uncollide(L, i, r)
    return intersect(L, L) == intersect(u, u)


def canonical_shift(L: ClassVector, i: int, r: int) -> Fraction:
    """K.Uncoll_r(L, i) - K.L, checked against (r^2 - r) * m_i / r."""
    shift = k_pairing(uncollide(L, i, r)) - k_pairing(L)
    expected = (r * r - r) * (L.m[i - 1] / r)
    if shift != expected:
        raise AssertionError(f"canonical shift {shift} != {expected}")
    return shift


@dataclass(frozen=True)
class GoodRayCertificate:
    ray: Ray
    source: Ray
    source_certificate: NefCertificate
    index: int
    factor: int
    scale: int
    lemma_branch: str
    m: int
    h0_bound: int = 1
    h0_justification: str = H0_JUSTIFICATION

    @property
    def k_pairing(self) -> Fraction:
        return k_pairing(self.ray.rep)

    @property
    def de_fernex(self) -> Sign:
        return de_fernex_sign(self.ray.rep)


def certify_good_ray(L: Union[ClassVector, Ray], i: int, r: int) -> GoodRayCertificate:
    """Certify that <Uncoll_r(L, i)> is good for a nef class L on the quadric cone.

    The source is rescaled by ``scale`` so that r divides its i-th multiplicity
    and m = scale * m_i / r is an integer. Branch (a) (r = 2) needs
    h^0 = 1 <= m; branch (b) (r >= 3) needs h^0 <= 1. Both hold for every
    positive multiple, so the whole ray is non-effective.
    """
    if r < 2:
        raise ValueError("uncollision needs r >= 2")
    outcome = nefness_test(L)
    if not isinstance(outcome, NefCertificate):
        raise ValueError(f"{outcome.cls} is not nef (meets {outcome.curve} with {outcome.value})")
    source = outcome.cls
    if not 1 <= i <= source.s:
        raise ValueError(f"index {i} out of range 1..{source.s}")
    mi = int(source.rep.m[i - 1])
    if mi == 0:
        raise ValueError(f"multiplicity at slot {i} is zero; nothing to uncollide")
    scale = r // gcd(r, mi)
    m = scale * mi // r
    branch = "a" if r == 2 else "b"
    if branch == "a" and not 1 <= m:
        raise RuntimeError(f"branch (a) bound fails: h0 = 1 > m = {m}")
    image = uncollide(source.rep * scale, i, r)
    ray = to_ray(image)
    if intersect(ray.rep, ray.rep) != 0 or ray.rep.d <= 0:
        raise RuntimeError(f"uncollided ray {ray} is not a degree-positive square-zero ray")
    return GoodRayCertificate(ray, source, outcome, i, r, scale, branch, m)


def verify_good_ray_certificate(cert: GoodRayCertificate) -> None:
    """Replay a certificate from scratch; raises ValueError on any mismatch."""
    verify_nef_certificate(cert.source_certificate)
    if cert.source_certificate.cls != cert.source:
        raise ValueError("nef certificate is for a different source ray")
    again = certify_good_ray(cert.source, cert.index, cert.factor)
    if again != cert:
        raise ValueError("recomputed certificate differs from the recorded one")
    rep = cert.ray.rep
    if intersect(rep, rep) != 0 or rep.d <= 0:
        raise ValueError("ray is not degree-positive with self-intersection zero")
    if cert.lemma_branch != ("a" if cert.factor == 2 else "b"):
        raise ValueError("lemma branch does not match the uncollision factor")
    shift = canonical_shift(cert.source.rep * cert.scale, cert.index, cert.factor)
    if shift <= 0:
        raise ValueError("uncollision is not K-positive")
