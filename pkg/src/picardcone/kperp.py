"""The quadric cone of classes with L^2 = K.L = 0 and non-negative degree.

Holds the certified nefness test (reduce by Cremona moves; either reach a
multiple of L_3(1^9, 0^(s-9)) or pull back a (-1)-class that meets L
negatively), rational sampling by stereographic projection, the s = 10
correspondence with (-1)-curves and the three-way equivalence harness.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from picardcone import linalg
from picardcone.cremona import (
    CKWord,
    Permutation,
    Status,
    apply_word,
    cremona_reduce,
    invert,
    random_word,
)
from picardcone.lattice import (
    ClassVector,
    Ray,
    anticanonical_nine,
    canonical_class,
    exceptional,
    intersect,
    k_pairing,
    pullback,
    to_ray,
)
from picardcone.negcurves import (
    NegCurveClass,
    are_pairwise_disjoint,
    find_disjoint_subset,
    is_minus_one_class,
    min_pairing_with_minus_one_classes,
    orthogonal_minus_one_classes,
)

log = logging.getLogger(__name__)


class InvalidDirection(ValueError):
    pass


class NegativeDegreeSample(ValueError):
    """The second intersection point has negative degree; draw another direction."""


class Theorem1Violation(RuntimeError):
    pass


def on_qperp(L: ClassVector) -> bool:
    return intersect(L, L) == 0 and k_pairing(L) == 0 and L.d >= 0


@dataclass(frozen=True)
class QperpSample:
    cls: Ray
    parameter: ClassVector

    def __post_init__(self):
        if not on_qperp(self.cls.rep):
            raise ValueError(f"{self.cls} is not on the quadric cone")


def _proportional(a: ClassVector, b: ClassVector) -> bool:
    return linalg.rank([a.coords, b.coords]) < 2


def second_intersection(base: ClassVector, v: ClassVector) -> ClassVector:
    """Other point where the line base + t v meets {L^2 = 0}; base must lie on it."""
    vv = intersect(v, v)
    if vv == 0:
        raise InvalidDirection("direction is isotropic")
    t = -2 * intersect(base, v) / vv
    return base + t * v


def sample_rational_point(s: int, v: ClassVector, base: ClassVector | None = None) -> QperpSample:
    """Stereographic parametrization of the quadric cone through ``base``.

    ``base`` defaults to L_3(1^9, 0^(s-9)). The result depends only on the line
    spanned by ``v``.
    """
    if s < 10:
        raise ValueError("the quadric cone is a single ray for s <= 9")
    if v.s != s:
        raise InvalidDirection(f"direction lives on s={v.s}, expected {s}")
    base = anticanonical_nine(s) if base is None else base
    if not on_qperp(base):
        raise ValueError("base point must lie on the quadric cone")
    if k_pairing(v) != 0:
        raise InvalidDirection("direction is not orthogonal to K")
    if intersect(v, v) == 0:
        raise InvalidDirection("direction is isotropic")
    if _proportional(v, base):
        raise InvalidDirection("direction is proportional to the base point")
    point = second_intersection(base, v)
    if point.d < 0:
        raise NegativeDegreeSample(f"sample {point} has negative degree")
    return QperpSample(to_ray(point), v)


def random_kperp_direction(s: int, rng: random.Random, bound: int = 20) -> ClassVector:
    """Integral vector of K^perp: a uniform integer vector projected along K."""
    k = canonical_class(s)
    kk = intersect(k, k)
    w = ClassVector.from_coords([rng.randint(-bound, bound) for _ in range(s + 1)])
    return kk * w - intersect(w, k) * k


def sample_qperp(s: int, rng: random.Random, bound: int = 20, max_tries: int = 10_000) -> QperpSample:
    for _ in range(max_tries):
        v = random_kperp_direction(s, rng, bound)
        try:
            return sample_rational_point(s, v)
        except (InvalidDirection, NegativeDegreeSample):
            continue
    raise RuntimeError(f"no admissible direction in {max_tries} draws")


def sample_nef_class(s: int, rng: random.Random, bound: int = 20, max_word: int = 20) -> Ray:
    """A random Cremona translate of the pullback of a point of the s = 10 cone."""
    if s < 10:
        raise ValueError("needs s >= 10")
    base = pullback(sample_qperp(10, rng, bound).cls.rep, s)
    w = random_word(s, rng, rng.randint(0, max_word))
    return to_ray(apply_word(w, base))


@dataclass(frozen=True)
class NefCertificate:
    """``word`` maps ``cls`` to ``multiple`` times L_3 with unit slots ``support``."""

    cls: Ray
    word: CKWord
    multiple: Fraction
    support: tuple[int, ...]


@dataclass(frozen=True)
class NonNefWitness:
    """A (-1)-class ``curve`` = word^-1(E_index) with curve . cls = value < 0."""

    cls: Ray
    curve: NegCurveClass
    value: Fraction
    word: CKWord
    index: int


NefOutcome = Union[NefCertificate, NonNefWitness]


def _nine_point_form(L: ClassVector) -> tuple[Fraction, tuple[int, ...]] | None:
    """(a, support) when L = a * L_3 on nine slots and zero elsewhere."""
    support = tuple(i + 1 for i, x in enumerate(L.m) if x != 0)
    if len(support) != 9:
        return None
    a = L.m[support[0] - 1]
    if a <= 0 or any(L.m[i - 1] != a for i in support) or L.d != 3 * a:
        return None
    return a, support


def verify_nef_certificate(cert: NefCertificate) -> None:
    image = apply_word(cert.word, cert.cls.rep)
    form = _nine_point_form(image)
    if form is None or form != (cert.multiple, cert.support):
        raise ValueError(f"certificate word maps {cert.cls} to {image}, not the recorded form")


def verify_non_nef_witness(w: NonNefWitness) -> None:
    if not is_minus_one_class(w.curve.rep):
        raise ValueError("witness curve is not a (-1)-class")
    value = intersect(w.curve.rep, w.cls.rep)
    if value != w.value or value >= 0:
        raise ValueError(f"witness pairing {value} does not match a negative recorded value")
    if apply_word(invert(w.word), exceptional(w.index, w.cls.s)) != w.curve.rep:
        raise ValueError("witness curve is not the pullback of the recorded E_i")


def nefness_test(L: Union[ClassVector, Ray]) -> NefOutcome:
    """Decide nefness of a class on the quadric cone, with a replayable outcome."""
    ray = L if isinstance(L, Ray) else to_ray(L)
    rep = ray.rep
    if not on_qperp(rep):
        raise ValueError(f"{rep} is not on the quadric cone")
    if rep.s < 9:
        raise ValueError("the quadric cone is trivial for s < 9")
    res = cremona_reduce(rep)
    if res.status is Status.REDUCED:
        form = _nine_point_form(res.final)
        if form is None:
            raise RuntimeError(f"reduced class {res.final} on the quadric is not a multiple of L_3(1^9)")
        return NefCertificate(ray, res.word, form[0], form[1])
    neg = [i + 1 for i, x in enumerate(res.final.m) if x < 0]
    if not neg:
        # negative degree with 3d = sum(m) always forces a negative multiplicity
        raise RuntimeError(f"reduction stopped at {res.final} without a negative multiplicity")
    i = neg[0]
    curve = apply_word(invert(res.word), exceptional(i, rep.s))
    value = intersect(curve, rep)
    assert value == res.final.m[i - 1] < 0
    return NonNefWitness(ray, NegCurveClass(to_ray(curve)), value, res.word, i)


def _certified(L) -> NefCertificate:
    out = nefness_test(L)
    if not isinstance(out, NefCertificate):
        raise ValueError(f"{out.cls} is not nef: meets {out.curve} with {out.value}")
    return out


def phi_10(L: Union[ClassVector, Ray]) -> NegCurveClass:
    """The unique (-1)-class orthogonal to a class of the s = 10 cone."""
    cert = _certified(L)
    if cert.cls.s != 10:
        raise ValueError("phi_10 is defined for s = 10 only")
    zero = next(i for i in range(1, 11) if i not in cert.support)
    word = cert.word
    if zero != 10:
        word = word + CKWord((Permutation.swap(zero, 10, 10),))
    curve = apply_word(invert(word), exceptional(10, 10))
    return NegCurveClass(to_ray(curve))


def orthogonal_translate_curves(L: Union[ClassVector, Ray]) -> list[NegCurveClass]:
    """The s - 9 classes word^-1(E_j), j outside the nine-point support."""
    cert = _certified(L)
    s = cert.cls.s
    inv = invert(cert.word)
    curves = [
        NegCurveClass(to_ray(apply_word(inv, exceptional(j, s))))
        for j in range(1, s + 1)
        if j not in cert.support
    ]
    for c in curves:
        if intersect(c.rep, cert.cls.rep) != 0:
            raise RuntimeError(f"{c} is not orthogonal to {cert.cls}")
    if not are_pairwise_disjoint(curves):
        raise RuntimeError(f"orthogonal curves of {cert.cls} are not disjoint")
    return curves


def count_orthogonal_translates(L: Union[ClassVector, Ray]) -> int:
    return len(orthogonal_translate_curves(L))


@dataclass
class Theorem1Report:
    ray: Ray
    nef: bool
    disjoint_curves: bool
    cremona_equivalent: bool
    outcome: NefOutcome
    curves: list[NegCurveClass] = field(default_factory=list)
    curves_method: str = "certificate"
    search_bound: int | None = None
    min_pairing: Fraction | None = None

    @property
    def agree(self) -> bool:
        return self.nef == self.disjoint_curves == self.cremona_equivalent


def theorem1_check(L: Union[ClassVector, Ray], max_degree: int = 8) -> Theorem1Report:
    """Evaluate nefness, the disjoint-curves condition and Cremona equivalence.

    Raises :class:`Theorem1Violation` when they disagree. When L is not nef the
    curve condition comes from a search bounded by ``max_degree``, so a
    negative answer there means "none found up to that degree".
    """
    ray = L if isinstance(L, Ray) else to_ray(L)
    s = ray.s
    if s < 10:
        raise ValueError("needs s >= 10")
    outcome = nefness_test(ray)

    # nefness: no (-1)-class meets L negatively. A witness settles "no"; for a
    # certificate, the bounded minimum over all (-1)-classes is cross-checked.
    if isinstance(outcome, NonNefWitness):
        nef = False
        min_pair = outcome.value
    else:
        min_pair, _ = min_pairing_with_minus_one_classes(ray.rep, max_degree)
        nef = min_pair >= 0

    # Cremona equivalence to a multiple of L_3(1^9, 0^(s-9)): replay the word
    cremona_equivalent = False
    if isinstance(outcome, NefCertificate):
        try:
            verify_nef_certificate(outcome)
            cremona_equivalent = True
        except ValueError:
            cremona_equivalent = False

    if isinstance(outcome, NefCertificate):
        curves = orthogonal_translate_curves(ray)[: s - 10]
        method, bound = "certificate", None
    else:
        candidates = orthogonal_minus_one_classes(ray.rep, max_degree)
        curves = find_disjoint_subset(candidates, s - 10) or []
        method, bound = "bounded-search", max_degree
    # on ten points the empty family qualifies
    disjoint = (len(curves) == s - 10 and are_pairwise_disjoint(curves)
                and all(intersect(c.rep, ray.rep) == 0 for c in curves))

    report = Theorem1Report(ray, nef, disjoint, cremona_equivalent, outcome, curves, method, bound, min_pair)
    if not report.agree:
        raise Theorem1Violation(
            f"{ray}: nef={nef}, disjoint curves={disjoint}, Cremona equivalent={cremona_equivalent}"
        )
    return report


def reduced_claim_gap(m1: Fraction, m2: Fraction, m3: Fraction, a: Fraction) -> Fraction:
    """(A^2 - 4aA + 6a^2) - (m1^2 + m2^2 + m3^2) with A = m1 + m2 + m3.

    Equal to 2 * sum over pairs of (m_i - a)(m_j - a), so it is non-negative
    when m1 >= m2 >= m3 >= a >= 0 and vanishes exactly when m2 = m3 = a.
    """
    big = m1 + m2 + m3
    return big * big - 4 * a * big + 6 * a * a - (m1 * m1 + m2 * m2 + m3 * m3)
