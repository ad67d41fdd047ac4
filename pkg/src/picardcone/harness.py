"""Constructive drivers: the 10-dimensional subspaces of good rays, their
K-positivity, de Fernex-negative good rays, and report files."""

from __future__ import annotations

import csv
import json
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from picardcone import certificates, linalg
from picardcone.cremona import CKWord, Permutation, apply_quadratic, apply_word, invert, random_word
from picardcone.kperp import (
    InvalidDirection,
    Theorem1Report,
    _certified,
    on_qperp,
    sample_nef_class,
    sample_qperp,
    second_intersection,
    theorem1_check,
)
from picardcone.lattice import (
    ClassVector,
    Ray,
    Sign,
    anticanonical_nine,
    canonical_class,
    class_from_json,
    class_to_json,
    decode_number,
    encode_number,
    exceptional,
    gram_matrix,
    intersect,
    k_pairing,
    subspace_signature,
    to_ray,
)
from picardcone.negcurves import NegCurveClass, are_pairwise_disjoint, is_minus_one_class
from picardcone.uncollision import GoodRayCertificate, certify_good_ray, collide, uncollide

log = logging.getLogger(__name__)


class ContractViolation(RuntimeError):
    """A computed object contradicts the statement it is meant to realize."""


class KPositivityError(ContractViolation):
    def __init__(self, message: str, record: "KPositivityProof | None" = None):
        super().__init__(message)
        self.record = record


def _functional_row(x: ClassVector) -> list[Fraction]:
    """Coefficients of D -> D . x in the coordinates (d, m_1, ..., m_s)."""
    return [x.d] + [-v for v in x.m]


@dataclass
class PiSubspace:
    s: int
    basis: list[ClassVector]
    source_basis: list[ClassVector]
    curves: list[NegCurveClass]
    index: int

    @property
    def s_source(self) -> int:
        return self.s - 3


def build_pi(s: int, curves: Sequence[NegCurveClass] | None = None, index: int = 1) -> PiSubspace:
    """Uncollide (r = 2, slot ``index``) the classes of X_{s-3} orthogonal to K
    and to s - 13 disjoint (-1)-classes (default E_11, ..., E_{s-3})."""
    sp = s - 3
    if sp < 10:
        raise ValueError("needs s >= 13")
    if curves is None:
        curves = [NegCurveClass(to_ray(exceptional(j, sp))) for j in range(11, sp + 1)]
    curves = list(curves)
    if len(curves) != sp - 10:
        raise ValueError(f"need {sp - 10} curves on {sp} points, got {len(curves)}")
    if any(c.cls.s != sp or not is_minus_one_class(c.rep) for c in curves):
        raise ValueError(f"curves must be (-1)-classes on {sp} points")
    if not are_pairwise_disjoint(curves):
        raise ValueError("curves are not pairwise disjoint")
    if not 1 <= index <= sp:
        raise ValueError(f"uncollision index {index} out of range 1..{sp}")
    rows = [_functional_row(canonical_class(sp))] + [_functional_row(c.rep) for c in curves]
    source = [ClassVector.from_coords(linalg.primitive_integral(v)) for v in linalg.nullspace(rows)]
    if len(source) != 10:
        raise ContractViolation(f"orthogonal complement has dimension {len(source)}, not 10")
    basis = [uncollide(b, index, 2) for b in source]
    if linalg.rank([b.coords for b in basis]) != 10:
        raise ContractViolation("uncollided basis does not have rank 10")
    return PiSubspace(s, basis, source, curves, index)


def curves_through_point(s: int, index: int = 1) -> list[NegCurveClass]:
    """Disjoint (-1)-classes on s - 3 points, one of them meeting E_index.

    The line through points ``index`` and ``index + 1`` (cyclically) plus the
    last s - 14 exceptional classes. With this choice the form on
    Pi cap K^perp is negative definite; the default E_11, ... leaves an
    isotropic ray there.
    """
    sp = s - 3
    if sp < 11:
        raise ValueError("needs s >= 14: on ten points there is no curve to choose")
    if not 1 <= index <= sp:
        raise ValueError(f"index {index} out of range 1..{sp}")
    other = index % sp + 1
    m = [0] * sp
    m[index - 1] = m[other - 1] = 1
    line = ClassVector(sp, 1, tuple(m))
    rest = [j for j in range(sp, 0, -1) if j not in (index, other)][: sp - 11]
    return [NegCurveClass(to_ray(line))] + [NegCurveClass(to_ray(exceptional(j, sp))) for j in sorted(rest)]


@dataclass
class KPositivityProof:
    """Exact record of the sign of K . L on the cone {L in Pi : L^2 >= 0, d >= 0}.

    ``radical`` is empty when the form on Pi cap K^perp is negative definite;
    otherwise it spans the one isotropic ray of that hyperplane, the only ray
    of the cone where K . L vanishes.
    """

    s: int
    pi_basis: list[ClassVector]
    kperp_basis: list[ClassVector]
    gram: list[list[Fraction]]
    minors: list[Fraction]
    negative_definite: bool
    kperp_inertia: tuple[int, int, int]
    radical: list[ClassVector]
    pi_signature: tuple[int, int, int]
    witness: ClassVector | None
    witness_k_pairing: Fraction
    steps: list[str] = field(default_factory=list)

    @property
    def strict(self) -> bool:
        """True when K . L > 0 holds on the whole punctured cone."""
        return self.negative_definite

    def to_json(self) -> dict:
        return {
            "kind": "kpositivity",
            "s": self.s,
            "pi_basis": [class_to_json(b) for b in self.pi_basis],
            "kperp_basis": [class_to_json(b) for b in self.kperp_basis],
            "gram": [[encode_number(x) for x in row] for row in self.gram],
            "minors": [encode_number(x) for x in self.minors],
            "negative_definite": self.negative_definite,
            "kperp_inertia": list(self.kperp_inertia),
            "radical": [class_to_json(r) for r in self.radical],
            "pi_signature": list(self.pi_signature),
            "witness": class_to_json(self.witness),
            "witness_k_pairing": encode_number(self.witness_k_pairing),
            "steps": list(self.steps),
        }


def _alternating(minors: Sequence[Fraction]) -> bool:
    return all((-1) ** k * x > 0 for k, x in enumerate(minors, start=1))


def _combine(coeffs: Sequence, basis: Sequence[ClassVector]) -> ClassVector:
    v = ClassVector(basis[0].s, 0, (0,) * basis[0].s)
    for c, b in zip(coeffs, basis):
        if c:
            v = v + c * b
    return v


def _integral(v: ClassVector) -> ClassVector:
    return ClassVector.from_coords(linalg.primitive_integral(v.coords))


def _span_witness(basis: Sequence[ClassVector]) -> ClassVector:
    """A primitive integral vector of positive square and degree in span(basis)."""
    diag, rows = linalg.congruence_diagonalize(gram_matrix(basis))
    for p, row in zip(diag, rows):
        if p > 0:
            v = _integral(_combine(row, basis))
            return v if v.d > 0 else -v
    raise ContractViolation("the subspace has no vector of positive square")


def kpositivity_proof(P: PiSubspace, witness: ClassVector | None = None) -> KPositivityProof:
    """Exact sign of K . L on {L in Pi : L^2 >= 0, H . L >= 0, L != 0}.

    If the form on Pi cap K^perp is negative definite, K . L vanishes nowhere
    on the punctured cone. If it is negative semidefinite with a one-dimensional
    radical R, K . L vanishes on the cone exactly along the ray of R (a point of
    positive square with K . L = 0 would contradict semidefiniteness). H^perp is
    negative definite, so the degree is nonzero off the origin and the cone
    splits into two convex halves by the sign of d; the degree-positive half
    minus a ray is still connected (dimension 10), so K . L has one sign there,
    fixed by a witness. Any other inertia raises :class:`KPositivityError`.
    """
    k = canonical_class(P.s)
    kernel = linalg.nullspace([[intersect(k, b) for b in P.basis]])
    kperp = [_integral(_combine(c, P.basis)) for c in kernel]
    gram = gram_matrix(kperp)
    minors = linalg.leading_minors(gram)
    nd = len(kperp) == 9 and _alternating(minors)
    inertia = linalg.inertia(gram)
    radical = [_integral(_combine(c, kperp)) for c in linalg.nullspace(gram)]
    radical = [r if r.d >= 0 else -r for r in radical]
    sig = tuple(subspace_signature(P.basis))
    if witness is None:
        try:
            witness = _span_witness(P.basis)
        except ContractViolation:
            witness = None
    wk = k_pairing(witness) if witness is not None else Fraction(0)
    steps = [
        f"Pi has signature {sig} (positive, negative, radical)",
        f"Pi cap K^perp has dimension {len(kperp)} and inertia {inertia}",
    ]
    if nd:
        steps.append("leading minors alternate in sign: the form is negative definite there")
        steps.append("hence L^2 < 0 for every nonzero L in Pi with K.L = 0")
    else:
        steps.append("leading minors do not alternate: the form is not negative definite there")
        if inertia == (0, 8, 1):
            steps.append(f"negative semidefinite with radical spanned by {radical[0]}, of square 0")
            steps.append("hence the only nonzero L in Pi with L^2 >= 0 and K.L = 0 lie on that line")
    steps += [
        "H^perp is negative definite, so the degree is nonzero on the punctured cone {L^2 >= 0}",
        "the half with d > 0 is convex and stays connected after removing one ray",
    ]
    if witness is not None:
        steps.append(f"witness of degree {witness.d} and square {intersect(witness, witness)} has K.L = {wk}")
    record = KPositivityProof(P.s, list(P.basis), kperp, gram, minors, nd, inertia, radical,
                              sig, witness, wk, steps)
    if not (nd or inertia == (0, 8, 1)):
        raise KPositivityError(f"form on Pi cap K^perp has inertia {inertia}; K.L changes sign", record)
    if sig != (1, 9, 0):
        raise KPositivityError(f"Pi has signature {sig}, expected (1, 9, 0)", record)
    if witness is None:
        raise KPositivityError("Pi has no vector of positive square", record)
    if not (witness.d > 0 and intersect(witness, witness) >= 0 and wk > 0):
        raise KPositivityError("witness does not certify K-positivity", record)
    if linalg.rank([b.coords for b in P.basis] + [witness.coords]) != 10:
        raise KPositivityError("witness is not in Pi", record)
    if nd:
        steps.append("conclusion: K.L > 0 for every nonzero L in Pi with L^2 >= 0 and H.L >= 0")
    else:
        steps.append(f"conclusion: K.L > 0 for every L in Pi with L^2 >= 0 and H.L >= 0 "
                     f"off the ray of {radical[0]}, where K.L = 0")
    return record


def verify_kpositivity_json(obj: dict) -> None:
    basis = [class_from_json(b) for b in obj["pi_basis"]]
    P = PiSubspace(int(obj["s"]), basis, [], [], 0)
    again = kpositivity_proof(P, witness=class_from_json(obj["witness"])).to_json()
    for key in ("gram", "minors", "negative_definite", "kperp_inertia", "radical", "pi_signature"):
        if again[key] != obj[key]:
            raise ValueError(f"recomputed {key} differs from the record")


# Reports

@dataclass
class RunReport:
    name: str
    params: dict
    success: bool
    records: list[Any] = field(default_factory=list)
    kpositivity: KPositivityProof | None = None
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def rays(self) -> list[Ray]:
        return [_record_ray(r) for r in self.records]


def _record_ray(record) -> Ray:
    if isinstance(record, GoodRayCertificate):
        return record.ray
    return record.cls


def _entry(record) -> dict:
    cert = certificates.to_json(record)
    ray = _record_ray(record).rep
    return {
        "s": ray.s,
        "degree": encode_number(ray.d),
        "multiplicities": [encode_number(x) for x in ray.m],
        "k_pairing": encode_number(k_pairing(ray)),
        "de_fernex_sign": int(_de_fernex(ray)),
        "certificate_id": certificates.certificate_id(cert),
        "certificate": cert,
    }


def _de_fernex(ray: ClassVector) -> Sign:
    from picardcone.lattice import de_fernex_sign

    return de_fernex_sign(ray)


def report_to_json(report: RunReport) -> dict:
    return {
        "kind": "report",
        "name": report.name,
        "params": report.params,
        "success": report.success,
        "entries": [_entry(r) for r in report.records],
        "kpositivity": report.kpositivity.to_json() if report.kpositivity else None,
        "notes": list(report.notes),
    }


CSV_HEADER = ["s", "degree", "multiplicities", "k_pairing", "de_fernex_sign", "certificate_id"]
PLOT_HEADER = ["k_pairing", "sum_m_over_d"]


def report_emit(report: RunReport, out_dir: str | Path) -> dict[str, Path]:
    """Write ``<name>.json``, ``<name>.csv`` and ``<name>_plot.csv`` under out_dir."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    data = report_to_json(report)
    paths = {
        "json": out / f"{report.name}.json",
        "csv": out / f"{report.name}.csv",
        "plot": out / f"{report.name}_plot.csv",
    }
    try:
        paths["json"].write_text(json.dumps(data, indent=1))
        with paths["csv"].open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for e in data["entries"]:
                w.writerow([e["s"], e["degree"], " ".join(e["multiplicities"]), e["k_pairing"],
                            e["de_fernex_sign"], e["certificate_id"]])
        with paths["plot"].open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(PLOT_HEADER)
            for e in data["entries"]:
                total = sum((decode_number(x) for x in e["multiplicities"]), Fraction(0))
                ratio = total / decode_number(e["degree"])
                w.writerow([e["k_pairing"], encode_number(ratio)])
    except OSError as exc:
        raise OSError(f"writing report {report.name} under {out}: {exc}") from exc
    return paths


# Drivers

def theorem1_run(s: int, n_samples: int, seed: int = 1, max_degree: int = 8, bound: int = 20) -> RunReport:
    """Alternate random points of the quadric cone with random nef translates."""
    rng = random.Random(seed)
    t0 = time.perf_counter()
    records = []
    tally = {"nef": 0, "non-nef": 0}
    for n in range(n_samples):
        ray = sample_qperp(s, rng, bound).cls if n % 2 == 0 else sample_nef_class(s, rng, bound)
        rep: Theorem1Report = theorem1_check(ray, max_degree)
        tally["nef" if rep.nef else "non-nef"] += 1
        records.append(rep.outcome)
    notes = [
        f"{tally['nef']} nef, {tally['non-nef']} non-nef; all three conditions agreed",
        f"for non-nef classes the disjoint-curve condition was searched up to degree {max_degree} (none found)",
    ]
    return RunReport("theorem1", {"s": s, "samples": n_samples, "seed": seed, "max_degree": max_degree},
                     True, records, None, notes, time.perf_counter() - t0)


@dataclass
class Theorem2Result:
    pi: PiSubspace
    proof: KPositivityProof
    certificates: list[GoodRayCertificate]
    rejected: dict[str, int]
    report: RunReport


def _integral_combination(basis: Sequence[ClassVector], rng: random.Random, bound: int) -> ClassVector:
    s = basis[0].s
    v = ClassVector(s, 0, (0,) * s)
    for b in basis:
        c = rng.randint(-bound, bound)
        if c:
            v = v + c * b
    return v


def _in_span(basis: Sequence[ClassVector], v: ClassVector) -> bool:
    return linalg.rank([b.coords for b in basis] + [v.coords]) == len(basis)


def source_base_point(P: PiSubspace) -> ClassVector:
    """An integral nef class of the source quadric cone with nonzero multiplicity at the index.

    L_3(1^9, 0^(s'-9)) for the default curves; for a family made of one line
    through two points and exceptional classes, the quadratic move at the two
    points and a free third one, applied to L_3 on nine free slots.
    """
    sp = P.s_source
    default = anticanonical_nine(sp)
    if _in_span(P.source_basis, default) and default.m[P.index - 1] != 0:
        return default
    lines = [c.rep for c in P.curves if c.rep.d == 1]
    taken = {next(j + 1 for j, x in enumerate(c.rep.m) if x) for c in P.curves if c.rep.d == 0}
    if len(lines) == 1:
        a, b = (j + 1 for j, x in enumerate(lines[0].m) if x)
        free = [j for j in range(1, sp + 1) if j not in taken and j not in (a, b)]
        z, rest = free[0], free[1:]
        support = sorted([a, b] + rest[:7])
        nine = ClassVector(sp, 3, tuple(1 if j in support else 0 for j in range(1, sp + 1)))
        base = apply_quadratic(nine, a, b, z)
        if _in_span(P.source_basis, base) and base.m[P.index - 1] != 0:
            return base
    raise ValueError("no base point known for this family of curves")


def theorem2_run(s: int, n_samples: int, seed: int = 1, index: int = 1, bound: int = 20,
                 max_tries: int | None = None, curves: Sequence[NegCurveClass] | None = None) -> Theorem2Result:
    """Certify good rays on {L^2 = 0} cap Pi after proving K-positivity on Pi.

    The first ray is the image of the base point (L_3(1^9, 0^(s-12)) for the
    default curves); the rest are second intersections of random lines
    through it inside Pi.
    """
    t0 = time.perf_counter()
    P = build_pi(s, curves=curves, index=index)
    base = uncollide(source_base_point(P), index, 2)
    proof = kpositivity_proof(P, witness=base)
    rng = random.Random(seed)
    certs: list[GoodRayCertificate] = []
    seen: set = set()
    rejected = {"invalid": 0, "negative_degree": 0, "zero_multiplicity": 0, "duplicate": 0}
    max_tries = max_tries if max_tries is not None else 1000 * max(n_samples, 1)
    tries = 0
    candidate: ClassVector | None = base
    while len(certs) < n_samples:
        if candidate is None:
            tries += 1
            if tries > max_tries:
                raise ContractViolation(f"only {len(certs)} of {n_samples} rays after {max_tries} draws")
            v = uncollide(_integral_combination(P.source_basis, rng, bound), index, 2)
            try:
                if linalg.rank([v.coords, base.coords]) < 2:
                    raise InvalidDirection("direction is proportional to the base point")
                candidate = second_intersection(base, v)
            except InvalidDirection:
                rejected["invalid"] += 1
                continue
        point, candidate = candidate, None
        if point.d <= 0:
            rejected["negative_degree"] += 1
            continue
        source = collide(point, index, 2)
        if source.m[index - 1] == 0:
            rejected["zero_multiplicity"] += 1
            continue
        ray = to_ray(point)
        if ray in seen:
            rejected["duplicate"] += 1
            continue
        if not on_qperp(source):
            raise ContractViolation(f"collided class {source} left the quadric cone")
        cert = certify_good_ray(source, index, 2)
        if cert.ray != ray:
            raise ContractViolation(f"certificate ray {cert.ray} differs from the sample {ray}")
        if not cert.k_pairing > 0:
            raise ContractViolation(f"good ray {ray} is not K-positive")
        seen.add(ray)
        certs.append(cert)
    report = RunReport(
        "theorem2",
        {"s": s, "samples": n_samples, "seed": seed, "index": index, "bound": bound},
        True,
        list(certs),
        proof,
        [f"rejected draws: {rejected}"],
        time.perf_counter() - t0,
    )
    return Theorem2Result(P, proof, certs, rejected, report)


def _largest_first(L: ClassVector) -> tuple[ClassVector, CKWord]:
    j = max(range(L.s), key=lambda t: (L.m[t], -t)) + 1
    if j == 1:
        return L, CKWord()
    w = CKWord((Permutation.swap(1, j, L.s),))
    return apply_word(w, L), w


def cone_neighbours(L: Ray, rng: random.Random, count: int, spread: int = 3,
                    start_scale: int = 16, max_tries: int = 20_000) -> list[Ray]:
    """Distinct nef rays near L on the 9-dimensional cone of nef classes through L.

    With word(L) = a * L_3 on nine slots S, the cone is the pullback of the
    s = 10 cone on S plus one free slot z, moved back by the inverse word.
    Points are second intersections of lines from a base point B != L whose
    direction approaches L - B.
    """
    cert = _certified(L)
    s = L.s
    target = apply_word(cert.word, L.rep)
    slots = list(cert.support)
    z = next(j for j in range(1, s + 1) if j not in cert.support)
    free = [0] + slots + [z]
    b = apply_quadratic(target, slots[0], slots[1], z)
    k_slice = ClassVector(s, -3, tuple(-1 if (t + 1) in free[1:] else 0 for t in range(s)))
    u0 = target - b
    inv = invert(cert.word)
    out: list[Ray] = []
    seen = {L}
    scale = start_scale
    misses = 0
    for _ in range(max_tries):
        coords = [0] * (s + 1)
        for t in free:
            coords[t] = rng.randint(-spread, spread)
        w = ClassVector.from_coords(coords)
        delta = -w - intersect(w, k_slice) * k_slice  # K_slice^2 = -1
        u = scale * u0 + delta
        try:
            q = second_intersection(b, u)
        except InvalidDirection:
            continue
        if q.d <= 0:
            misses += 1
            continue
        ray = to_ray(apply_word(inv, q))
        if ray in seen:
            misses += 1
            if misses > 50:
                scale = max(1, scale // 2)
                misses = 0
            continue
        seen.add(ray)
        out.append(ray)
        if len(out) == count:
            break
    return out


@dataclass
class Theorem3Result:
    k: int
    found: GoodRayCertificate | None
    perturbed: list[GoodRayCertificate]
    candidates: int
    report: RunReport


def theorem3_search(k: int, budget: int = 100_000, seed: int = 1, n_perturb: int = 10,
                    max_word: int = 20, max_multiple: int = 3) -> Theorem3Result:
    """Look for a de Fernex-negative good ray <Uncoll_{k-1}(L, 1)> on k^2 + 4 points."""
    if k < 3:
        raise ValueError("needs k >= 3")
    t0 = time.perf_counter()
    s2, r, s = 2 * k + 4, k - 1, k * k + 4
    rng = random.Random(seed)
    found: GoodRayCertificate | None = None
    n = 0
    for n in range(1, budget + 1):
        a = rng.randint(1, max_multiple)
        w = random_word(s2, rng, rng.randint(1, max_word))
        L, _ = _largest_first(apply_word(w, anticanonical_nine(s2, a)))
        if L.m[0] == 0:
            continue
        cert = certify_good_ray(L, 1, r)
        if cert.de_fernex is Sign.NEGATIVE:
            found = cert
            break
    perturbed: list[GoodRayCertificate] = []
    notes = []
    if found is not None:
        neighbour_rng = random.Random(seed * 7919 + 1)
        spread, start = 3, 16
        for _ in range(12):
            for ray in cone_neighbours(found.source, neighbour_rng, 4 * n_perturb,
                                       spread=spread, start_scale=start):
                if ray.rep.m[0] == 0:
                    continue
                cert = certify_good_ray(ray, 1, r)
                if cert.de_fernex is Sign.NEGATIVE and cert.ray not in {p.ray for p in perturbed} \
                        and cert.ray != found.ray:
                    perturbed.append(cert)
                if len(perturbed) >= n_perturb:
                    break
            if len(perturbed) >= n_perturb:
                break
            start *= 4
        notes.append(f"found after {n} candidates; {len(perturbed)} neighbouring F-negative good rays")
    else:
        notes.append(f"no de Fernex-negative ray within {budget} candidates")
    outputs = ([found] if found else []) + perturbed
    for c in outputs:
        rep = c.ray.rep
        if intersect(rep, rep) != 0 or rep.d <= 0:
            raise ContractViolation(f"{c.ray} is not a degree-positive square-zero ray")
        if not k_pairing(rep) > 0:
            raise ContractViolation(f"de Fernex-negative ray {c.ray} is not K-positive")
    success = found is not None and len(perturbed) >= n_perturb
    report = RunReport(
        f"theorem3_k{k}",
        {"k": k, "s": s, "source_s": s2, "r": r, "budget": budget, "seed": seed, "n_perturb": n_perturb},
        success, outputs, None, notes, time.perf_counter() - t0,
    )
    return Theorem3Result(k, found, perturbed, n, report)
