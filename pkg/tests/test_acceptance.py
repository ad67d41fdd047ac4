"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_minus_one_classes, numpy_inertia, sympy_leading_minors  # noqa: E402
from picardcone.cli import main as cli_main  # noqa: E402
from picardcone.cremona import Status, apply_word, cremona_reduce, random_word  # noqa: E402
from picardcone.harness import kpositivity_proof, build_pi, theorem1_run, theorem2_run, theorem3_search  # noqa: E402
from picardcone.kperp import (  # noqa: E402
    NefCertificate,
    count_orthogonal_translates,
    nefness_test,
    orthogonal_translate_curves,
    phi_10,
    reduced_claim_gap,
    sample_nef_class,
    sample_qperp,
)
from picardcone.lattice import (  # noqa: E402
    ClassVector,
    Sign,
    anticanonical_nine,
    de_fernex_sign,
    intersect,
    k_pairing,
    kperp_signature,
    parse_class,
    to_ray,
)
from picardcone.negcurves import are_pairwise_disjoint, enumerate_minus_one_classes, orthogonal_minus_one_classes  # noqa: E402,E501
from picardcone import linalg  # noqa: E402
from picardcone.uncollision import canonical_shift  # noqa: E402

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_round_trip_reduction():
    rng = random.Random(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        s, a = rng.randint(10, 15), rng.randint(1, 5)
        base = anticanonical_nine(s, a)
        res = cremona_reduce(apply_word(random_word(s, rng, rng.randint(0, 20)), base))
        if not (res.status is Status.REDUCED and res.final.d == base.d
                and sorted(res.final.m) == sorted(base.m)):
            bad += 1
    elapsed = time.perf_counter() - t0
    record(1, "round-trip reduction", bad == 0 and elapsed < 10,
           f"1000 trials, {bad} mismatches, {elapsed:.2f} s (limit 10 s)")


def test_02_s10_nef_and_phi():
    rng = random.Random(2)
    problems = 0
    for _ in range(500):
        L = sample_qperp(10, rng).cls
        if not isinstance(nefness_test(L), NefCertificate):
            problems += 1
            continue
        curve = phi_10(L)
        found = orthogonal_minus_one_classes(L.rep, 6)
        expected = [curve] if curve.rep.d <= 6 else []
        if intersect(curve.rep, L.rep) != 0 or found != expected:
            problems += 1
    record(2, "s=10 nefness and phi", problems == 0,
           f"500 samples, {problems} without certificate or with a second orthogonal class up to degree 6")


def test_03_translate_counts():
    problems = 0
    for s in (11, 12, 13):
        rng = random.Random(30 + s)
        for _ in range(200):
            L = sample_nef_class(s, rng)
            curves = orthogonal_translate_curves(L)
            if count_orthogonal_translates(L) != s - 9 or not are_pairwise_disjoint(curves):
                problems += 1
    record(3, "orthogonal translate count", problems == 0, f"600 nef samples over s=11..13, {problems} wrong")


def test_04_theorem1_equivalence():
    counts = []
    for s in range(10, 15):
        rep = theorem1_run(s, 200, seed=40 + s, max_degree=8)
        counts.append(f"s={s}: {rep.notes[0].split(';')[0]}")
    # theorem1_run raises on the first disagreement
    record(4, "three-way equivalence", True, "; ".join(counts) + "; non-nef curve search bounded at degree 8")


def test_05_reduced_claim():
    rng = random.Random(5)
    trials = []
    # explicit boundary cases a = 0, a = m3, a = A/3
    trials += [((1, 0, 0), 0), ((2, 1, 1), 1), ((1, 1, 1), 1), ((3, 2, 2), 0), ((4, 4, 4), 4)]
    while len(trials) < 10_000:
        if rng.random() < 0.3:
            m = sorted((rng.randint(0, 3) for _ in range(3)), reverse=True)
        else:
            m = sorted((Fraction(rng.randint(0, 400), rng.randint(1, 20)) for _ in range(3)), reverse=True)
        m3 = Fraction(m[2])
        mode = rng.randrange(4)
        a = (Fraction(0) if mode == 0 else m3 if mode == 1 else
             m3 * Fraction(rng.randint(0, 1000), 1000) if mode == 2 else Fraction(sum(m), 3))
        if a > m3:  # A/3 is admissible only when all three are equal
            a = m3
        trials.append((tuple(m), a))
    negative = 0
    stated_wrong = []
    corrected_wrong = 0
    for (m1, m2, m3), a in trials:
        gap = reduced_claim_gap(Fraction(m1), Fraction(m2), Fraction(m3), Fraction(a))
        negative += gap < 0
        if (gap == 0) != (m1 == m2 == m3 == a):
            stated_wrong.append(((m1, m2, m3), a))
        corrected_wrong += (gap == 0) != (m2 == m3 == a)
    example = stated_wrong[0] if stated_wrong else None
    record(5, "reduced-class claim", negative == 0 and not stated_wrong,
           f"{len(trials)} trials, inequality violated {negative} times; "
           f"'equality iff m1=m2=m3=a' fails on {len(stated_wrong)} trials (first: m={example and example[0]}, "
           f"a={example and example[1]}); 'equality iff m2=m3=a' fails on {corrected_wrong}")


def test_06_canonical_shift():
    rng = random.Random(6)
    for _ in range(10_000):
        s = rng.randint(1, 15)
        L = ClassVector.from_coords([Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for _ in range(s + 1)])
        i, r = rng.randint(1, s), rng.randint(2, 5)
        canonical_shift(L, i, r)  # raises on mismatch
    record(6, "canonical shift identity", True, "10000 random (L, i, r) trials, exact")


def test_07_theorem2_s13():
    t0 = time.perf_counter()
    P = build_pi(13)
    rank = linalg.rank([b.coords for b in P.basis])
    proof = kpositivity_proof(P)
    res = theorem2_run(13, 100, seed=1)
    elapsed = time.perf_counter() - t0
    fixture = to_ray(parse_class("L6(2^8,0,1^4)"))
    signs = "".join("+" if x > 0 else "-" if x < 0 else "0" for x in proof.minors)
    good = (len(res.certificates) == 100 and all(c.k_pairing > 0 for c in res.certificates)
            and len({c.ray for c in res.certificates}) == 100)
    has_fixture = any(c.ray == fixture and c.k_pairing == 2 for c in res.certificates)
    oracle_ok = proof.minors == sympy_leading_minors(proof.gram) and numpy_inertia(proof.gram) == proof.kperp_inertia
    ok = rank == 10 and proof.negative_definite and good and has_fixture and elapsed < 60 and oracle_ok
    radical = ", ".join(str(r) for r in proof.radical) or "none"
    record(7, "Theorem 2 at s=13", ok,
           f"rank {rank}; minor signs {signs}; Gram on Pi cap K^perp has inertia {proof.kperp_inertia} "
           f"(radical {radical}), negative definite: {proof.negative_definite}; "
           f"{len(res.certificates)} good rays all K-positive: {good}; fixture present: {has_fixture}; "
           f"{elapsed:.2f} s")


def test_08_theorem3_k3():
    lines = []
    ok = True
    for seed in range(1, 11):
        res = theorem3_search(3, budget=100_000, seed=seed)
        outputs = ([res.found] if res.found else []) + res.perturbed
        f_neg = all(de_fernex_sign(c.ray.rep) is Sign.NEGATIVE for c in outputs)
        strict = all(sum(c.ray.rep.m) ** 2 > 12 * c.ray.rep.d ** 2 for c in outputs)
        k_pos = all(k_pairing(c.ray.rep) > 0 for c in outputs)
        seed_ok = res.report.success and f_neg and strict and k_pos and len(res.perturbed) >= 10
        ok &= seed_ok
        lines.append(f"seed {seed}: {'ok' if seed_ok else 'FAILED'} after {res.candidates}")
    with tempfile.TemporaryDirectory() as out:
        exit_code = cli_main(["--out", out, "theorem3", "--k", "4", "--budget", "2"])
    ok &= exit_code == 2
    record(8, "Theorem 3 at k=3", ok,
           "; ".join(lines) + f"; each with >=10 perturbed F-negative K-positive rays; "
           f"exhausted search exits with {exit_code}")


def test_09_orbit_vs_brute_force():
    mismatches = [(s, d) for s in range(1, 7) for d in range(0, 4)
                  if {c.rep.int_coords() for c in enumerate_minus_one_classes(s, d)} != brute_minus_one_classes(s, d)]
    record(9, "orbit enumeration vs brute force", not mismatches, f"s=1..6, degree<=3, mismatches {mismatches}")


def test_10_signature_table():
    expected = {8: (0, 8, 0), 9: (0, 8, 1), **{s: (1, s - 1, 0) for s in range(10, 21)}}
    wrong = {s: tuple(kperp_signature(s)) for s in expected if tuple(kperp_signature(s)) != expected[s]}
    record(10, "K-perp signature table", not wrong, f"s=8..20, wrong entries {wrong}")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
