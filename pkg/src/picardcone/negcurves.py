"""(-1)-classes: orbit enumeration, orthogonality queries, disjointness.

Enumeration runs breadth-first on *shapes*, i.e. (degree, multiplicities
sorted in decreasing order), which are canonical forms for the permutation
part of the Cremona-Kantor group. Quadratic moves act on shapes directly, so
the orbit of the seeds E_i is explored without materializing every arrangement.
Arrangements are expanded on demand, or searched with a pruning bound when
only the ones orthogonal to a given class are wanted.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from picardcone import linalg
from picardcone.cremona import _quadratic_coords
from picardcone.lattice import (
    ClassVector,
    Ray,
    intersect,
    k_pairing,
    to_ray,
)

Shape = tuple[int, ...]


@dataclass(frozen=True)
class NegCurveClass:
    cls: Ray

    def __post_init__(self):
        if not is_minus_one_class(self.cls.rep):
            raise ValueError(f"{self.cls} is not a (-1)-class")

    @classmethod
    def of(cls, L: ClassVector) -> "NegCurveClass":
        return cls(to_ray(L))

    @property
    def rep(self) -> ClassVector:
        return self.cls.rep

    def __str__(self) -> str:
        return str(self.cls.rep)


def is_minus_one_class(L: ClassVector) -> bool:
    return L.is_integral() and intersect(L, L) == -1 and k_pairing(L) == -1


def _canon(c: Sequence[int]) -> Shape:
    return (c[0],) + tuple(sorted(c[1:], reverse=True))


@lru_cache(maxsize=64)
def minus_one_shapes(s: int, max_degree: int) -> tuple[Shape, ...]:
    """Shapes of all (-1)-classes of degree <= max_degree on s points.

    Every shape in the frontier is expanded, including those sitting at the
    degree bound; children above the bound are dropped.
    """
    if s < 1 or max_degree < 0:
        raise ValueError("need s >= 1 and max_degree >= 0")
    if s < 3:
        # no quadratic moves here: restrict the three-point classes instead
        out = []
        for shape in minus_one_shapes(3, max_degree):
            m = list(shape[1:])
            if m.count(0) >= 3 - s:
                for _ in range(3 - s):
                    m.remove(0)
                out.append((shape[0],) + tuple(m))
        return tuple(sorted(set(out)))
    seed = _canon((0, -1) + (0,) * (s - 1))
    seen = {seed}
    frontier = [seed]
    triples = list(itertools.combinations(range(1, s + 1), 3)) if s >= 3 else []
    while frontier:
        nxt = []
        for shape in frontier:
            done_values = set()
            for i, j, k in triples:
                # triples with the same multiset of multiplicities give the same shape
                key = (shape[i], shape[j], shape[k])
                if key in done_values:
                    continue
                done_values.add(key)
                child = _quadratic_coords(list(shape), i, j, k)
                if child[0] > max_degree:
                    continue
                c = _canon(child)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return tuple(sorted(seen))


def _multiset_permutations(values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    counts = Counter(values)
    distinct = sorted(counts)
    n = len(values)
    out = [0] * n

    def rec(pos: int):
        if pos == n:
            yield tuple(out)
            return
        for v in distinct:
            if counts[v]:
                counts[v] -= 1
                out[pos] = v
                yield from rec(pos + 1)
                counts[v] += 1

    yield from rec(0)


def enumerate_minus_one_classes(s: int, max_degree: int) -> list[NegCurveClass]:
    """All (-1)-classes of degree <= max_degree, sorted by coordinates."""
    found = []
    for shape in minus_one_shapes(s, max_degree):
        for m in _multiset_permutations(shape[1:]):
            found.append(ClassVector.from_coords((shape[0],) + m))
    found.sort(key=lambda c: (c.d, tuple(-x for x in c.m)))
    return [NegCurveClass(to_ray(c)) for c in found]


def _orthogonal_arrangements(shape: Shape, target_coords: Sequence[int]) -> list[tuple[int, ...]]:
    """Arrangements m of ``shape`` with d*T_0 - sum m_i T_i == 0.

    Depth-first over slots in decreasing |T_i|; a branch is cut when the
    remaining sum cannot reach the target by the rearrangement inequality.
    """
    d = shape[0]
    t0 = target_coords[0]
    t = target_coords[1:]
    s = len(t)
    order = sorted(range(s), key=lambda i: -abs(t[i]))
    counts = Counter(shape[1:])
    distinct = sorted(counts)
    need = d * t0
    sols: list[tuple[int, ...]] = []
    assign = [0] * s
    tails = [sorted(t[order[p]] for p in range(pos, s)) for pos in range(s + 1)]

    def reachable(pos: int, rest: int) -> bool:
        vals = sorted(v for v in distinct for _ in range(counts[v]))
        ts = tails[pos]
        hi = sum(a * b for a, b in zip(vals, ts))
        lo = sum(a * b for a, b in zip(vals, reversed(ts)))
        return lo <= rest <= hi

    def rec(pos: int, acc: int):
        if pos == s:
            if acc == need:
                sols.append(tuple(assign))
            return
        if not reachable(pos, need - acc):
            return
        i = order[pos]
        for v in distinct:
            if counts[v]:
                counts[v] -= 1
                assign[i] = v
                rec(pos + 1, acc + v * t[i])
                counts[v] += 1
        assign[i] = 0

    rec(0, 0)
    return sols


def _integral_coords(L: ClassVector) -> list[int]:
    if L.is_zero():
        return [0] * (L.s + 1)
    return linalg.primitive_integral(L.coords)


def orthogonal_minus_one_classes(L: ClassVector, max_degree: int) -> list[NegCurveClass]:
    """(-1)-classes E of degree <= max_degree with E . L = 0.

    Equal to filtering :func:`enumerate_minus_one_classes` by the pairing, but
    searched shape by shape so the full list is never built.
    """
    coords = _integral_coords(L)
    found = []
    for shape in minus_one_shapes(L.s, max_degree):
        for m in _orthogonal_arrangements(shape, coords):
            found.append(ClassVector.from_coords((shape[0],) + m))
    found.sort(key=lambda c: (c.d, tuple(-x for x in c.m)))
    return [NegCurveClass(to_ray(c)) for c in found]


def min_pairing_with_minus_one_classes(L: ClassVector, max_degree: int) -> tuple[Fraction, ClassVector | None]:
    """Smallest E . L over (-1)-classes E of degree <= max_degree, with a minimizer.

    Per shape the minimum is attained by pairing the largest multiplicities
    with the largest entries of L (rearrangement inequality).
    """
    best: Fraction | None = None
    arg = None
    order = sorted(range(L.s), key=lambda i: -L.m[i])
    for shape in minus_one_shapes(L.s, max_degree):
        vals = sorted(shape[1:], reverse=True)
        m = [0] * L.s
        for v, i in zip(vals, order):
            m[i] = v
        e = ClassVector.from_coords((shape[0],) + tuple(m))
        value = intersect(e, L)
        if best is None or value < best:
            best, arg = value, e
    return (best if best is not None else Fraction(0)), arg


def are_pairwise_disjoint(curves: Sequence[NegCurveClass]) -> bool:
    if len({c.cls.s for c in curves}) > 1:
        raise ValueError("curves live on different numbers of points")
    return all(intersect(a.rep, b.rep) == 0 for a, b in itertools.combinations(curves, 2))


def find_disjoint_subset(curves: Sequence[NegCurveClass], size: int) -> list[NegCurveClass] | None:
    """A pairwise-disjoint subfamily of the requested size, or None."""
    if size == 0:
        return []
    reps = [c.rep for c in curves]
    n = len(reps)
    adj = [[intersect(reps[a], reps[b]) == 0 for b in range(n)] for a in range(n)]

    def extend(chosen: list[int], start: int):
        if len(chosen) == size:
            return chosen
        for b in range(start, n):
            if all(adj[a][b] for a in chosen):
                got = extend(chosen + [b], b + 1)
                if got is not None:
                    return got
        return None

    picked = extend([], 0)
    return None if picked is None else [curves[b] for b in picked]

