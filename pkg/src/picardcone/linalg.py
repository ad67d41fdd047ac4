"""Small exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`. Sizes in this
package never exceed ~25, so plain Gaussian elimination is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = as_matrix(rows)
    if not a:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}, one vector per free column."""
    if not rows:
        if n_cols is None:
            raise ValueError("n_cols is required for an empty system")
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    red, pivots = rref(rows)
    n = len(red[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def primitive_integral(v: Sequence[Fraction]) -> list[int]:
    """Clear denominators and divide by the content. Sign is kept."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return [x // g for x in ints]


def det(rows: Sequence[Sequence]) -> Fraction:
    a = as_matrix(rows)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        result *= piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def leading_minors(rows: Sequence[Sequence]) -> list[Fraction]:
    """Determinants of the k x k upper-left blocks, k = 1..n."""
    a = as_matrix(rows)
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def congruence_diagonalize(gram: Sequence[Sequence]) -> tuple[list[Fraction], Matrix]:
    """Diagonal entries and change-of-basis rows T with T G T^t diagonal.

    Symmetric elimination: when every remaining diagonal entry vanishes but an
    off-diagonal one does not, row/column j is added to row/column i first,
    which makes the (i, i) entry 2 g_ij != 0. Row ``k`` of T pairs with
    diagonal entry ``k``.
    """
    a = as_matrix(gram)
    n = len(a)
    for i, row in enumerate(a):
        if len(row) != n or any(a[i][j] != a[j][i] for j in range(n)):
            raise ValueError("gram matrix must be square and symmetric")
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    diag: list[Fraction] = []
    rows: Matrix = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0),
                None,
            )
            if pair is None:
                for i in active:
                    diag.append(Fraction(0))
                    rows.append(t[i])
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
                t[i][k] += t[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        for i in active:
            if i != piv and a[i][piv] != 0:
                f = a[i][piv] / p
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                    t[i][k] -= f * t[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
        diag.append(p)
        rows.append(t[piv])
        active.remove(piv)
    return diag, rows


def congruence_diagonal(gram: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal of a matrix congruent to the symmetric ``gram``."""
    return congruence_diagonalize(gram)[0]


def inertia(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational form."""
    diag = congruence_diagonal(gram)
    pos = sum(1 for x in diag if x > 0)
    neg = sum(1 for x in diag if x < 0)
    return pos, neg, len(diag) - pos - neg
