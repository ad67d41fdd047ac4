"""Independent reference computations used only by the tests.

Nothing here imports the package's algorithms: the (-1)-class list is a
brute-force Diophantine search, signs use 100-digit floating point, and
matrix facts come from sympy / numpy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import numpy as np
import sympy


def brute_minus_one_classes(s: int, max_degree: int) -> set[tuple[int, ...]]:
    """All integral (d, m) with d^2 - sum m^2 = -1 and 3d - sum m = 1, d <= max_degree.

    sum m^2 = d^2 + 1 bounds every |m_i| by d when d >= 1 (d^2 + 1 is not a
    square) and by 1 when d = 0, so the box |m_i| <= max(d, 1) is exhaustive.
    """
    out = set()
    for d in range(0, max_degree + 1):
        box = range(-max(d, 1), max(d, 1) + 1)
        for m in itertools.product(box, repeat=s):
            if d * d - sum(x * x for x in m) == -1 and 3 * d - sum(m) == 1:
                out.add((d,) + m)
    return out


def de_fernex_sign_float(d, m) -> int:
    """Sign of sqrt(s-1) d - sum m with 100 digits."""
    with mpmath.workdps(100):
        v = mpmath.sqrt(len(m) - 1) * mpmath.mpf(Fraction(d).numerator) / Fraction(d).denominator
        total = sum(Fraction(x) for x in m)
        v -= mpmath.mpf(total.numerator) / total.denominator
        return 0 if v == 0 else (1 if v > 0 else -1)


def sympy_leading_minors(gram) -> list[Fraction]:
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in gram])
    return [Fraction(int(sympy.fraction(M[:k, :k].det())[0]), int(sympy.fraction(M[:k, :k].det())[1]))
            for k in range(1, M.rows + 1)]


def numpy_inertia(gram, tol: float = 1e-9) -> tuple[int, int, int]:
    a = np.array([[float(x) for x in row] for row in gram])
    ev = np.linalg.eigvalsh(a)
    scale = max(1.0, float(np.abs(ev).max()))
    return (int((ev > tol * scale).sum()), int((ev < -tol * scale).sum()),
            int((np.abs(ev) <= tol * scale).sum()))


def sympy_rank(rows) -> int:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows]).rank()


def lorentz_gram(s: int):
    return np.diag([1.0] + [-1.0] * s)
