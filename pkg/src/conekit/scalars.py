"""Dual-mode scalar arithmetic: exact rationals first, binary64 as fallback.

Every numeric quantity in the package is either a :class:`~fractions.Fraction`
(exact mode) or a ``float`` (binary64 mode).  Exact values stay exact under
+, -, *, / and comparisons; any float contaminates the computation and all
downstream comparisons must go through :func:`scalar_close`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[Fraction, int, float]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (Fraction, int))


def as_float(x: Scalar) -> float:
    return float(x)


def scalar_close(a: Scalar, b: Scalar, rel_tol: float = DEFAULT_REL_TOL,
                 abs_tol: float = DEFAULT_ABS_TOL) -> bool:
    """Equality up to tolerance; decides exactly when both sides are exact."""
    if is_exact(a) and is_exact(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=rel_tol, abs_tol=abs_tol)


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def nth_root(x: Scalar, k: int) -> Scalar:
    """k-th root, exact when x is rational with an exact rational root.

    Raises ValueError for negative x with even k.
    """
    if k <= 0:
        raise ValueError("root order must be positive")
    xf = float(x)
    if xf < 0 and k % 2 == 0:
        raise ValueError(f"no real {k}-th root of negative value {x!r}")
    if is_exact(x):
        q = Fraction(x)
        sign = 1
        if q < 0:
            sign, q = -1, -q
        num = _iroot(q.numerator, k)
        den = _iroot(q.denominator, k)
        if num is not None and den is not None:
            return sign * Fraction(num, den)
    if xf < 0:
        return -((-xf) ** (1.0 / k))
    return xf ** (1.0 / k)


def sqrt_scalar(x: Scalar) -> Scalar:
    return nth_root(x, 2)


def frac_pow(x: Scalar, p: Fraction) -> Scalar:
    """x**p for rational p, exact when a perfect power makes it possible."""
    p = Fraction(p)
    if p == 0:
        return Fraction(1)
    base = nth_root(x, p.denominator) if p.denominator > 1 else x
    e = p.numerator
    if is_exact(base):
        return Fraction(base) ** e
    return float(base) ** e


# -- small exact linear algebra (n <= 8) -------------------------------------

Matrix = Sequence[Sequence[Scalar]]


def _pivot_row(a, col: int, n: int) -> int | None:
    """Row index >= col with the largest |entry| in this column, None if all zero."""
    best, best_abs = None, 0.0
    for r in range(col, n):
        v = abs(float(a[r][col]))
        if v > best_abs:
            best, best_abs = r, v
    return best


def mat_det(m: Matrix) -> Scalar:
    """Determinant by Gaussian elimination with partial pivoting (tiny n)."""
    n = len(m)
    a = [list(row) for row in m]
    det: Scalar = Fraction(1)
    for col in range(n):
        piv = _pivot_row(a, col, n)
        if piv is None:
            return Fraction(0) if all(is_exact(x) for row in a for x in row) else 0.0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = _inv_scalar(a[col][col])
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col][c]
    return det


def _inv_scalar(x: Scalar) -> Scalar:
    if isinstance(x, float):
        return 1.0 / x
    return Fraction(1, 1) / Fraction(x)


def mat_inv(m: Matrix) -> list[list[Scalar]]:
    n = len(m)
    a = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = _pivot_row(a, col, n)
        if piv is None:
            raise ValueError("singular matrix")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = _inv_scalar(a[col][col])
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> list[list[Scalar]]:
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)]
            for i in range(n)]


def mat_vec(a: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def mat_transpose(a: Matrix) -> list[list[Scalar]]:
    return [list(col) for col in zip(*a)]


def is_positive_definite(m: Matrix) -> bool:
    """Sylvester pivot test; exact for rational input."""
    n = len(m)
    for i in range(n):
        for j in range(n):
            if not scalar_close(m[i][j], m[j][i], rel_tol=1e-9, abs_tol=1e-9):
                return False
    a = [list(row) for row in m]
    for col in range(n):
        piv = a[col][col]
        if is_exact(piv):
            if piv <= 0:
                return False
        elif float(piv) <= 0:
            return False
        inv = _inv_scalar(piv)
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] = a[r][c] - f * a[col][c]
    return True


# -- JSON scalar encoding -----------------------------------------------------

def scalar_to_json(x: Scalar):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def scalar_from_json(v) -> Scalar:
    if isinstance(v, bool):
        raise ValueError("bool is not a scalar")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"cannot parse scalar from {v!r}")
