"""Sparse exterior algebra on a flat n-dimensional model space (n <= 8).

A :class:`Form` stores its coefficients in a dict keyed by strictly increasing
0-based index tuples (lexicographic basis of Lambda^k, orientation
e_{0...n-1} = +1).  Coefficients are usually :data:`~conekit.scalars.Scalar`,
but wedge/contract/add only ever use ring operations (+, -, *), so forms over
other commutative coefficient rings (polynomials, truncated power series)
work too.  Metric-dependent operations (hodge with an explicit metric, inner
products, musical isomorphisms) require scalar coefficients.

JSON wire format uses 1-based indices:
``{"dim": 6, "degree": 2, "terms": [{"idx": [1, 2], "coeff": "3/2"}]}``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .scalars import (Scalar, is_exact, mat_inv, mat_det, scalar_close,
                      sqrt_scalar, scalar_to_json, scalar_from_json)

Idx = tuple[int, ...]

MAX_DIM = 8


def _canon_idx(idx: Iterable[int], dim: int) -> tuple[int, Idx]:
    """Sort an index tuple, returning (sign, sorted) — sign 0 on repeats."""
    lst = list(idx)
    for i in lst:
        if not 0 <= i < dim:
            raise ValueError(f"index {i} out of range for dim {dim}")
    sign = 1
    # insertion sort, counting transpositions (tuples have length <= 8)
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(lst)):
        if lst[i - 1] == lst[i]:
            return 0, ()
    return sign, tuple(lst)


def _merge_sign(a: Idx, b: Idx) -> tuple[int, Idx]:
    """Koszul sign and merged tuple for disjoint sorted tuples; sign 0 if not disjoint."""
    out: list[int] = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return 0, ()
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a)-i entries of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


class Form:
    """Alternating k-form with sparse coefficients."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: dict[Idx, object] | None = None):
        if not 0 < dim <= MAX_DIM:
            raise ValueError(f"dim must be in 1..{MAX_DIM}")
        if not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} outside [0, {dim}]")
        self.dim = dim
        self.degree = degree
        self.terms: dict[Idx, object] = {}
        if terms:
            for idx, c in terms.items():
                if len(idx) != degree:
                    raise ValueError(f"index {idx} has wrong length for degree {degree}")
                sign, canon = _canon_idx(idx, dim)
                if sign == 0 or _is_zero_coeff(c):
                    continue
                cur = self.terms.get(canon)
                val = (c if sign == 1 else -c) if cur is None else cur + (c if sign == 1 else -c)
                if _is_zero_coeff(val):
                    self.terms.pop(canon, None)
                else:
                    self.terms[canon] = val

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree)

    @classmethod
    def scalar(cls, dim: int, value) -> "Form":
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim: int, *indices: int, coeff=Fraction(1)) -> "Form":
        """e^{i1} ^ ... ^ e^{ik} with 0-based indices."""
        return cls(dim, len(indices), {tuple(indices): coeff})

    # -- basics ---------------------------------------------------------------

    def coeff(self, *idx: int):
        sign, canon = _canon_idx(idx, self.dim)
        if sign == 0:
            return Fraction(0)
        c = self.terms.get(canon)
        if c is None:
            return Fraction(0)
        return c if sign == 1 else -c

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            cur = out.get(idx)
            val = c if cur is None else cur + c
            if _is_zero_coeff(val):
                out.pop(idx, None)
            else:
                out[idx] = val
        f = Form(self.dim, self.degree)
        f.terms = out
        return f

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        f = Form(self.dim, self.degree)
        f.terms = {idx: -c for idx, c in self.terms.items()}
        return f

    def scale(self, s) -> "Form":
        if _is_zero_coeff(s):
            return Form(self.dim, self.degree)
        f = Form(self.dim, self.degree)
        f.terms = {idx: s * c for idx, c in self.terms.items()}
        f.terms = {i: c for i, c in f.terms.items() if not _is_zero_coeff(c)}
        return f

    def __rmul__(self, s) -> "Form":
        return self.scale(s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.dim == other.dim and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def _check_compatible(self, other: "Form"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def map_coeffs(self, fn) -> "Form":
        f = Form(self.dim, self.degree)
        f.terms = {i: fn(c) for i, c in self.terms.items()}
        f.terms = {i: c for i, c in f.terms.items() if not _is_zero_coeff(c)}
        return f

    def __repr__(self):
        if not self.terms:
            return f"Form({self.dim}, {self.degree}, 0)"
        parts = [f"{c!r}*e{''.join(str(i + 1) for i in idx)}" if idx else f"{c!r}"
                 for idx, c in sorted(self.terms.items())]
        return " + ".join(parts)


def _is_zero_coeff(c) -> bool:
    if isinstance(c, (int, float, Fraction)):
        return c == 0
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z() if callable(z) else bool(z)
    return not c


# -- multiplicative structure -------------------------------------------------

def wedge(a: Form, b: Form) -> Form:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    k = a.degree + b.degree
    if k > a.dim:
        return Form(a.dim, a.dim)  # zero form of top degree as canonical sink
    out = Form(a.dim, k)
    terms: dict[Idx, object] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            sign, merged = _merge_sign(ia, ib)
            if sign == 0:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            cur = terms.get(merged)
            val = c if cur is None else cur + c
            if _is_zero_coeff(val):
                terms.pop(merged, None)
            else:
                terms[merged] = val
    out.terms = terms
    return out


def wedge_all(*forms: Form) -> Form:
    it = iter(forms)
    out = next(it)
    for f in it:
        out = wedge(out, f)
    return out


def wedge_power(a: Form, m: int) -> Form:
    if m == 0:
        return Form.scalar(a.dim, Fraction(1))
    out = a
    for _ in range(m - 1):
        out = wedge(out, a)
    return out


def contract(v: Sequence, a: Form) -> Form:
    """Interior product v . a for a vector with components v[0..n-1]."""
    if len(v) != a.dim:
        raise ValueError("vector length must equal form dimension")
    if a.degree == 0:
        return Form(a.dim, 0)
    out = Form(a.dim, a.degree - 1)
    terms: dict[Idx, object] = {}
    for idx, c in a.terms.items():
        for p, i in enumerate(idx):
            vi = v[i]
            if _is_zero_coeff(vi):
                continue
            val = vi * c
            if p % 2:
                val = -val
            rest = idx[:p] + idx[p + 1:]
            cur = terms.get(rest)
            tot = val if cur is None else cur + val
            if _is_zero_coeff(tot):
                terms.pop(rest, None)
            else:
                terms[rest] = tot
    out.terms = terms
    return out


# -- metric-dependent operations ----------------------------------------------

def _minor_det(m, rows: Idx, cols: Idx):
    k = len(rows)
    if k == 0:
        return Fraction(1)
    if k == 1:
        return m[rows[0]][cols[0]]
    if k == 2:
        return (m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
                - m[rows[0]][cols[1]] * m[rows[1]][cols[0]])
    return mat_det([[m[r][c] for c in cols] for r in rows])


def _complement(idx: Idx, dim: int) -> Idx:
    s = set(idx)
    return tuple(i for i in range(dim) if i not in s)


def hodge(a: Form, metric=None) -> Form:
    """Hodge star.  metric None means the flat identity metric (any coefficient
    ring); an explicit metric (n x n positive-definite matrix) requires scalar
    coefficients."""
    n, k = a.dim, a.degree
    out = Form(n, n - k)
    if metric is None:
        terms: dict[Idx, object] = {}
        for idx, c in a.terms.items():
            comp = _complement(idx, n)
            sign, _ = _merge_sign(idx, comp)
            terms[comp] = c if sign == 1 else -c
        out.terms = terms
        return out
    g = metric
    ginv = mat_inv(g)
    detg = mat_det(g)
    sq = sqrt_scalar(detg)
    terms = {}
    for idx_i in combinations(range(n), k):
        raised = None
        for idx_k, c in a.terms.items():
            m = _minor_det(ginv, idx_i, idx_k)
            if _is_zero_coeff(m):
                continue
            t = m * c
            raised = t if raised is None else raised + t
        if raised is None or _is_zero_coeff(raised):
            continue
        comp = _complement(idx_i, n)
        sign, _ = _merge_sign(idx_i, comp)
        val = sq * raised
        if sign < 0:
            val = -val
        cur = terms.get(comp)
        tot = val if cur is None else cur + val
        if not _is_zero_coeff(tot):
            terms[comp] = tot
        else:
            terms.pop(comp, None)
    out.terms = terms
    return out


def form_inner(a: Form, b: Form, metric=None):
    """Pointwise inner product <a, b> induced on Lambda^k."""
    a._check_compatible(b)
    if metric is None:
        tot = Fraction(0)
        for idx, c in a.terms.items():
            cb = b.terms.get(idx)
            if cb is not None:
                tot = tot + c * cb
        return tot
    ginv = mat_inv(metric)
    tot = Fraction(0)
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            m = _minor_det(ginv, ia, ib)
            if not _is_zero_coeff(m):
                tot = tot + ca * cb * m
    return tot


def musical_flat(v: Sequence, metric=None) -> Form:
    """X^b = g(X, .) as a 1-form."""
    n = len(v)
    if metric is None:
        return Form(n, 1, {(i,): v[i] for i in range(n)})
    comps = [sum(metric[i][j] * v[j] for j in range(n)) for i in range(n)]
    return Form(n, 1, {(i,): comps[i] for i in range(n)})


def musical_sharp(a: Form, metric=None) -> list:
    """gamma^# as a vector (list of components)."""
    if a.degree != 1:
        raise ValueError("sharp needs a 1-form")
    n = a.dim
    comps = [a.coeff(i) for i in range(n)]
    if metric is None:
        return comps
    ginv = mat_inv(metric)
    return [sum(ginv[i][j] * comps[j] for j in range(n)) for i in range(n)]


def pullback(a: Form, mat) -> Form:
    """(A* a)(v1..vk) = a(A v1, .., A vk) for an n x n matrix A."""
    n, k = a.dim, a.degree
    out = Form(n, k)
    if k == 0:
        out.terms = dict(a.terms)
        return out
    terms: dict[Idx, object] = {}
    for idx_j in combinations(range(n), k):
        tot = None
        for idx_i, c in a.terms.items():
            m = _minor_det(mat, idx_i, idx_j)
            if _is_zero_coeff(m):
                continue
            t = m * c
            tot = t if tot is None else tot + t
        if tot is not None and not _is_zero_coeff(tot):
            terms[idx_j] = tot
    out.terms = terms
    return out


def forms_close(a: Form, b: Form, rel_tol: float = 1e-10, abs_tol: float = 1e-12) -> bool:
    if a.dim != b.dim or a.degree != b.degree:
        return False
    for idx in set(a.terms) | set(b.terms):
        if not scalar_close(a.terms.get(idx, Fraction(0)), b.terms.get(idx, Fraction(0)),
                            rel_tol=rel_tol, abs_tol=abs_tol):
            return False
    return True


def form_norm_sup(a: Form) -> float:
    """Max |coefficient|; crude but convention-free size gauge."""
    return max((abs(float(c)) for c in a.terms.values()), default=0.0)


# -- JSON ----------------------------------------------------------------------

def form_to_json(a: Form) -> dict:
    return {
        "dim": a.dim,
        "degree": a.degree,
        "terms": [{"idx": [i + 1 for i in idx], "coeff": scalar_to_json(c)}
                  for idx, c in sorted(a.terms.items())],
    }


def form_from_json(obj: dict) -> Form:
    dim = obj["dim"]
    degree = obj["degree"]
    terms: dict[Idx, object] = {}
    for t in obj.get("terms", []):
        idx = tuple(i - 1 for i in t["idx"])
        terms[idx] = scalar_from_json(t["coeff"])
    return Form(dim, degree, terms)
