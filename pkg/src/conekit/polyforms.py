"""Polynomial-coefficient differential forms on flat R^n.

Supplies exterior derivative, codifferential and Hodge Laplacian with exact
rational arithmetic.  These are the workhorse oracles: identities asserted
elsewhere in the package are cross-checked here by direct differentiation of
polynomial data.

Sign conventions: d* = (-1)^{n(k+1)+1} * d * (so d* = -*d* uniformly in
dim 6), and the Laplacian dd* + d*d is non-negative: on functions it equals
-sum of second partials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .forms import Form, hodge, wedge, contract
from .scalars import Scalar, scalar_to_json, scalar_from_json

Exps = tuple[int, ...]


class Poly:
    """Multivariate polynomial, exponent-vector -> coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Exps, Scalar] | None = None):
        self.nvars = nvars
        self.terms: dict[Exps, Scalar] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if c != 0:
                    cur = self.terms.get(e)
                    val = c if cur is None else cur + c
                    if val != 0:
                        self.terms[e] = val
                    else:
                        self.terms.pop(e, None)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Poly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, float)):
            if other == 0:
                return not self.terms
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            val = c if cur is None else cur + c
            if val == 0:
                out.pop(e, None)
            else:
                out[e] = val
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            if other == 0:
                return Poly(self.nvars)
            p = Poly(self.nvars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[Exps, Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                val = c1 * c2
                cur = out.get(e)
                tot = val if cur is None else cur + val
                if tot == 0:
                    out.pop(e, None)
                else:
                    out[e] = tot
        p = Poly(self.nvars)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, m: int):
        out = Poly.const(self.nvars, Fraction(1))
        for _ in range(m):
            out = out * self
        return out

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.nvars, other)

    def diff(self, i: int) -> "Poly":
        out: dict[Exps, Scalar] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
        p = Poly(self.nvars)
        p.terms = out
        return p

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        tot: Scalar = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(point, e):
                for _ in range(p):
                    v = v * x
            tot = tot + v
        return tot

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __repr__(self):
        if not self.terms:
            return "0"
        def mono(e):
            parts = [f"x{i + 1}" + (f"^{p}" if p > 1 else "")
                     for i, p in enumerate(e) if p]
            return "*".join(parts) or "1"
        return " + ".join(f"{c}*{mono(e)}" for e, c in sorted(self.terms.items()))


def poly_form(dim: int, degree: int, terms: dict[tuple[int, ...], Poly]) -> Form:
    return Form(dim, degree, terms)


def const_coeffs(a: Form) -> Form:
    """Lift a scalar-coefficient form to polynomial coefficients."""
    return a.map_coeffs(lambda c: Poly.const(a.dim, c))


def eval_form(a: Form, point: Sequence[Scalar]) -> Form:
    """Evaluate polynomial coefficients at a point (scalar coefficients pass through)."""
    def ev(c):
        return c.eval(point) if isinstance(c, Poly) else c
    return a.map_coeffs(ev)


def poly_d(a: Form) -> Form:
    """Exterior derivative of a polynomial-coefficient form."""
    n, k = a.dim, a.degree
    if k == n:
        return Form(n, n)  # top-degree sink: d of top form is zero
    out = Form(n, k + 1)
    for idx, c in a.terms.items():
        if not isinstance(c, Poly):
            continue  # constant coefficient: derivative zero
        for i in range(n):
            dc = c.diff(i)
            if dc.is_zero():
                continue
            out = out + Form(n, k + 1, {(i,) + idx: dc})
    return out


def poly_codiff(a: Form) -> Form:
    """d* = (-1)^{n(k+1)+1} * d *  (flat metric, standard orientation)."""
    n, k = a.dim, a.degree
    if k == 0:
        return Form(n, 0)
    s = hodge(a)
    ds = poly_d(s)
    out = hodge(ds)
    sign = (-1) ** (n * (k + 1) + 1)
    return out if sign == 1 else -out


def poly_laplacian(a: Form) -> Form:
    """Hodge Laplacian dd* + d*d (= -sum of second partials componentwise)."""
    n, k = a.dim, a.degree
    parts = []
    if k > 0:
        parts.append(poly_d(poly_codiff(a)))
    if k < n:
        parts.append(poly_codiff(poly_d(a)))
    out = Form(n, k)
    for p in parts:
        out = out + p
    return out


def coefficient_laplacian(a: Form) -> Form:
    """Independent check: -sum_i d^2/dx_i^2 applied to each coefficient."""
    def lap(c):
        if not isinstance(c, Poly):
            return Poly(a.dim)
        tot = Poly(a.dim)
        for i in range(a.dim):
            tot = tot + c.diff(i).diff(i)
        return -tot
    return a.map_coeffs(lap)


def euler_vector(n: int) -> list[Poly]:
    """Radial field: components x_i."""
    return [Poly.var(n, i) for i in range(n)]


def radial_square(n: int) -> Poly:
    """r^2 = sum x_i^2."""
    tot = Poly(n)
    for i in range(n):
        tot = tot + Poly.var(n, i, 2)
    return tot


def poly_divmod_r2(p: Poly) -> tuple[Poly, Poly]:
    """Divide by r^2 = x_n^2 + (x_1^2 + ... + x_{n-1}^2), monic in the last
    variable; returns (quotient, remainder) with deg_{x_n}(remainder) < 2."""
    n = p.nvars
    rest = Poly(n)
    for i in range(n - 1):
        rest = rest + Poly.var(n, i, 2)
    quot = Poly(n)
    rem = Poly(n)
    rem.terms = dict(p.terms)
    while True:
        lead = None
        for e, c in rem.terms.items():
            if e[-1] >= 2 and (lead is None or e[-1] > lead[0][-1]):
                lead = (e, c)
        if lead is None:
            break
        e, c = lead
        e2 = list(e)
        e2[-1] -= 2
        mono = Poly(n, {tuple(e2): c})
        quot = quot + mono
        # rem -= mono * (x_n^2 + rest)
        rem = rem - Poly(n, {e: c}) - mono * rest
    return quot, rem


def form_div_r2(a: Form) -> Form | None:
    """Divide every coefficient exactly by r^2; None if not divisible."""
    out_terms = {}
    for idx, c in a.terms.items():
        if not isinstance(c, Poly):
            if c == 0:
                continue
            return None       # nonzero constant is never divisible by r^2
        q, r = poly_divmod_r2(c)
        if not r.is_zero():
            return None
        out_terms[idx] = q
    f = Form(a.dim, a.degree)
    f.terms = {i: c for i, c in out_terms.items() if not c.is_zero()}
    return f


# -- JSON ----------------------------------------------------------------------

def poly_to_json(p: Poly) -> list:
    return [{"exps": list(e), "coeff": scalar_to_json(c)}
            for e, c in sorted(p.terms.items())]


def poly_from_json(nvars: int, items: list) -> Poly:
    terms = {tuple(t["exps"]): scalar_from_json(t["coeff"]) for t in items}
    return Poly(nvars, terms)


def polyform_to_json(a: Form) -> dict:
    return {
        "dim": a.dim,
        "degree": a.degree,
        "terms": [{"idx": [i + 1 for i in idx], "coeff": poly_to_json(c)}
                  for idx, c in sorted(a.terms.items())],
    }


def polyform_from_json(obj: dict) -> Form:
    dim, degree = obj["dim"], obj["degree"]
    terms = {tuple(i - 1 for i in t["idx"]): poly_from_json(dim, t["coeff"])
             for t in obj.get("terms", [])}
    return Form(dim, degree, terms)
