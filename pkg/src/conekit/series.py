"""Truncated power-series machinery for the collapsing-circle recursion.

The deformation parameter enters every quantity as a formal power series
cut off at a fixed order.  A scalar `Jet` is such a truncated series; a
form-valued series is a `Form` whose coefficients are jets, which lets
the nonlinear duality map for stable 3-forms run unchanged over the jet
ring (nilpotent arithmetic replaces symbolic differentiation).

On top of the jet ring sit the pieces of the order-by-order solve: the
nonlinear Taylor coefficients of the duality map, the scalar constraint
that keeps the normalisation of the complex volume form, the assembled
right-hand sides for the next order, and the combinatorial majorant
argument (multi-index enumeration, majorant coefficient inequality, and
a mock iteration that certifies the abstract norm recursion against the
majorant).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .forms import Form, _is_zero_coeff, form_norm_sup, wedge
from .scalars import sqrt_scalar
from .su3 import (SU3Structure, decompose3, hitchin_dual, linearized_dual,
                  stability_invariant, standard_su3)


class JetError(ValueError):
    """Jet arithmetic outside its domain (truncation or leading term)."""


class MajorantError(ValueError):
    """The majorant scheme cannot close."""


# ------------------------------------------------------------------- jets

class Jet:
    """Power series in one formal parameter, truncated at a fixed order.

    Coefficients live in any commutative ring with 1 that mixes with
    ints and Fractions (numbers, polynomials); the leading coefficient
    gates the analytic operations: `inv` needs it invertible, `sqrt` and
    fractional powers need it positive.  Binary operations truncate to
    the smaller order of the two operands.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=None):
        if order < 0:
            raise JetError("truncation order must be nonnegative")
        coeffs = list(coeffs or [])
        if len(coeffs) > order + 1:
            raise JetError(f"{len(coeffs)} coefficients exceed order {order}")
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def constant(cls, order: int, value) -> "Jet":
        return cls(order, [value])

    @classmethod
    def epsilon(cls, order: int) -> "Jet":
        return cls(order, [Fraction(0), Fraction(1)])

    def coefficient(self, k: int):
        if not 0 <= k <= self.order:
            raise JetError(f"coefficient {k} outside truncation {self.order}")
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return all(_is_zero_coeff(c) for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return all(_d(self.coeffs[i], other.coeffs[i])
                       for i in range(n + 1))
        if isinstance(other, (int, float, Fraction)):
            return self == Jet.constant(self.order, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.order, tuple(repr(c) for c in self.coeffs)))

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(self.order, other)

    def __add__(self, other):
        other = self._lift(other)
        n = min(self.order, other.order)
        return Jet(n, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = None
            for i in range(k + 1):
                t = self.coeffs[i] * other.coeffs[k - i]
                acc = t if acc is None else acc + t
            out.append(acc)
        return Jet(n, out)

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if not (isinstance(m, int) and m >= 0):
            raise JetError("integer powers only; use jet_pow for fractional")
        out = Jet.constant(self.order, Fraction(1))
        for _ in range(m):
            out = out * self
        return out

    def __float__(self):
        return float(self.coeffs[0])

    def inv(self) -> "Jet":
        c0 = self.coeffs[0]
        if _is_zero_coeff(c0):
            raise JetError("jet with vanishing leading term is not invertible")
        b0 = _scalar_inv(c0)
        out = [b0]
        for k in range(1, self.order + 1):
            acc = None
            for i in range(1, k + 1):
                t = self.coeffs[i] * out[k - i]
                acc = t if acc is None else acc + t
            out.append(-b0 * acc)
        return Jet(self.order, out)

    def sqrt(self) -> "Jet":
        c0 = self.coeffs[0]
        if not isinstance(c0, (int, float, Fraction)) or c0 <= 0:
            raise JetError("jet square root needs a positive leading number")
        s0 = sqrt_scalar(c0)
        half = _scalar_inv(2 * s0)
        out = [s0]
        for k in range(1, self.order + 1):
            acc = self.coeffs[k]
            for i in range(1, k):
                acc = acc - out[i] * out[k - i]
            out.append(half * acc)
        return Jet(self.order, out)

    def __repr__(self):
        return f"Jet({self.order}, {self.coeffs!r})"


def _d(a, b) -> bool:
    try:
        return a == b
    except TypeError:
        return False


def _scalar_inv(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / Fraction(x)
    if isinstance(x, float):
        return 1.0 / x
    return x.inv()


def _binomial(a, i: int):
    out = Fraction(1)
    for t in range(i):
        out = out * (a - t) / (t + 1)
    return out


def jet_pow(j: Jet, exponent) -> Jet:
    """j**exponent by the binomial series; exact for rational exponents
    over leading coefficient 1 (the only case the recursion needs)."""
    if isinstance(exponent, int) and exponent >= 0:
        return j ** exponent
    exponent = Fraction(exponent)
    c0 = j.coeffs[0]
    if not isinstance(c0, (int, float, Fraction)) or c0 <= 0:
        raise JetError("fractional powers need a positive leading number")
    u = j * _scalar_inv(c0) - 1
    out = Jet.constant(j.order, Fraction(0))
    upow = Jet.constant(j.order, Fraction(1))
    for i in range(j.order + 1):
        out = out + _binomial(exponent, i) * upow
        upow = upow * u
    if c0 != 1:
        head = c0 ** exponent if exponent.denominator == 1 \
            else float(c0) ** float(exponent)
        out = out * head
    return out


# ------------------------------------------------- form-valued series

def lift_series(order: int, parts) -> Form:
    """Sum_i eps^i parts[i] as a single Form with jet coefficients.

    parts[i] is the order-i Form coefficient (entries may be None for
    zero).  All non-None parts must share dimension and degree.
    """
    shaped = [p for p in parts if p is not None]
    if not shaped:
        raise JetError("need at least one nonzero part")
    dim, degree = shaped[0].dim, shaped[0].degree
    jets: dict = {}
    for i, part in enumerate(parts):
        if part is None:
            continue
        if i > order:
            break
        for idx, c in part.terms.items():
            jets.setdefault(idx, [Fraction(0)] * (order + 1))[i] = c
    out = Form(dim, degree)
    out.terms = {idx: Jet(order, cs) for idx, cs in jets.items()}
    return out


def series_part(a, k: int):
    """Coefficient extraction at order k for jets and jet-coefficient
    forms alike (plain scalars and forms count as order-0 data)."""
    if isinstance(a, Jet):
        return a.coefficient(k)
    if isinstance(a, Form):
        return a.map_coeffs(lambda c: _coeff_of(c, k))
    return a if k == 0 else Fraction(0)


def _coeff_of(c, k: int):
    if isinstance(c, Jet):
        return c.coefficient(k)
    return c if k == 0 else Fraction(0)


# ------------------------------------------------- the nonlinear pieces

def hitchin_Qk(rho_list, k: int) -> Form:
    """Order-k nonlinear Taylor coefficient of the duality map.

    rho_list holds the degree-3 corrections of orders 1..k-1 (entries
    may be None); since the order-k coefficient of the dual of the
    series through order k-1 carries no linear term, it is exactly the
    nonlinear part.
    """
    if k < 1:
        raise JetError("orders start at 1")
    s = standard_su3()
    parts = [s.re_omega] + [rho_list[i] if i < len(rho_list) else None
                            for i in range(k - 1)]
    dual = hitchin_dual(lift_series(k, parts))
    return series_part(dual, k)


class SeriesState:
    """Per-order data of the power-series solve.

    Orders count from 1 with the seed (h_1, gamma_1, rho_1) =
    (0, connection form, first-order 3-form); `extend` appends the
    solution of the next order.  Derived quantities — the linearised
    duals, the nonlinear coefficients, the normalisation scalars — are
    computed on demand and cached.  `d` is the exterior derivative for
    whatever coefficient ring the forms use (polynomial fixtures pass
    the polynomial one).
    """

    def __init__(self, rho1: Form, theta: Form, d=None,
                 structure: SU3Structure | None = None):
        self.structure = structure or standard_su3()
        self.rho = [rho1]
        self.gamma = [theta]
        self.h = [Fraction(0)]
        self.d = d
        self._qk: dict = {}
        self._rho_hat: dict = {}
        self._alpha0: dict = {}

    @property
    def order(self) -> int:
        return len(self.rho)

    def extend(self, h_k, gamma_k: Form, rho_k: Form) -> None:
        self.rho.append(rho_k)
        self.gamma.append(gamma_k)
        self.h.append(h_k)

    # per-order accessors (1-based)
    def rho_k(self, k: int) -> Form:
        return self.rho[k - 1]

    def gamma_k(self, k: int) -> Form:
        return self.gamma[k - 1]

    def h_k(self, k: int):
        return self.h[k - 1]

    def rho_hat_k(self, k: int) -> Form:
        if k not in self._rho_hat:
            self._rho_hat[k] = linearized_dual(self.rho_k(k), self.structure)
        return self._rho_hat[k]

    def Q_k(self, k: int) -> Form:
        if k not in self._qk:
            self._qk[k] = hitchin_Qk(self.rho[:k - 1], k)
        return self._qk[k]

    def alpha0_k(self, k: int):
        if k not in self._alpha0:
            self._alpha0[k] = alpha0k(self, k)
        return self._alpha0[k]

    def h_jet(self, order: int) -> Jet:
        """1 + sum_k eps^k h_k truncated at the given order."""
        coeffs = [Fraction(1)] + [self.h[i] if i < len(self.h) else Fraction(0)
                                  for i in range(order)]
        return Jet(order, coeffs)

    def re_omega_series(self, order: int) -> Form:
        parts = [self.structure.re_omega] + self.rho[:order]
        return lift_series(order, parts)

    def im_omega_series(self, order: int) -> Form:
        return hitchin_dual(self.re_omega_series(order))

    def open_conditions(self, eps: float, point=None) -> dict:
        """Evaluate the truncated series at a numeric parameter value and
        report the two open conditions: the degree-3 truncation is still
        stable, and the scalar truncation is still positive.  Forms with
        polynomial coefficients are sampled at `point`."""
        h_val = 1.0 + sum(float(self.h[i]) * eps ** (i + 1)
                          for i in range(len(self.h)))
        re = self.structure.re_omega.map_coeffs(float)
        for i, r in enumerate(self.rho):
            if point is not None:
                from .polyforms import eval_form
                r = eval_form(r, point)
            re = re + r.map_coeffs(float).scale(eps ** (i + 1))
        lam = float(stability_invariant(re))
        return {"stable": lam < 0, "h_positive": h_val > 0,
                "stability_invariant": lam, "h_value": h_val}


def _volume_coeff(a: Form):
    top = tuple(range(a.dim))
    return a.terms.get(top, Fraction(0))


def alpha0k(state: SeriesState, k: int):
    """The unique scalar keeping the complex volume normalised at order k.

    Solves  a * Re0^Im0 + Re0^Q_k + sum_m rho_{k-m}^(rho_hat_m + Q_m) = 0
    for a; exact in whatever ring the coefficients live in.
    """
    s = state.structure
    re0, im0 = s.re_omega, s.im_omega
    acc = wedge(re0, state.Q_k(k))
    for m in range(1, k):
        other = state.rho_hat_k(m) + state.Q_k(m)
        acc = acc + wedge(state.rho_k(k - m), other)
    denom = _volume_coeff(wedge(re0, im0))
    num = _volume_coeff(acc)
    if isinstance(num, (int, Fraction)):
        return -Fraction(num) / Fraction(denom)
    return num * (-_scalar_inv(denom))


def alpha0k_residual(state: SeriesState, k: int) -> Form:
    """The 6-form whose vanishing defines the normalisation scalar,
    evaluated after substituting it back in — an exactness witness."""
    s = state.structure
    a = state.alpha0_k(k)
    acc = wedge(s.re_omega, s.im_omega).scale(a)
    acc = acc + wedge(s.re_omega, state.Q_k(k))
    for m in range(1, k):
        acc = acc + wedge(state.rho_k(k - m),
                          state.rho_hat_k(m) + state.Q_k(m))
    return acc


def rhs_assembly(state: SeriesState, k: int) -> dict:
    """Order-k right-hand sides of the linear step.

    Returns the 5-form source for the monopole-type row, the exact
    4-form sources for the two remaining rows, and the primitives whose
    exterior derivatives produce them (`alpha2 = -d(primitive2)`,
    `alpha3 = -d(primitive3)`).
    """
    if state.d is None:
        raise JetError("state needs an exterior derivative callback")
    if not 2 <= k <= state.order + 1:
        raise JetError(f"need orders 1..{k - 1} to assemble order {k}")
    d = state.d
    n = k - 1
    h14 = jet_pow(state.h_jet(n), Fraction(1, 4))
    h34 = jet_pow(state.h_jet(n), Fraction(3, 4))
    im_series = state.im_omega_series(n)
    re_series = state.re_omega_series(n)
    im_weighted = im_series.scale(h14)

    alpha1 = None
    prim2 = None
    prim3 = None
    for m in range(1, k):
        dtheta_m = d(state.gamma_k(m))
        piece = wedge(dtheta_m, series_part(im_weighted, k - m))
        alpha1 = piece if alpha1 is None else alpha1 + piece
        h34_m = h34.coefficient(m)
        h14_m = h14.coefficient(m)
        re_piece = series_part(re_series, k - m).scale(h34_m)
        im_piece = series_part(im_series, k - m).scale(h14_m)
        prim2 = re_piece if prim2 is None else prim2 + re_piece
        prim3 = im_piece if prim3 is None else prim3 + im_piece
    prim3 = prim3 + state.Q_k(k)
    return {"alpha1": alpha1,
            "alpha2": -d(prim2),
            "alpha3": -d(prim3),
            "primitive2": prim2,
            "primitive3": prim3}


def gauge_residuals(state: SeriesState, k: int) -> dict:
    """How far rho_k sits from its gauge slice: the coefficient along
    the real part must be half the normalisation scalar, and the
    imaginary-part and 1-form components must vanish."""
    gamma, lam, mu, _rho0 = decompose3(state.rho_k(k), state.structure)
    return {"re_coefficient_offset": lam - Fraction(1, 2) * state.alpha0_k(k),
            "im_coefficient": mu, "one_form": gamma}


def grid_sup_norm(a: Form, points) -> float:
    """Sup of the coefficient sup-norm over a sample grid — the concrete
    stand-in for a module norm when coefficients are polynomials."""
    from .polyforms import eval_form
    best = 0.0
    for pt in points:
        best = max(best, form_norm_sup(eval_form(a, pt)))
    return best


# ------------------------------------------------- majorant combinatorics

def multiindices(m: int, k: int):
    """All (i_1, ..., i_k) with sum i_j = m and sum j*i_j = k + 1."""
    if m < 1 or k < 1:
        raise ValueError("both arguments start at 1")
    out = []

    def rec(j, mass, weight, prefix):
        if j == k:
            if mass == 0 and weight == 0:
                out.append(tuple(prefix))
            return
        step = j + 1
        top = min(mass, weight // step)
        for i in range(top + 1):
            rec(j + 1, mass - i, weight - step * i, prefix + [i])

    rec(0, m, k + 1, [])
    return out


def exponent_condition(indices, nu) -> bool:
    """The weighted-norm bookkeeping for one multi-index: the first slot
    carries rate -1, the rest rate nu, and the product must not decay
    slower than rate nu."""
    m = sum(indices)
    i1 = indices[0] if indices else 0
    return -i1 + (m - i1) * nu <= nu


def majorant_coefficients(b, c, M: int):
    """A_k = (b/16c) c^k / k^2 for k = 1..M."""
    b, c = Fraction(b), Fraction(c)
    if b <= 0 or c <= 0:
        raise MajorantError("majorant parameters must be positive")
    return [b / (16 * c) * c ** k / k ** 2 for k in range(1, M + 1)]


def majorant_check(b, c, M: int) -> dict:
    """Verify [A(eps)^m]_k <= (b/c)^(m-1) A_k for 1 <= m, k <= M by
    exact convolution of the truncated series."""
    b, c = Fraction(b), Fraction(c)
    A = [Fraction(0)] + majorant_coefficients(b, c, M)
    power = list(A)
    ratio_bound = b / c
    worst = Fraction(0)
    failures = []
    for m in range(1, M + 1):
        if m > 1:
            power = _convolve(power, A, M)
        scale = ratio_bound ** (m - 1)
        for k in range(1, M + 1):
            lhs, rhs = power[k], scale * A[k]
            if lhs > rhs:
                failures.append((m, k, lhs, rhs))
            if rhs > 0:
                worst = max(worst, lhs / rhs)
    return {"holds": not failures, "max_ratio": worst, "failures": failures,
            "order": M}


def _convolve(p, q, M: int):
    out = [Fraction(0)] * (M + 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for j in range(0, M + 1 - i):
            if q[j]:
                out[i + j] += pi * q[j]
    return out


def mock_iterate(solver_bound, nonlinearity, rho1_norm, order: int,
                 embedding_bound=1, radius=None) -> dict:
    """Run the abstract norm recursion and certify it against the majorant.

    nonlinearity maps m >= 2 to the coefficient C_m bounding the
    nonlinear term of that degree (missing orders count as zero;
    `radius` optionally declares the radius of convergence of the full
    series, with 0 meaning nowhere convergent).  The first norm seeds
    b = 16*|phi_1|; c is the smallest power of two satisfying the
    closing inequality  solver*embedding*sum C_m (b/c)^(m-1) <= 1.
    Then  |phi_{k+1}| = solver*embedding*sum_m C_m sum_{I} prod |phi|^I
    is certified against A_k through the requested order.
    """
    C = Fraction(solver_bound)
    Q = Fraction(embedding_bound)
    if C <= 0 or Q <= 0:
        raise MajorantError("solver and embedding bounds must be positive")
    coeffs = {int(m): Fraction(v) for m, v in dict(nonlinearity).items()}
    if any(m < 2 for m in coeffs) or any(v < 0 for v in coeffs.values()):
        raise MajorantError("nonlinearity starts at degree 2, nonnegative")
    if radius is not None and Fraction(radius) <= 0:
        raise MajorantError(
            "nonlinearity series diverges everywhere; no admissible c")
    norm1 = Fraction(rho1_norm)
    if norm1 < 0:
        raise MajorantError("norms are nonnegative")

    b = 16 * norm1
    c = Fraction(1)
    if norm1 > 0:
        for _ in range(4096):
            closing = C * Q * sum(v * (b / c) ** (m - 1)
                                  for m, v in coeffs.items())
            if closing <= 1 and (radius is None or b / c < Fraction(radius)):
                break
            c *= 2
        else:
            raise MajorantError("no admissible majorant scale found")
    closing = C * Q * sum(v * (b / c) ** (m - 1) for m, v in coeffs.items())

    norms = [Fraction(0), norm1]
    for k in range(1, order):
        total = Fraction(0)
        for m, cm in coeffs.items():
            if cm == 0 or m > k + 1:
                continue
            for indices in multiindices(m, k):
                prod = Fraction(1)
                for j, ij in enumerate(indices, start=1):
                    if ij:
                        prod *= norms[j] ** ij
                total += cm * prod
        norms.append(C * Q * total)

    A = ([Fraction(0)] + majorant_coefficients(b, c, order)
         if norm1 > 0 else [Fraction(0)] * (order + 1))
    first_violation = None
    for k in range(1, order + 1):
        if norms[k] > A[k]:
            first_violation = k
            break
    return {"b": b, "c": c, "closing_value": closing,
            "norms": norms[1:], "majorant": A[1:],
            "certified": first_violation is None,
            "first_violation": first_violation}
