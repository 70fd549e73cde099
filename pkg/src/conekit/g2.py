"""Positive 3-forms on R^7 and the circle-invariant first-order systems.

The 7-dimensional substrate is B x R with coordinates (x1, y1, x2, y2, x3,
y3, t); the fiber direction is the last one, and every invariant object is
stored downstairs on B = R^6.  A connection form is theta = dt + a with a
pulled back from B.

Residual evaluators take pointwise derivative values as inputs; when a
genuine polynomial family is available the flat polynomial calculus supplies
those values exactly, which is how the equivalence suites are run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .forms import (Form, contract, form_inner, form_norm_sup, hodge, wedge,
                    wedge_power)
from .polyforms import Poly, const_coeffs, poly_codiff, poly_d
from .scalars import (Scalar, frac_pow, is_exact, is_positive_definite,
                      mat_det, scalar_close)
from .su3 import (DIM, SU3Structure, j_oneform_flat, standard_im_omega,
                  standard_omega, standard_re_omega, standard_su3)

DIM7 = 7
FIBER = 6  # 0-based index of the fiber coordinate


class NotPositiveError(ValueError):
    """3-form is outside the open orbit of positive forms."""


def embed6(a: Form) -> Form:
    """Pull a form on B = R^6 back to B x R (indices unchanged)."""
    if a.dim != DIM:
        raise ValueError("embed6 expects a form on R^6")
    f = Form(DIM7, a.degree)
    f.terms = dict(a.terms)
    return f


def restrict7(a: Form) -> tuple[Form, Form]:
    """Split a form on B x R as base + theta-flavored part: a = b0 + e7^b1,
    returning (b0, b1) downstairs (only valid for invariant forms, i.e. all
    of ours)."""
    b0 = Form(DIM, a.degree) if a.degree <= DIM else None
    terms0, terms1 = {}, {}
    for idx, c in a.terms.items():
        if FIBER in idx:
            rest = tuple(i for i in idx if i != FIBER)
            # e_I ^ e7 with e7 last: moving e7 to front costs (-1)^(len-1)
            sign = -1 if (len(idx) - 1) % 2 else 1
            terms1[rest] = c if sign == 1 else -c
        else:
            terms0[idx] = c
    out0 = Form(DIM, a.degree, terms0) if a.degree <= DIM else Form(DIM, DIM)
    out1 = Form(DIM, a.degree - 1, terms1) if a.degree >= 1 else Form(DIM, 0)
    return out0, out1


def _poly7(p) -> Poly:
    if not isinstance(p, Poly):
        return Poly.const(DIM7, p)
    return Poly(DIM7, {e + (0,): c for e, c in p.terms.items()})


def lift_to_product(a: Form) -> Form:
    """Pull a polynomial-coefficient form on B back to B x R: indices stay
    put, coefficients become t-independent polynomials upstairs."""
    if a.dim != DIM:
        raise ValueError("lift_to_product expects a form on R^6")
    return Form(DIM7, a.degree, {idx: _poly7(c) for idx, c in a.terms.items()})


def _drop_t(p) -> Poly:
    if not isinstance(p, Poly):
        return Poly.const(DIM, p)
    terms = {}
    for e, c in p.terms.items():
        if e[-1]:
            raise ValueError("unexpected t-dependence in an invariant slot")
        terms[e[:-1]] = c
    return Poly(DIM, terms)


def vector_wave_operator(f, gamma: Form) -> tuple[Poly, Form]:
    """Second-order operator on invariant vector fields through the flat
    product 3-form phi = dt ^ omega + re.

    X = gamma^sharp + f d/dt is contracted into phi, d*d of the resulting
    2-form is taken upstairs, and the vector-type component is read back
    through the pointwise pairing with the frame contractions e_a -| phi
    (an isometry up to the factor 3).  Returns the (function, one-form)
    slots downstairs, both exact polynomials.  Dropping the dt ^ (X . omega)
    leg of the contraction and working purely downstairs gives a different
    answer; the extra leg is essential.
    """
    if gamma.dim != DIM or gamma.degree != 1:
        raise ValueError("gamma must be a 1-form on R^6")
    phi = wedge(Form.basis(DIM7, FIBER), lift_to_product(_omega0_poly())) \
        + lift_to_product(_re0_poly())
    comps = [_poly7(gamma.coeff(i)) for i in range(DIM)] + [_poly7(f)]
    rough = poly_codiff(poly_d(contract(comps, phi)))
    slots = []
    for a in range(DIM7):
        frame = [Poly(DIM7, {}) for _ in range(DIM7)]
        frame[a] = Poly.const(DIM7, 1)
        slots.append(Fraction(1, 3) * form_inner(rough, contract(frame, phi)))
    one_form_terms = {}
    for i in range(DIM):
        q = _drop_t(slots[i])
        if q.terms:
            one_form_terms[(i,)] = q
    return _drop_t(slots[FIBER]), Form(DIM, 1, one_form_terms)


def g2_metric(phi: Form):
    """(metric, volume coefficient) from the determinant-normalized bilinear
    form 6*B_ij*e_{1..7} = (e_i . phi) ^ (e_j . phi) ^ phi.

    Raises NotPositiveError when the bilinear form is not positive definite
    (with positive determinant in the standard orientation).
    """
    if phi.dim != DIM7 or phi.degree != 3:
        raise ValueError("g2_metric expects a 3-form on R^7")
    n = DIM7
    full = tuple(range(n))
    contractions = []
    for i in range(n):
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        contractions.append(contract(v, phi))
    b = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = wedge(wedge(contractions[i], contractions[j]), phi).terms.get(
                full, Fraction(0))
            b[i][j] = c * Fraction(1, 6) if is_exact(c) else c / 6.0
            b[j][i] = b[i][j]
    det = mat_det(b)
    if float(det) <= 0 or not is_positive_definite(b):
        raise NotPositiveError("induced bilinear form is not positive definite")
    scale = frac_pow(det, Fraction(-1, 9))
    g = [[scale * b[i][j] for j in range(n)] for i in range(n)]
    vol_coeff = frac_pow(det, Fraction(1, 9))
    return g, vol_coeff


# -- circle-invariant assembly ---------------------------------------------------

@dataclass(frozen=True)
class ASData:
    """Pointwise data of a circle-invariant structure: an SU(3)-structure
    downstairs, a positive scalar h, and the connection form."""
    s: SU3Structure
    h: Scalar
    theta: Form                      # 1-form on B x R with theta(fiber) = 1
    dh: Form | None = None           # 1-form on B
    dtheta: Form | None = None       # curvature, 2-form on B

    def __post_init__(self):
        if float(self.h) <= 0:
            raise ValueError("h must be positive")
        if self.theta.dim != DIM7 or self.theta.degree != 1:
            raise ValueError("theta must be a 1-form on B x R")
        if self.theta.coeff(FIBER) != 1:
            raise ValueError("theta must evaluate to 1 on the fiber generator")


def assemble_s1_invariant(d: ASData) -> tuple[Form, Form]:
    """(phi, *phi) = (theta^omega + h^(3/4) re, -h^(1/4) theta^im + h/2 omega^2)."""
    h34 = frac_pow(d.h, Fraction(3, 4))
    h14 = frac_pow(d.h, Fraction(1, 4))
    omega7 = embed6(d.s.omega)
    phi = wedge(d.theta, omega7) + h34 * embed6(d.s.re_omega)
    star_phi = (-h14) * wedge(d.theta, embed6(d.s.im_omega)) \
        + (d.h * Fraction(1, 2) if is_exact(d.h) else d.h * 0.5) * embed6(
            wedge_power(d.s.omega, 2))
    return phi, star_phi


@dataclass(frozen=True)
class ASDerivatives:
    """Pointwise values of the exterior derivatives of the structure fields."""
    d_omega: Form      # 3-form on B
    d_re: Form         # 4-form on B
    d_im: Form         # 4-form on B
    dh: Form           # 1-form on B
    dtheta: Form       # 2-form on B


def as_residual(d: ASData, dv: ASDerivatives) -> tuple[Form, Form, Form, Form]:
    """Residuals of the four first-order equations of the invariant reduction:

    R1 = d omega
    R2 = d(h^(3/4) re) + dtheta ^ omega
    R3 = d(h^(1/4) im)
    R4 = (1/2) dh ^ omega^2 - h^(1/4) dtheta ^ im

    All four vanish exactly when the assembled 3-form is torsion-free.
    """
    s = d.s
    h14 = frac_pow(d.h, Fraction(1, 4))
    h34 = frac_pow(d.h, Fraction(3, 4))
    hm14 = frac_pow(d.h, Fraction(-1, 4))
    hm34 = frac_pow(d.h, Fraction(-3, 4))
    r1 = dv.d_omega
    r2 = (Fraction(3, 4) * hm14 if is_exact(hm14) else 0.75 * hm14) * wedge(dv.dh, s.re_omega) \
        + h34 * dv.d_re + wedge(dv.dtheta, s.omega)
    r3 = (Fraction(1, 4) * hm34 if is_exact(hm34) else 0.25 * hm34) * wedge(dv.dh, s.im_omega) \
        + h14 * dv.d_im
    r4 = Fraction(1, 2) * wedge(dv.dh, wedge_power(s.omega, 2)) \
        - h14 * wedge(dv.dtheta, s.im_omega)
    return r1, r2, r3, r4


def cy_monopole_residual(h: Scalar, dh: Form, dtheta: Form,
                         s: SU3Structure) -> tuple[Form, Form]:
    """Residual pair of the abelian monopole system on a Calabi-Yau base:
    (h^(-1/4) dh - *(dtheta ^ re), dtheta ^ omega^2)."""
    hm14 = frac_pow(h, Fraction(-1, 4))
    r1 = hm14 * dh - s.hodge(wedge(dtheta, s.re_omega))
    r2 = wedge(dtheta, wedge_power(s.omega, 2))
    return r1, r2


# -- modified (extended) system on the flat polynomial substrate -------------------

def _omega0_poly() -> Form:
    return const_coeffs(standard_omega())


def _re0_poly() -> Form:
    return const_coeffs(standard_re_omega())


def _im0_poly() -> Form:
    return const_coeffs(standard_im_omega())


def extended_as_residual(q: Poly, kappa: Form, u: Poly, v: Poly,
                         x_field: list[Poly]) -> tuple[Form, Form, Form]:
    """Residuals of the three equations of the modified invariant system on
    the flat substrate (structure forms constant, h = q^4 with q polynomial):

    E1 = d omega                                   (identically zero here)
    E2 = d(q^3 re) + kappa ^ omega - d(*d(u omega))
    E3 = d(q im)   - d(*d(X . re + v omega))

    The second-order correction is d of the Hodge dual of d (a 4-form), not
    the codifferential; the degrees of the equations force this reading.
    """
    w0, re0, im0 = _omega0_poly(), _re0_poly(), _im0_poly()
    dq = poly_d(Form(DIM, 0, {(): q}))
    e1 = Form(DIM, 3)
    e2 = wedge(Fraction(3) * (q * q) * dq, re0) + wedge(kappa, w0) \
        - poly_d(hodge(poly_d(u_times(w0, u))))
    e3 = wedge(dq, im0) - poly_d(hodge(poly_d(
        contract(x_field, re0) + u_times(w0, v))))
    return e1, e2, e3


def u_times(a: Form, p: Poly) -> Form:
    """Multiply every coefficient by a polynomial."""
    return a.map_coeffs(lambda c: p * c)


def modified_hypothesis_residual(q: Poly, kappa: Form) -> tuple[Form, Form]:
    """The two standing hypotheses: kappa ^ omega^2 = 0 and
    (1/2) d(q^4) ^ omega^2 = q kappa ^ im."""
    w0, im0 = _omega0_poly(), _im0_poly()
    dq = poly_d(Form(DIM, 0, {(): q}))
    h1 = wedge(kappa, wedge_power(w0, 2))
    h2 = wedge(Fraction(2) * (q * q * q) * dq, wedge_power(w0, 2)) \
        - wedge(u_times(kappa, q), im0)
    return h1, h2


# -- linearized five-equation system ------------------------------------------------

class AdmissibilityError(ValueError):
    """rho is not of the form (alpha0/2) re + primitive 12-type."""


def _check_rho_admissible(rho: Form, alpha0: Poly):
    w0, re0, im0 = _omega0_poly(), _re0_poly(), _im0_poly()
    if not wedge(rho, w0).is_zero():
        raise AdmissibilityError("rho has a nonzero 6-type part")
    if not wedge(rho, re0).is_zero():
        raise AdmissibilityError("rho has a nonzero im-type part")
    # *(rho ^ im0) = 4 lambda with lambda = alpha0/2: rho ^ im0 = 2 alpha0 vol
    six = wedge(rho, im0)
    want = Form(DIM, DIM, {tuple(range(DIM)): Fraction(2) * alpha0})
    if six != want:
        raise AdmissibilityError("rho's pure-type coefficient does not match alpha0/2")


def linearized_as_residual(h: Poly, gamma: Form, rho: Form, f1: Poly, f2: Poly,
                           x_field: list[Poly], alpha0: Poly, alpha1: Form,
                           alpha2: Form, alpha3: Form) -> tuple[Form, Form, Form, Form, Form]:
    """Residuals of the five linearized equations on the flat substrate:

    E1 = d* gamma
    E2 = d gamma ^ omega^2
    E3 = (1/2) dh ^ omega^2 - d gamma ^ im - alpha1
    E4 = d rho + (3/4) dh ^ re + d gamma ^ omega + d(*d(f1 omega)) - alpha2
    E5 = d rho-hat + (1/4) dh ^ im + d(*d(X . re + f2 omega)) - alpha3

    with rho-hat the linearized dual (alpha0/2) im - *(rho - (alpha0/2) re).
    """
    w0, re0, im0 = _omega0_poly(), _re0_poly(), _im0_poly()
    _check_rho_admissible(rho, alpha0)
    dh = poly_d(Form(DIM, 0, {(): h}))
    e1 = poly_codiff(gamma)
    e2 = wedge(poly_d(gamma), wedge_power(w0, 2))
    e3 = Fraction(1, 2) * wedge(dh, wedge_power(w0, 2)) - wedge(poly_d(gamma), im0) - alpha1
    e4 = poly_d(rho) + Fraction(3, 4) * wedge(dh, re0) + wedge(poly_d(gamma), w0) \
        + poly_d(hodge(poly_d(u_times(w0, f1)))) - alpha2
    rho12 = rho - u_times(re0, alpha0 * Fraction(1, 2))
    rho_hat = u_times(im0, alpha0 * Fraction(1, 2)) - hodge(rho12)
    e5 = poly_d(rho_hat) + Fraction(1, 4) * wedge(dh, im0) \
        + poly_d(hodge(poly_d(contract(x_field, re0) + u_times(w0, f2)))) - alpha3
    return e1, e2, e3, e4, e5
