"""Pointwise SU(3)-structure algebra on R^6.

Coordinates are ordered (x1, y1, x2, y2, x3, y3) = (e1..e6); the standard
Kahler form is e12 + e34 + e56.  The almost complex structure J is stored as
the endomorphism matrix on vectors (J dx_i^# = dy_i^#); on 1-forms J acts by
precomposition, (J gamma)(X) = gamma(JX), so J(dx_i) = -dy_i.  With that
reading every identity in the pointwise corpus holds verbatim; the companion
tests pin each sign against independent expansion.

The duality map for stable 3-forms follows the classical construction:
K_rho(v) = A((v . rho) ^ rho) with A : Lambda^5 ~ V x Lambda^6 the canonical
isomorphism, lambda(rho) = tr(K^2)/6 < 0 on the complex-type branch,
J = K/sqrt(-lambda), and rho-hat built by inserting J one slot at a time.
All of it works over any coefficient ring providing sqrt and inverse, which
is how the power-series layer reuses it verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .forms import (Form, contract, form_norm_sup, forms_close, hodge,
                    musical_flat, musical_sharp, wedge, wedge_power)
from .scalars import (DEFAULT_REL_TOL, Scalar, is_exact, is_positive_definite,
                      mat_inv, mat_mul, scalar_close, sqrt_scalar)

DIM = 6

STABILITY_REL_TOL = 1e-12


class StabilityError(ValueError):
    """Input 3-form is not on the complex-type stability branch."""


class StructureError(ValueError):
    """Input data does not define a valid SU(3)-structure."""


# -- model structure -----------------------------------------------------------

def _f(x) -> Fraction:
    return Fraction(x)


def standard_omega() -> Form:
    return Form(DIM, 2, {(0, 1): _f(1), (2, 3): _f(1), (4, 5): _f(1)})


def standard_re_omega() -> Form:
    # Re((dx1+i dy1)^(dx2+i dy2)^(dx3+i dy3))
    return Form(DIM, 3, {(0, 2, 4): _f(1), (0, 3, 5): _f(-1),
                         (1, 2, 5): _f(-1), (1, 3, 4): _f(-1)})


def standard_im_omega() -> Form:
    return Form(DIM, 3, {(1, 2, 4): _f(1), (0, 3, 4): _f(1),
                         (0, 2, 5): _f(1), (1, 3, 5): _f(-1)})


def standard_vol() -> Form:
    return Form(DIM, 6, {(0, 1, 2, 3, 4, 5): _f(1)})


# -- duality map for stable 3-forms ---------------------------------------------

def _ring_sqrt(x):
    if isinstance(x, (int, Fraction, float)):
        return sqrt_scalar(x)
    return x.sqrt()


def _ring_inv(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / Fraction(x)
    if isinstance(x, float):
        return 1.0 / x
    return x.inv()


def _basis_vector(i: int, n: int = DIM):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def kappa_matrix(rho: Form) -> list[list]:
    """K with K(v) = A((v . rho) ^ rho); columns indexed by basis vectors."""
    if rho.dim != DIM or rho.degree != 3:
        raise ValueError("duality map needs a 3-form in dimension 6")
    n = DIM
    full = tuple(range(n))
    cols = []
    for a in range(n):
        zeta = wedge(contract(_basis_vector(a), rho), rho)
        col = []
        for i in range(n):
            comp = full[:i] + full[i + 1:]
            c = zeta.terms.get(comp, Fraction(0))
            col.append(c if i % 2 == 0 else -c)
        cols.append(col)
    return [[cols[a][b] for a in range(n)] for b in range(n)]


def stability_invariant(rho: Form) -> Scalar:
    """lambda(rho) = tr(K^2)/6; negative exactly on the complex-type branch."""
    k = kappa_matrix(rho)
    n = DIM
    tr = None
    for a in range(n):
        for b in range(n):
            t = k[a][b] * k[b][a]
            tr = t if tr is None else tr + t
    return tr * Fraction(1, 6)


def _insert_j(rho: Form, j: list[list]) -> Form:
    """(1/3) sum_a e^a ^ (J e_a . rho): inserts J once into each slot, averaged."""
    n = rho.dim
    out = Form(n, rho.degree)
    for a in range(n):
        jv = [j[b][a] for b in range(n)]
        piece = wedge(Form(n, 1, {(a,): Fraction(1)}), contract(jv, rho))
        out = out + piece
    return out.scale(Fraction(1, 3))


def hitchin_data(rho: Form):
    """(K, lambda, J, rho_hat) for a stable complex-type 3-form."""
    k = kappa_matrix(rho)
    lam = stability_invariant(rho)
    if isinstance(lam, (int, Fraction)):
        if lam >= 0:
            raise StabilityError(f"stability invariant {lam} >= 0")
    else:
        scale = form_norm_sup(rho) ** 4
        if float(lam) >= -STABILITY_REL_TOL * scale:
            raise StabilityError(f"stability invariant {lam} not negative enough")
    q = _ring_sqrt(-lam)
    qinv = _ring_inv(q)
    j = [[k[i][jx] * qinv for jx in range(DIM)] for i in range(DIM)]
    rho_hat = _insert_j(rho, j)
    return k, lam, j, rho_hat


def hitchin_dual(rho: Form) -> Form:
    """The 3-form completing rho to a complex volume form.

    Normalized so that the dual of the standard real part is the standard
    imaginary part; degree-1 homogeneous; raises StabilityError off the
    complex-type branch.
    """
    return hitchin_data(rho)[3]


# -- the structure -------------------------------------------------------------

@dataclass(frozen=True)
class SU3Structure:
    omega: Form
    re_omega: Form
    im_omega: Form
    j: list[list]          # endomorphism on vectors, J^2 = -id
    g: list[list]          # metric, g = omega(., J.)
    vol: Form              # omega^3 / 6
    exact: bool

    def hodge(self, a: Form) -> Form:
        return hodge(a, self.g)

    def j_vector(self, v):
        return [sum(self.j[i][k] * v[k] for k in range(DIM)) for i in range(DIM)]

    def j_oneform(self, gamma: Form) -> Form:
        """(J gamma)(X) = gamma(JX)."""
        if gamma.degree != 1:
            raise ValueError("J acts on 1-forms here")
        comps = [gamma.coeff(i) for i in range(DIM)]
        out = {}
        for i in range(DIM):
            c = sum(self.j[k][i] * comps[k] for k in range(DIM))
            out[(i,)] = c
        return Form(DIM, 1, out)

    def sharp(self, gamma: Form):
        return musical_sharp(gamma, self.g)

    def flat(self, v) -> Form:
        return musical_flat(v, self.g)


def _omega_matrix(omega: Form) -> list[list]:
    w = [[Fraction(0)] * DIM for _ in range(DIM)]
    for (i, jx), c in omega.terms.items():
        w[i][jx] = c
        w[jx][i] = -c
    return w


def su3_structure(omega: Form, re_omega: Form, im_omega: Form | None = None,
                  rel_tol: float = DEFAULT_REL_TOL) -> SU3Structure:
    """Build and validate an SU(3)-structure from its defining forms.

    When im_omega is omitted it is derived from re_omega via the duality map.
    Raises StructureError if the compatibility or normalization constraints
    fail, or if the induced bilinear form is not positive definite.
    """
    if omega.dim != DIM or omega.degree != 2:
        raise StructureError("omega must be a 2-form in dimension 6")
    if re_omega.dim != DIM or re_omega.degree != 3:
        raise StructureError("re_omega must be a 3-form in dimension 6")
    try:
        _, lam, j, rho_hat = hitchin_data(re_omega)
    except StabilityError as e:
        raise StructureError(str(e)) from e
    if im_omega is None:
        im_omega = rho_hat

    w = _omega_matrix(omega)
    g = mat_mul(w, j)
    if not is_positive_definite(g):
        # duality-map J is orientation-normalized; the metric fixes the sign
        j = [[-x for x in row] for row in j]
        g = mat_mul(w, j)
        if not is_positive_definite(g):
            raise StructureError("omega(. , J.) is not positive definite")

    exact = all(is_exact(c) for f in (omega, re_omega, im_omega)
                for c in f.terms.values()) and all(
                    is_exact(x) for row in j for x in row)

    def close(a: Form, b: Form) -> bool:
        if exact:
            return a == b
        return forms_close(a, b, rel_tol=rel_tol, abs_tol=1e-9 * max(
            form_norm_sup(a), form_norm_sup(b), 1.0))

    zero4 = Form(DIM, 5)
    if not close(wedge(omega, re_omega), zero4):
        raise StructureError("omega ^ re_omega != 0")
    vol = wedge_power(omega, 3).scale(Fraction(1, 6))
    quarter = wedge(re_omega, im_omega).scale(Fraction(1, 4))
    if not close(vol, quarter):
        raise StructureError("normalization (1/6) omega^3 = (1/4) re^im fails")
    vc = vol.terms.get(tuple(range(DIM)), Fraction(0))
    if float(vc) <= 0:
        raise StructureError("omega^3 does not induce the positive orientation")

    jj = mat_mul(j, j)
    for i in range(DIM):
        for k in range(DIM):
            want = -1 if i == k else 0
            if not scalar_close(jj[i][k], want, rel_tol=rel_tol, abs_tol=1e-9):
                raise StructureError("J^2 != -id")

    return SU3Structure(omega=omega, re_omega=re_omega, im_omega=im_omega,
                        j=j, g=g, vol=vol, exact=exact)


def standard_su3() -> SU3Structure:
    return su3_structure(standard_omega(), standard_re_omega(), standard_im_omega())


def validate_su3(s: SU3Structure) -> bool:
    try:
        su3_structure(s.omega, s.re_omega, s.im_omega)
        return True
    except StructureError:
        return False


# -- type decompositions ---------------------------------------------------------

def _top_coeff(a: Form) -> Scalar:
    """Coefficient of a 6-form against the standard volume basis element."""
    return a.terms.get(tuple(range(DIM)), Fraction(0))


def _scalar_star(s: SU3Structure, a: Form) -> Scalar:
    """* of a 6-form: coefficient against the structure volume form."""
    vc = _top_coeff(s.vol)
    return _top_coeff(a) * _ring_inv(vc) if not isinstance(vc, float) else _top_coeff(a) / vc


def decompose2(sigma: Form, s: SU3Structure):
    """sigma = lam*omega + X . re_omega + sigma0 with sigma0 primitive (1,1).

    Returns (lam, X, sigma0) with X a vector (component list).
    """
    if sigma.dim != DIM or sigma.degree != 2:
        raise ValueError("decompose2 expects a 2-form in dimension 6")
    lam = _scalar_star(s, wedge(sigma, wedge_power(s.omega, 2))) * Fraction(1, 6)
    xb = s.hodge(wedge(sigma, s.im_omega)).scale(Fraction(-1, 2))
    x = s.sharp(xb)
    sigma0 = sigma - lam * s.omega - contract(x, s.re_omega)
    return lam, x, sigma0


def decompose3(rho: Form, s: SU3Structure):
    """rho = gamma^omega + lam*re_omega + mu*im_omega + rho0 with rho0 in the
    primitive 12-dimensional type.

    Returns (gamma, lam, mu, rho0).
    """
    if rho.dim != DIM or rho.degree != 3:
        raise ValueError("decompose3 expects a 3-form in dimension 6")
    lam = _scalar_star(s, wedge(rho, s.im_omega)) * Fraction(1, 4)
    mu = _scalar_star(s, wedge(rho, s.re_omega)) * Fraction(-1, 4)
    gamma = s.j_oneform(s.hodge(wedge(rho, s.omega))).scale(Fraction(1, 2))
    rho0 = rho - wedge(gamma, s.omega) - lam * s.re_omega - mu * s.im_omega
    return gamma, lam, mu, rho0


def linearized_dual(rho: Form, s: SU3Structure) -> Form:
    """Derivative of the duality map at the structure's real volume form:
    *rho on the 6- and (1+1)-type pieces, -*rho on the primitive 12-type."""
    gamma, lam, mu, rho0 = decompose3(rho, s)
    nice = wedge(gamma, s.omega) + lam * s.re_omega + mu * s.im_omega
    return s.hodge(nice) - s.hodge(rho0)


# -- torsion classes -------------------------------------------------------------

@dataclass(frozen=True)
class TorsionClasses:
    w1: Scalar
    w1_hat: Scalar
    w2: Form
    w2_hat: Form
    w3: Form
    w4: Form
    w5: Form


@dataclass(frozen=True)
class TorsionConsistency:
    """Mismatch between the redundant extractions; identically zero on data
    coming from a genuine structure."""
    w1_mismatch: Scalar
    w1_hat_mismatch: Scalar
    w5_mismatch: Form

    def max_abs(self) -> float:
        m = max(abs(float(self.w1_mismatch)), abs(float(self.w1_hat_mismatch)))
        return max(m, form_norm_sup(self.w5_mismatch))

    def is_zero(self) -> bool:
        return (self.w1_mismatch == 0 and self.w1_hat_mismatch == 0
                and self.w5_mismatch.is_zero())


def primitive_11_basis(s: SU3Structure) -> list[Form]:
    """A basis of the primitive (1,1) 2-forms (8-dimensional)."""
    cand = []
    for i in range(DIM):
        for jx in range(i + 1, DIM):
            _, _, sigma0 = decompose2(Form.basis(DIM, i, jx), s)
            if not sigma0.is_zero():
                cand.append(sigma0)
    # row reduction to pick 8 independent ones
    keys = sorted({idx for f in cand for idx in f.terms})
    rows, basis = [], []
    for f in cand:
        vec = [f.terms.get(k, Fraction(0)) for k in keys]
        exact = all(is_exact(v) for v in vec)
        red = vec[:]
        for pivot_row, pivot_col in rows:
            fac = red[pivot_col]
            if fac != 0:
                red = [a - fac * b for a, b in zip(red, pivot_row)]
        if exact:
            nz = next((i for i, v in enumerate(red) if v != 0), None)
        else:
            scale = max((abs(float(v)) for v in vec), default=0.0)
            nz, best = None, 1e-9 * max(scale, 1.0)
            for i, v in enumerate(red):
                if abs(float(v)) > best:
                    nz, best = i, abs(float(v))
        if nz is None:
            continue
        inv = 1.0 / red[nz] if isinstance(red[nz], float) else Fraction(1) / Fraction(red[nz])
        red = [v * inv for v in red]
        rows.append((red, nz))
        basis.append(f)
        if len(basis) == 8:
            break
    if len(basis) != 8:
        raise StructureError("failed to build the primitive (1,1) basis")
    return basis


def _solve_in_basis(target: Form, columns: list[Form]):
    """Coordinates of target in a basis of Lambda^k given as a form list."""
    from itertools import combinations
    keys = list(combinations(range(DIM), columns[0].degree))
    if len(keys) != len(columns):
        raise ValueError("spanning set does not match the ambient dimension")
    mat = [[col.terms.get(k, Fraction(0)) for col in columns] for k in keys]
    rhs = [target.terms.get(k, Fraction(0)) for k in keys]
    inv = mat_inv(mat)
    return [sum(inv[i][jx] * rhs[jx] for jx in range(len(rhs))) for i in range(len(columns))]


def _extract_4form(psi: Form, s: SU3Structure, middle: Form):
    """Coordinates of a 4-form over {omega^2} + {e^a ^ middle} + {sigma_b ^ omega}.

    Returns (c_top, one_form, primitive_two_form): psi = c_top*omega^2 +
    one_form^middle + primitive^omega.
    """
    columns = [wedge_power(s.omega, 2)]
    for a in range(DIM):
        columns.append(wedge(Form.basis(DIM, a), middle))
    p11 = primitive_11_basis(s)
    for b in p11:
        columns.append(wedge(b, s.omega))
    coords = _solve_in_basis(psi, columns)
    c_top = coords[0]
    one = Form(DIM, 1, {(a,): coords[1 + a] for a in range(DIM)})
    prim = Form(DIM, 2)
    for cb, b in zip(coords[7:], p11):
        prim = prim + cb * b
    return c_top, one, prim


def torsion_classes(s: SU3Structure, d_omega: Form, d_re: Form, d_im: Form):
    """Extract the five torsion classes from pointwise derivative values.

    d_omega = 3 w1 re + 3 w1_hat im + w3 + w4 ^ omega;
    d_re    = 2 w1_hat omega^2 + w5 ^ re + w2 ^ omega;
    d_im    = -2 w1  omega^2 + w5 ^ im + w2_hat ^ omega.

    Returns (TorsionClasses, TorsionConsistency); the consistency part
    vanishes identically when the inputs really are the derivatives of a
    single SU(3)-structure family.
    """
    w4, lam3, mu3, w3 = decompose3(d_omega, s)
    w1 = lam3 * Fraction(1, 3)
    w1_hat = mu3 * Fraction(1, 3)

    c_re, w5_re, w2 = _extract_4form(d_re, s, s.re_omega)
    c_im, w5_im, w2_hat = _extract_4form(d_im, s, s.im_omega)
    w1_hat_re = c_re * Fraction(1, 2)
    w1_im = c_im * Fraction(-1, 2)

    classes = TorsionClasses(w1=w1, w1_hat=w1_hat, w2=w2, w2_hat=w2_hat,
                             w3=w3, w4=w4, w5=w5_re)
    consistency = TorsionConsistency(
        w1_mismatch=w1 - w1_im,
        w1_hat_mismatch=w1_hat - w1_hat_re,
        w5_mismatch=w5_re - w5_im,
    )
    return classes, consistency


# -- flat differential operators ---------------------------------------------------

def _standard_j_matrix() -> list[list]:
    j = [[Fraction(0)] * DIM for _ in range(DIM)]
    for m in range(3):
        j[2 * m + 1][2 * m] = Fraction(1)
        j[2 * m][2 * m + 1] = Fraction(-1)
    return j


STANDARD_J = _standard_j_matrix()


def j_oneform_flat(gamma: Form) -> Form:
    """Standard-structure J on (possibly polynomial) 1-forms."""
    out = {}
    for i in range(DIM):
        acc = None
        for k in range(DIM):
            c = STANDARD_J[k][i]
            if c == 0:
                continue
            t = gamma.coeff(k) if c == 1 else -gamma.coeff(k)
            acc = t if acc is None else acc + t
        if acc is not None:
            out[(i,)] = acc
    return Form(DIM, 1, out)


def su3_curl(gamma: Form) -> Form:
    """curl gamma = *(d gamma ^ re_omega0) for polynomial 1-forms, flat structure."""
    from .polyforms import poly_d, const_coeffs
    if gamma.degree != 1 or gamma.dim != DIM:
        raise ValueError("curl expects a 1-form in dimension 6")
    re0 = const_coeffs(standard_re_omega())
    return hodge(wedge(poly_d(gamma), re0))


def dirac_forms(f, g, gamma: Form):
    """Form-level Dirac operator on the flat standard structure:
    (u, v, alpha) = (d*gamma, d*(J gamma), curl gamma + df - J dg).

    With J acting on 1-forms by precomposition this is the unique sign choice
    (given the binding case (x1, 0, 0) -> (0, 0, dx1)) under which the square
    is the Hodge Laplacian componentwise; the middle slot's traditional minus
    sign belongs to the opposite J convention.
    """
    from .polyforms import Poly, poly_codiff, poly_d
    if not isinstance(f, Poly) or not isinstance(g, Poly):
        raise ValueError("f and g must be polynomials")
    u = poly_codiff(gamma)
    v = poly_codiff(j_oneform_flat(gamma))
    df = poly_d(Form(DIM, 0, {(): f}))
    dg = poly_d(Form(DIM, 0, {(): g}))
    alpha = su3_curl(gamma) + df - j_oneform_flat(dg)
    return u, v, alpha
