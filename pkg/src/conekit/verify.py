"""Self-check matrix: the structural identities the package leans on, run
as a deterministic battery of randomized and pinned checks.

Every row draws from its own `random.Random(f"{seed}:{tag}")`, so results
do not depend on row order or on how many workers run the matrix.  Exact
mode keeps all arithmetic in Fractions; float mode re-runs the rows that
have a binary64 variant with tolerance-based comparison on top of the
exact core.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .forms import (Form, contract, form_inner, forms_close, hodge, wedge,
                    wedge_power)
from .polyforms import (Poly, const_coeffs, eval_form, euler_vector,
                        poly_codiff, poly_d, poly_form, poly_laplacian)
from .scalars import mat_mul, mat_transpose
from .su3 import (decompose2, decompose3, dirac_forms, j_oneform_flat,
                  standard_im_omega, standard_omega, standard_re_omega,
                  standard_su3, su3_curl, su3_structure, torsion_classes)
from .g2 import (ASData, ASDerivatives, as_residual, assemble_s1_invariant,
                 cy_monopole_residual, g2_metric, lift_to_product,
                 vector_wave_operator, DIM7, FIBER)
from .cone import (ClassifyError, ConeForm, EigenformSymbol,
                   cart_to_cone, classify_homogeneous_harmonic, cone_codiff,
                   cone_d, cone_laplacian, link_codiff, link_d,
                   link_laplacian, link_star, link_wedge,
                   reconstruct_partner, sasaki_einstein_structure,
                   se_residual, su2_wedge_residuals, volume_form)
from .indicial import (LinkSpectralData, SpectralLine, WindowOnRootError,
                       OutsideTableError, closed_coclosed_dim,
                       dirac_kernel_cone, harmonic_form_dim, index_jump,
                       indicial_set, rate_candidates)
from .topology import (cAp_model, integer_kernel_of_row, kp1p1_bundles,
                       kp1p1_model, l2_cohomology)
from .series import (Jet, SeriesState, alpha0k_residual, exponent_condition,
                     hitchin_Qk, jet_pow, majorant_check,
                     majorant_coefficients, mock_iterate, multiindices,
                     rhs_assembly)

DIM = 6


class VerifyError(AssertionError):
    """A matrix row found a broken identity."""


class _Ctx:
    def __init__(self, mode: str, tolerance: float, rng: random.Random):
        self.mode = mode
        self.tolerance = tolerance
        self.rng = rng
        self.checks = 0

    def check(self, cond, msg: str):
        if not cond:
            raise VerifyError(msg)
        self.checks += 1

    def close(self, a: Form, b: Form, msg: str):
        self.check(forms_close(a, b, rel_tol=self.tolerance), msg)


_ROWS: list[tuple[str, object]] = []


def _row(tag: str):
    def deco(fn):
        _ROWS.append((tag, fn))
        return fn
    return deco


def row_tags() -> list[str]:
    return [tag for tag, _ in _ROWS]


# ------------------------------------------------------------ random builders

def _rand_frac(rng, lo=-6, hi=6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def _rand_scalar_form(rng, n, k) -> Form:
    out = Form(n, k)
    idxs = list(range(n))
    terms = {}
    for _ in range(rng.randint(1, 6)):
        pick = tuple(sorted(rng.sample(idxs, k))) if k else ()
        terms[pick] = _rand_frac(rng)
    return Form(n, k, terms)


def _rand_poly(rng, nv=DIM, deg=3, terms=5) -> Poly:
    p = Poly(nv, {})
    for _ in range(terms):
        e = [0] * nv
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(nv)] += 1
        p = p + Poly(nv, {tuple(e): Fraction(rng.randint(-3, 3))})
    return p


def _rand_poly_form(rng, n, k, deg=3) -> Form:
    idxs = list(range(n))
    terms = {}
    for _ in range(rng.randint(1, 5)):
        pick = tuple(sorted(rng.sample(idxs, k))) if k else ()
        terms[pick] = _rand_poly(rng, n, deg)
    return Form(n, k, terms)


def _rand_metric(rng, n):
    """Exact SPD matrix with a perfect-square determinant (g = A^T A)."""
    while True:
        a = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            a[i][i] += Fraction(rng.randint(2, 3))
        g = mat_mul(mat_transpose(a), a)
        try:
            hodge(Form.scalar(n, 1), g)
        except Exception:
            continue
        return g


def _rand_vec(rng, n=DIM):
    return [_rand_frac(rng) for _ in range(n)]


def _vec_form(v, n=DIM) -> Form:
    return Form(n, 1, {(i,): c for i, c in enumerate(v) if c != 0})


def _lap0(f: Poly) -> Poly:
    out = poly_laplacian(Form(DIM, 0, {(): f}))
    return out.terms.get((), Poly(DIM, {}))


def _random_spectrum(rng, tag: str) -> LinkSpectralData:
    b2 = rng.randrange(0, 5)
    lines = [SpectralLine(0, "function",
                          rng.choice([rng.randrange(6, 40),
                                      Fraction(rng.randrange(25, 160), 4)]),
                          rng.randrange(1, 4))]
    nkd = rng.randrange(0, 3)
    if nkd:
        lines.append(SpectralLine(1, "coexact", 8, nkd,
                                  frozenset({"killing-dual"})))
    lines.append(SpectralLine(1, "coexact", rng.randrange(9, 40),
                              rng.randrange(1, 4)))
    lines.append(SpectralLine(2, "coexact", rng.randrange(5, 40),
                              rng.randrange(1, 4)))
    return LinkSpectralData(name=tag, regular=True, not_round_sphere=True,
                            betti=[1, 0, b2, b2, 0, 1], lines=lines)


# ------------------------------------------------------------------ the rows

@_row("forms.inner-wedge-pairing")
def _row_inner_wedge(ctx: _Ctx):
    rng = ctx.rng
    for _ in range(24):
        n = rng.choice([3, 4, 5, 6])
        k = rng.randint(0, n)
        g = _rand_metric(rng, n)
        a = _rand_scalar_form(rng, n, k)
        b = _rand_scalar_form(rng, n, k)
        vol = hodge(Form.scalar(n, 1), g)
        lhs = wedge(a, hodge(b, g))
        ctx.check(lhs == form_inner(a, b, g) * vol,
                  f"<a,b> vol != a ^ *b at n={n} k={k}")
        ctx.check(lhs == wedge(b, hodge(a, g)),
                  f"pairing not symmetric at n={n} k={k}")


@_row("forms.double-star-sign")
def _row_double_star(ctx: _Ctx):
    rng = ctx.rng
    for n in range(2, 8):
        for k in range(0, n + 1):
            a = _rand_scalar_form(rng, n, k)
            sign = Fraction(-1) if (k * (n - k)) % 2 else Fraction(1)
            ctx.check(hodge(hodge(a)) == sign * a,
                      f"euclidean ** sign wrong at n={n} k={k}")
        g = _rand_metric(rng, n)
        k = rng.randint(0, n)
        a = _rand_scalar_form(rng, n, k)
        sign = Fraction(-1) if (k * (n - k)) % 2 else Fraction(1)
        ctx.check(hodge(hodge(a, g), g) == sign * a,
                  f"metric ** sign wrong at n={n} k={k}")


@_row("polyforms.nilpotency")
def _row_nilpotency(ctx: _Ctx):
    rng = ctx.rng
    for _ in range(60):
        n = rng.choice([2, 3, 6, 7])
        k = rng.randint(0, n)
        a = _rand_poly_form(rng, n, k)
        ctx.check(poly_d(poly_d(a)).is_zero(), f"d d != 0 at n={n} k={k}")
        ctx.check(poly_codiff(poly_codiff(a)).is_zero(),
                  f"d* d* != 0 at n={n} k={k}")


@_row("su3.flat-musical-star")
def _row_musical_star(ctx: _Ctx):
    w2 = wedge_power(standard_omega(), 2)
    rng = ctx.rng
    for _ in range(40):
        gam = _vec_form(_rand_vec(rng))
        ctx.check(hodge(gam) == Fraction(-1, 2) * wedge(j_oneform_flat(gam), w2),
                  "*gamma != -(1/2) J gamma ^ omega^2")
    for _ in range(10):
        gam = _rand_poly_form(rng, DIM, 1)
        w2p = const_coeffs(w2)
        ctx.check(hodge(gam) == Fraction(-1, 2) * wedge(j_oneform_flat(gam), w2p),
                  "polynomial *gamma != -(1/2) J gamma ^ omega^2")
    if ctx.mode == "float":
        for _ in range(50):
            gam = _vec_form([rng.uniform(-2, 2) for _ in range(DIM)])
            ctx.close(hodge(gam),
                      Fraction(-1, 2) * wedge(j_oneform_flat(gam), w2),
                      "float 1-form star identity")


@_row("su3.pure-type-star-table")
def _row_star_table(ctx: _Ctx):
    s = standard_su3()
    w, re, im = s.omega, s.re_omega, s.im_omega
    w2 = wedge_power(w, 2)
    ctx.check(s.hodge(w) == Fraction(1, 2) * w2, "*omega != omega^2/2")
    ctx.check(s.hodge(Fraction(1, 2) * w2) == w, "*(omega^2/2) != omega")
    ctx.check(s.hodge(re) == im, "*re != im")
    ctx.check(s.hodge(im) == Fraction(-1) * re, "*im != -re")
    rng = ctx.rng
    for _ in range(40):
        x = _rand_vec(rng)
        xb = _vec_form(x)
        xre = contract(x, re)
        ctx.check(s.hodge(xre) == wedge(xb, im), "*(X . re) != X^flat ^ im")
        ctx.check(s.hodge(xre) == wedge(j_oneform_flat(xb), re),
                  "*(X . re) != J X^flat ^ re")
        lam, xv, sig0 = decompose2(_rand_scalar_form(rng, DIM, 2), s)
        ctx.check(s.hodge(sig0) == Fraction(-1) * wedge(sig0, w),
                  "*sigma0 != -sigma0 ^ omega")
        ctx.check(s.hodge(wedge(sig0, w)) == Fraction(-1) * sig0,
                  "*(sigma0 ^ omega) != -sigma0")
        gam = _vec_form(_rand_vec(rng))
        ctx.check(s.hodge(wedge(gam, w)) ==
                  Fraction(-1) * wedge(j_oneform_flat(gam), w),
                  "*(gamma ^ omega) != -J gamma ^ omega")
    if ctx.mode == "float":
        for _ in range(60):
            x = [rng.uniform(-2, 2) for _ in range(DIM)]
            xb = _vec_form(x)
            ctx.close(s.hodge(contract(x, re)), wedge(xb, im),
                      "float *(X . re) identity")


@_row("su3.primitive-2form-equivalence")
def _row_primitive2(ctx: _Ctx):
    s = standard_su3()
    w, re = s.omega, s.re_omega
    w2 = wedge_power(w, 2)
    rng = ctx.rng
    for _ in range(40):
        sig = _rand_scalar_form(rng, DIM, 2)
        lam, x, sig0 = decompose2(sig, s)
        ctx.check(wedge(sig0, w2).is_zero(), "sigma0 ^ omega^2 != 0")
        ctx.check(wedge(sig0, re).is_zero(), "sigma0 ^ re != 0")
        ctx.check(s.hodge(sig0) == Fraction(-1) * wedge(sig0, w),
                  "primitive part fails the star characterization")
        star_says = s.hodge(sig) == Fraction(-1) * wedge(sig, w)
        type_says = lam == 0 and all(c == 0 for c in x)
        ctx.check(star_says == type_says,
                  "star characterization disagrees with type decomposition")


@_row("su3.primitive-3form-equivalence")
def _row_primitive3(ctx: _Ctx):
    s = standard_su3()
    w, re, im = s.omega, s.re_omega, s.im_omega
    rng = ctx.rng
    for _ in range(40):
        rho = _rand_scalar_form(rng, DIM, 3)
        gam, lam, mu, rho0 = decompose3(rho, s)
        ctx.check(wedge(rho0, w).is_zero(), "rho0 ^ omega != 0")
        ctx.check(wedge(rho0, re).is_zero(), "rho0 ^ re != 0")
        ctx.check(wedge(rho0, im).is_zero(), "rho0 ^ im != 0")
        wedge_says = (wedge(rho, w).is_zero() and wedge(rho, re).is_zero()
                      and wedge(rho, im).is_zero())
        type_says = gam.is_zero() and lam == 0 and mu == 0
        ctx.check(wedge_says == type_says,
                  "wedge tests disagree with the 3-form decomposition")


@_row("su3.flat-codiff-identities")
def _row_codiff_identities(ctx: _Ctx):
    rng = ctx.rng
    w0 = const_coeffs(standard_omega())
    re0 = const_coeffs(standard_re_omega())
    for _ in range(12):
        f = _rand_poly(rng)
        df = poly_d(Form(DIM, 0, {(): f}))
        ctx.check(poly_codiff(w0.map_coeffs(lambda c: f * c))
                  == j_oneform_flat(df), "d*(f omega) != J df")
        x = [_rand_poly(rng) for _ in range(DIM)]
        xb = Form(DIM, 1, {(i,): x[i] for i in range(DIM)})
        ctx.check(poly_codiff(contract(x, re0))
                  == j_oneform_flat(su3_curl(xb)),
                  "d*(X . re) != J curl X^flat")
    def _poly0(a: Form) -> Poly:
        c = a.terms.get((), Poly(DIM, {}))
        return c if isinstance(c, Poly) else Poly.const(DIM, c)

    for _ in range(8):
        f, g = _rand_poly(rng), _rand_poly(rng)
        gam = _rand_poly_form(rng, DIM, 1)
        u, v, alpha = dirac_forms(f, g, gam)
        uu, vv, aa = dirac_forms(_poly0(u), _poly0(v), alpha)
        ctx.check(_poly0(uu) == _lap0(f), "dirac^2 f slot != laplacian")
        ctx.check(_poly0(vv) == _lap0(g), "dirac^2 g slot != laplacian")
        ctx.check(aa == poly_laplacian(gam), "dirac^2 1-form slot != laplacian")


@_row("su3.twelve-type-wave")
def _row_twelve_type(ctx: _Ctx):
    rng = ctx.rng
    re0 = const_coeffs(standard_re_omega())
    im0 = const_coeffs(standard_im_omega())
    w0 = const_coeffs(standard_omega())
    for _ in range(10):
        x = [_rand_poly(rng) for _ in range(DIM)]
        wave = hodge(poly_d(contract(x, re0))) - poly_d(contract(x, im0))
        ctx.check(wedge(wave, w0).is_zero(), "wave ^ omega != 0")
        ctx.check(wedge(wave, re0).is_zero(), "wave ^ re != 0")
        ctx.check(wedge(wave, im0).is_zero(), "wave ^ im != 0")


@_row("su3.laplacian-projections")
def _row_laplacian_projections(ctx: _Ctx):
    rng = ctx.rng
    w2 = const_coeffs(wedge_power(standard_omega(), 2))
    for _ in range(6):
        g = _rand_poly(rng)
        a = poly_d(poly_codiff(w2.map_coeffs(lambda c: Fraction(1, 2) * g * c)))
        lam = Fraction(1, 12) * form_inner(a, w2)
        ctx.check(lam == Fraction(1, 3) * _lap0(g),
                  "pure-type part of dd*(g omega^2 / 2) != (1/3) lap g omega^2")
    for _ in range(4):
        f = _rand_poly(rng, deg=2)
        gam = _rand_poly_form(rng, DIM, 1, deg=2)
        fs, gs = vector_wave_operator(f, gam)
        ctx.check(fs == Fraction(2, 3) * _lap0(f),
                  "wave operator function slot != (2/3) laplacian")
        want = poly_d(poly_codiff(gam)) \
            + Fraction(2, 3) * poly_codiff(poly_d(gam))
        ctx.check(gs == want, "wave operator 1-form slot != dd* + (2/3) d*d")
    fs, gs = vector_wave_operator(_rand_poly(rng), Form(DIM, 1))
    ctx.check(gs.is_zero(), "pure function input leaks into the 1-form slot")
    fs, gs = vector_wave_operator(Poly(DIM, {}), _rand_poly_form(rng, DIM, 1))
    ctx.check(not fs.terms, "pure 1-form input leaks into the function slot")


@_row("su3.torsion-consistency")
def _row_torsion(ctx: _Ctx):
    rng = ctx.rng
    w0, re0, im0 = standard_omega(), standard_re_omega(), standard_im_omega()
    for _ in range(6):
        lam_poly = Poly.const(DIM, Fraction(rng.randint(2, 5)))
        for i in range(DIM):
            lam_poly = lam_poly + Fraction(rng.randint(-1, 1), 4) * Poly.var(DIM, i)
        dlam = poly_d(Form(DIM, 0, {(): lam_poly}))
        for _ in range(2):
            p = [Fraction(rng.randint(-1, 1), 2) for _ in range(DIM)]
            lv = lam_poly.eval(p)
            if lv <= 0:
                continue
            s = su3_structure(lv ** 2 * w0, lv ** 3 * re0, lv ** 3 * im0)
            dl = eval_form(dlam, p)
            dw = 2 * lv * wedge(dl, w0)
            dre = 3 * lv ** 2 * wedge(dl, re0)
            dim_ = 3 * lv ** 2 * wedge(dl, im0)
            tc, cons = torsion_classes(s, dw, dre, dim_)
            ctx.check(tc.w1 == 0 and tc.w1_hat == 0, "conformal family has w1")
            ctx.check(tc.w2.is_zero() and tc.w2_hat.is_zero(),
                      "conformal family has w2")
            ctx.check(tc.w3.is_zero(), "conformal family has w3")
            ctx.check(tc.w4 == Fraction(2) / lv * dl, "w4 != 2 dlam / lam")
            ctx.check(tc.w5 == Fraction(3) / lv * dl, "w5 != 3 dlam / lam")
            ctx.check(cons.is_zero(), "consistency residual nonzero")


@_row("g2.torsion-free-equivalence")
def _row_g2_equivalence(ctx: _Ctx):
    rng = ctx.rng
    s = standard_su3()
    w0 = const_coeffs(standard_omega())
    re0 = const_coeffs(standard_re_omega())
    im0 = const_coeffs(standard_im_omega())
    om7 = lift_to_product(w0)
    re7 = lift_to_product(re0)
    im7 = lift_to_product(im0)
    zero3, zero4 = Form(DIM, 3), Form(DIM, 4)

    def family(t_poly: Poly, a: Form):
        t7 = Poly(DIM7, {e + (0,): c for e, c in t_poly.terms.items()})
        theta7 = Form.basis(DIM7, FIBER) + lift_to_product(a)
        phi = wedge(theta7, om7) \
            + re7.map_coeffs(lambda c: t7 * t7 * t7 * c)
        t4 = t7 * t7 * t7 * t7
        sphi = Fraction(-1) * wedge(theta7, im7).map_coeffs(lambda c: t7 * c) \
            + wedge(om7, om7).map_coeffs(lambda c: Fraction(1, 2) * t4 * c)
        dphi, dsphi = poly_d(phi), poly_d(sphi)
        h_poly = t_poly ** 4
        dh = poly_d(Form(DIM, 0, {(): h_poly}))
        dth = poly_d(a)
        for _ in range(2):
            p = [Fraction(rng.randint(-1, 1), 2) for _ in range(DIM)]
            h_val = h_poly.eval(p)
            a_pt = eval_form(a, p)
            theta_terms = {(FIBER,): Fraction(1)}
            for i in range(DIM):
                c = a_pt.coeff(i)
                if c != 0:
                    theta_terms[(i,)] = c
            theta_pt = Form(DIM7, 1, theta_terms)
            data = ASData(s, h_val, theta_pt, eval_form(dh, p),
                          eval_form(dth, p))
            dv = ASDerivatives(zero3, zero4, zero4, eval_form(dh, p),
                               eval_form(dth, p))
            res = as_residual(data, dv)
            res_zero = all(r.is_zero() for r in res)
            q7 = p + [Fraction(rng.randint(0, 1))]
            closed = (eval_form(dphi, q7).is_zero()
                      and eval_form(dsphi, q7).is_zero())
            ctx.check(res_zero == closed,
                      "first-order residual does not match d phi = d *phi = 0")

    one = Poly.const(DIM, Fraction(1))
    family(one, Form(DIM, 1))                                  # torsion-free
    fexact = _rand_poly(rng, deg=2)
    family(one, poly_d(Form(DIM, 0, {(): fexact})))            # flat gauge
    for _ in range(18):
        t = Poly.const(DIM, Fraction(4))
        if rng.random() < 0.8:
            for i in range(DIM):
                t = t + Fraction(rng.randint(-1, 1)) * Poly.var(DIM, i)
        a = _rand_poly_form(rng, DIM, 1, deg=2) if rng.random() < 0.8 \
            else Form(DIM, 1)
        family(t, a)


@_row("g2.star-phi-metric-consistency")
def _row_g2_star_metric(ctx: _Ctx):
    s = standard_su3()
    rng = ctx.rng
    theta0 = Form.basis(DIM7, FIBER)
    phi0, sphi0 = assemble_s1_invariant(ASData(s, Fraction(1), theta0))
    g, vol = g2_metric(phi0)
    ctx.check(hodge(phi0, g) == sphi0, "flat *phi mismatch")
    ctx.check(all(g[i][j] == (1 if i == j else 0) for i in range(DIM7)
                  for j in range(DIM7)), "flat metric is not the identity")
    count = 400 if ctx.mode == "float" else 60
    for _ in range(count):
        h = rng.uniform(0.2, 3.0)
        terms = {(FIBER,): Fraction(1)}
        for i in range(DIM):
            terms[(i,)] = rng.uniform(-1, 1)
        theta = Form(DIM7, 1, terms)
        phi, sphi = assemble_s1_invariant(ASData(s, h, theta))
        g, vol = g2_metric(phi)
        ctx.close(hodge(phi, g), sphi, "*_g phi != assembled star form")


@_row("g2.monopole-curvature-pairing")
def _row_monopole(ctx: _Ctx):
    s = standard_su3()
    w0 = standard_omega()
    kappa = Form.basis(DIM, 0, 1) - Form.basis(DIM, 2, 3)   # primitive (1,1)
    ctx.check(cy_monopole_residual(Fraction(1), s.hodge(wedge(kappa, s.re_omega)),
                                   kappa, s)[0].is_zero(),
              "matched monopole data leaves a first-equation residual")
    ctx.check(cy_monopole_residual(Fraction(1), Form(DIM, 1), kappa, s)[1].is_zero(),
              "primitive curvature fails the volume equation")
    rho = Fraction(1, 4) * contract(euler_vector(DIM),
                                    const_coeffs(hodge(kappa)))
    ctx.check(poly_d(rho) == const_coeffs(Fraction(-1) * wedge(kappa, w0)),
              "d rho != -kappa ^ omega for the radial potential")
    ctx.check((wedge(const_coeffs(kappa), const_coeffs(w0)) + poly_d(rho)).is_zero(),
              "curvature pairing d theta ^ omega + d rho != 0")
    rng = ctx.rng
    for _ in range(10):
        dth = _rand_scalar_form(rng, DIM, 2)
        lam, x, sig0 = decompose2(dth, s)
        r1, r2 = cy_monopole_residual(Fraction(1), Form(DIM, 1), dth, s)
        ctx.check(r2.is_zero() == (lam == 0),
                  "volume residual does not detect the trace part")


@_row("cone.link-hodge-table")
def _row_link_star(ctx: _Ctx):
    se = sasaki_einstein_structure()
    alg = se.algebra
    ctx.check(link_star(alg.word("1")) == Fraction(1, 2) * alg.word("eta.w1.w1"),
              "*1 wrong")
    ctx.check(link_star(alg.word("eta")) == Fraction(1, 2) * alg.word("w1.w1"),
              "*eta wrong")
    for i in (1, 2, 3):
        ctx.check(link_star(alg.word(f"w{i}")) == alg.word(f"eta.w{i}"),
                  f"*w{i} wrong")
        ctx.check(link_star(alg.word(f"eta.w{i}")) == alg.word(f"w{i}"),
                  f"*(eta.w{i}) wrong")
    ctx.check(link_star(alg.word("w1.w1")) == 2 * alg.word("eta"),
              "*w1^2 wrong")
    sig = alg.declare(EigenformSymbol("sig", 2, "generic", primitive=True))
    ctx.check(link_star(alg.word("1", "sig")) == -1 * alg.word("eta", "sig"),
              "*sigma != -eta.sigma")
    ctx.check(link_star(alg.word("eta", "sig")) == -1 * alg.word("1", "sig"),
              "*(eta.sigma) != -sigma")
    for r in su2_wedge_residuals(se):
        ctx.check(r.is_zero(), "SE wedge residual nonzero")
    res = se_residual(se)
    ctx.check(all(r.is_zero() for r in res.residuals), "SE residual nonzero")
    ctx.check(res.scal == 20, "SE scalar curvature != 20")
    ctx.check(volume_form(se) == Fraction(1, 2) * alg.word("eta.w1.w1"),
              "volume form wrong")


@_row("cone.branch-pair-reconstruction")
def _row_branch_pairs(ctx: _Ctx):
    rng = ctx.rng
    n = DIM
    for trial in range(16):
        k = rng.randint(1, 3)
        branch = rng.choice(["ii", "iii"])
        lam = Fraction(rng.randint(1, 9), rng.choice([1, 2]))
        if branch == "ii":
            mu = (lam + k) * (lam + n - k)
        else:
            mu = (lam + k - 2) * (lam + n - k - 2)
        if mu <= 0:
            continue
        alg = sasaki_einstein_structure().algebra
        cd = Fraction(rng.randint(1, 3))
        alg.declare(EigenformSymbol("a", k - 1, "coexact", mu=mu,
                                    d_to=("b", cd)))
        alg.declare(EigenformSymbol("b", k, "exact", mu=mu,
                                    codiff_to=("a", mu / cd)))
        c = Fraction(rng.randint(1, 4))
        y = reconstruct_partner(lam, k, n, branch, c, cd)
        comps = classify_homogeneous_harmonic(
            lam, k, n, [(c, "a")], [(y, "b")], alg)
        ctx.check(len(comps) == 1 and comps[0].type_tag == branch,
                  f"branch {branch} not recovered")
        g = ConeForm(n, k, lam, alg.word("1", "a", c), alg.word("1", "b", y))
        A, B = cone_laplacian(g)
        ctx.check(len(A) == 1 and A[0].is_zero() and B[0].is_zero(),
                  "reconstructed pair is not harmonic")
        bad = y + 1
        try:
            classify_homogeneous_harmonic(lam, k, n, [(c, "a")],
                                          [(bad, "b")], alg)
            ctx.check(False, "mismatched pair accepted")
        except ClassifyError:
            ctx.checks += 1
    # degenerate rate: both branch systems coincide on a middle-degree pair
    alg = sasaki_einstein_structure().algebra
    lam, k = Fraction(-2), 3
    mu = (lam + k) * (lam + n - k)
    alg.declare(EigenformSymbol("a", k - 1, "coexact", mu=mu, d_to=("b", 1)))
    alg.declare(EigenformSymbol("b", k, "exact", mu=mu,
                                codiff_to=("a", mu)))
    y = Fraction(lam + k)
    comps = classify_homogeneous_harmonic(lam, k, n, [(1, "a")], [(y, "b")], alg)
    ctx.check(comps[0].type_tag == "ii=iii", "degenerate tag missing")


def _declare_star_pair(alg, name: str, other: str, degree: int, kind: str,
                       **kw):
    """Declare an eigenform whose link star is `other` (coefficient one both
    ways: ** = 1 in odd dimension five)."""
    alg.declare(EigenformSymbol(name, degree, kind,
                                star_to=(other, Fraction(1)), **kw))


def _declare_branch_family(alg, k: int, mu, cd):
    """Coexact/exact eigenpair (a, b) with d a = cd b, plus the images of
    both under the link star so the hodge route stays computable."""
    ccd = mu / cd
    sgn = Fraction(-1) if k % 2 else Fraction(1)
    _declare_star_pair(alg, "a", "as", k - 1, "coexact", mu=mu,
                       d_to=("b", cd))
    _declare_star_pair(alg, "b", "bs", k, "exact", mu=mu,
                       codiff_to=("a", ccd))
    _declare_star_pair(alg, "as", "a", 6 - k, "exact", mu=mu,
                       codiff_to=("bs", sgn * cd))
    _declare_star_pair(alg, "bs", "b", 5 - k, "coexact", mu=mu,
                       d_to=("as", sgn * ccd))


@_row("cone.flag-table")
def _row_flag_table(ctx: _Ctx):
    rng = ctx.rng
    n = DIM
    # branch pairs: closed and coclosed for (ii), neither for (iii)
    for trial in range(12):
        k = rng.randint(1, 3)
        kind = rng.choice(["ii", "iii"])
        lam = Fraction(rng.randint(1, 8))
        if kind == "ii":
            mu = (lam + k) * (lam + n - k)
        else:
            mu = (lam + k - 2) * (lam + n - k - 2)
        if mu <= 0:
            continue
        alg = sasaki_einstein_structure().algebra
        cd = Fraction(rng.randint(1, 3))
        _declare_branch_family(alg, k, mu, cd)
        y = reconstruct_partner(lam, k, n, kind, Fraction(1), cd)
        comps = classify_homogeneous_harmonic(lam, k, n, [(1, "a")],
                                              [(y, "b")], alg)
        for comp in comps:
            g = ConeForm(n, k, lam, comp.alpha, comp.beta)
            ctx.check(cone_d(g).is_zero() == comp.closed,
                      f"type {comp.type_tag}: closed flag wrong")
            ctx.check(cone_codiff(g).is_zero() == comp.coclosed,
                      f"type {comp.type_tag}: coclosed flag wrong")
    # harmonic flavors of (i) and (iv) live at the rates killing mu
    for k in (1, 2, 3):
        for lam in (Fraction(2 - k), Fraction(k - n)):
            alg = sasaki_einstein_structure().algebra
            _declare_star_pair(alg, "h", "hs", k - 1, "harmonic")
            _declare_star_pair(alg, "hs", "h", 6 - k, "harmonic")
            comps = classify_homogeneous_harmonic(lam, k, n, [(1, "h")],
                                                  [], alg)
            g = ConeForm(n, k, lam, comps[0].alpha, comps[0].beta)
            ctx.check(comps[0].type_tag == "i", "harmonic dr-part not type i")
            ctx.check(cone_d(g).is_zero() == comps[0].closed,
                      "type i closed flag wrong")
            ctx.check(cone_codiff(g).is_zero() == comps[0].coclosed,
                      f"type i coclosed flag wrong at rate {lam}")
        for lam in (Fraction(-k), Fraction(k + 2 - n)):
            alg = sasaki_einstein_structure().algebra
            _declare_star_pair(alg, "h", "hs", k, "harmonic")
            _declare_star_pair(alg, "hs", "h", 5 - k, "harmonic")
            comps = classify_homogeneous_harmonic(lam, k, n, [],
                                                  [(1, "h")], alg)
            g = ConeForm(n, k, lam, comps[0].alpha, comps[0].beta)
            ctx.check(comps[0].type_tag == "iv", "harmonic link-part not type iv")
            ctx.check(cone_d(g).is_zero() == comps[0].closed,
                      f"type iv closed flag wrong at rate {lam}")
            ctx.check(cone_codiff(g).is_zero() == comps[0].coclosed,
                      "type iv coclosed flag wrong")


@_row("cone.cartesian-laplacian-oracle")
def _row_cart_oracle(ctx: _Ctx):
    rng = ctx.rng
    done = 0
    while done < 30:
        n = rng.choice([2, 3, 6])
        k = rng.randint(0, min(2, n))
        deg = rng.randint(1, 3)
        terms = {}
        idxs = list(range(n))
        for _ in range(rng.randint(1, 3)):
            pick = tuple(sorted(rng.sample(idxs, k))) if k else ()
            mono = [0] * n
            for _ in range(deg):
                mono[rng.randrange(n)] += 1
            terms[pick] = Poly(n, {tuple(mono): Fraction(rng.randint(-3, 3))})
        gamma = Form(n, k, terms)
        if gamma.is_zero():
            continue
        cone_rep = cart_to_cone(gamma, n)
        A, B = cone_laplacian(cone_rep)
        lap = poly_laplacian(gamma)
        ctx.check(len(A) == 1, "log terms appeared in a plain laplacian")
        if lap.is_zero():
            ctx.check(A[0].is_zero() and B[0].is_zero(),
                      "cone laplacian nonzero on a harmonic form")
        else:
            want = cart_to_cone(lap, n)
            ctx.check(want.rate == cone_rep.rate - 2,
                      "laplacian changed the homogeneity rate")
            ctx.check(A[0] == want.alpha and B[0] == want.beta,
                      "cone laplacian disagrees with the cartesian one")
        done += 1
    # surface roots come in plus/minus pairs: the harmonic polynomials
    # realize +m, and flipping the rate of the same link data realizes -m
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    zm = Poly.const(2, 1)
    for m in range(1, 5):
        re_part = Poly(2, {})
        for i in range(0, m + 1, 2):
            sign = Fraction(-1) if (i // 2) % 2 else Fraction(1)
            re_part = re_part + sign * math.comb(m, i) * (x ** (m - i)) * (y ** i)
        g = cart_to_cone(Form(2, 0, {(): re_part}), 2)
        ctx.check(g.rate == m, "harmonic polynomial has the wrong rate")
        A, B = cone_laplacian(g)
        ctx.check(A[0].is_zero() and B[0].is_zero(), "+m root fails")
        gneg = ConeForm(2, 0, -m, g.alpha, g.beta)
        A, B = cone_laplacian(gneg)
        ctx.check(A[0].is_zero() and B[0].is_zero(), "-m root fails")


@_row("indicial.quadratic-root-symmetry")
def _row_root_symmetry(ctx: _Ctx):
    rng = ctx.rng
    offsets = {"i": lambda n, k: (k - 2, n - k),
               "ii": lambda n, k: (k, n - k),
               "iii": lambda n, k: (k - 2, n - k - 2),
               "iv": lambda n, k: (n - k - 2, k)}
    for _ in range(120):
        n = rng.randint(3, 8)
        k = rng.randint(0, n)
        branch = rng.choice(["i", "ii", "iii", "iv"])
        a, b = offsets[branch](n, k)
        lam1 = Fraction(rng.randint(3, 12), rng.choice([1, 2]))
        mu = (lam1 + a) * (lam1 + b)
        if mu < 0:
            continue
        roots = rate_candidates(n, k, branch, mu)
        ctx.check(roots == {lam1, -(a + b) - lam1},
                  f"roots of {branch} at n={n} k={k} wrong")
        ctx.check(sum(roots) == -(a + b), "root sum != -(a+b)")
    for _ in range(40):
        n = rng.randint(3, 8)
        k = rng.randint(1, n - 1)
        lam1 = Fraction(rng.randint(3, 12))
        mu = (lam1 + k) * (lam1 + n - k)
        if mu <= 0:
            continue
        rii = rate_candidates(n, k, "ii", mu)
        riii = rate_candidates(n, k, "iii", mu)
        ctx.check({2 - n - r for r in rii} == riii,
                  "branch pair not exchanged by the rate reflection")


@_row("indicial.laplacian-duality")
def _row_lap_duality(ctx: _Ctx):
    rng = ctx.rng
    for t in range(20):
        S = _random_spectrum(rng, f"dual{t}")
        lams = [Fraction(rng.randint(-13, 9), 2) for _ in range(4)] \
            + [Fraction(0), Fraction(-4), Fraction(-2)]
        for k in range(0, 7):
            for lam in lams:
                ctx.check(harmonic_form_dim(S, 6, k, lam)
                          == harmonic_form_dim(S, 6, k, -4 - lam),
                          f"duality fails at k={k} lam={lam}")
        for lam in lams:
            ctx.check(harmonic_form_dim(S, 6, 6, lam)
                      == harmonic_form_dim(S, 6, 0, -4 - lam),
                      "top degree is not dual to functions")


@_row("indicial.regular-middle-gap")
def _row_middle_gap(ctx: _Ctx):
    rng = ctx.rng
    for t in range(400):
        S = _random_spectrum(rng, f"gap{t}")
        b2 = S.betti[2]
        inside = indicial_set("laplacian_2", S,
                              (Fraction(-39, 10), Fraction(-1, 10)))
        if b2:
            ctx.check([(r.lam, r.multiplicity, r.log_order) for r in inside]
                      == [(Fraction(-2), 2 * b2, 1)],
                      "interior 2-form roots beyond the topological one")
        else:
            ctx.check(inside == [], "unexpected interior 2-form root")
        lam = Fraction(rng.randint(-41, -1), 7)
        if lam != -2:
            ctx.check(closed_coclosed_dim(S, 6, 2, lam) == 0,
                      f"closed-coclosed 2-forms at generic rate {lam}")
        ctx.check(index_jump("laplacian_2", S, Fraction(-21, 10),
                             Fraction(-19, 10)) == 2 * b2,
                  "index jump across the middle rate != 2 b2")
    S = _random_spectrum(rng, "gap-parity")
    b2 = S.betti[2]
    even = sum(closed_coclosed_dim(S, 6, k, -2) for k in (0, 2, 4, 6))
    odd = sum(closed_coclosed_dim(S, 6, k, -3) for k in (1, 3, 5))
    ctx.check(even == 2 * b2, "even-parity count at -2 != 2 b2")
    ctx.check(odd == 2 * b2, "odd-parity count at -3 != 2 b2")


@_row("indicial.dirac-gap")
def _row_dirac_gap(ctx: _Ctx):
    rng = ctx.rng
    for t in range(60):
        S = _random_spectrum(rng, f"dirac{t}")
        ctx.check(dirac_kernel_cone(S, 0).dimension == 2, "dirac at 0 != 2")
        ctx.check(dirac_kernel_cone(S, -5).dimension == 2, "dirac at -5 != 2")
        for _ in range(4):
            lam = Fraction(rng.randint(-34, -1), 7)
            ctx.check(dirac_kernel_cone(S, lam).dimension == 0,
                      f"dirac kernel in the gap at {lam}")
    S = _random_spectrum(rng, "dirac-window")
    try:
        indicial_set("dirac", S, (-6, -1))
        ctx.check(False, "window beyond the table accepted")
    except OutsideTableError:
        ctx.checks += 1
    try:
        indicial_set("dirac", S, (-5, Fraction(-1, 2)))
        ctx.check(False, "window endpoint on a root accepted")
    except WindowOnRootError:
        ctx.checks += 1


@_row("topology.euler-characteristic")
def _row_euler(ctx: _Ctx):
    for p in range(1, 21):
        fam = cAp_model(p)
        total = fam.total_space_betti
        end = fam.end_bundle_betti
        ctx.check(sum((-1) ** k * b for k, b in enumerate(total)) == 0,
                  f"chi of the total space != 0 at p={p}")
        ctx.check(sum((-1) ** k * b for k, b in enumerate(end)) == 0,
                  f"chi of the end bundle != 0 at p={p}")
    for m, n in ((1, 1), (2, 1), (3, 2), (1, 3)):
        from .topology import gysin_betti
        out = gysin_betti(kp1p1_model(), kp1p1_bundles(m, n, 1)["spec"])
        ctx.check(sum((-1) ** k * b for k, b in enumerate(out)) == 0,
                  f"chi != 0 for the ({m},{n}) bundle")


@_row("topology.admissible-lattice-closure")
def _row_lattice(ctx: _Ctx):
    rng = ctx.rng
    for _ in range(40):
        n = rng.randint(2, 4)
        v = [rng.randint(-9, 9) for _ in range(n)]
        basis = integer_kernel_of_row(v)
        want_rank = n if all(x == 0 for x in v) else n - 1
        ctx.check(len(basis) == want_rank, "kernel rank wrong")
        for col in basis:
            ctx.check(sum(v[i] * col[i] for i in range(n)) == 0,
                      "kernel vector not annihilated")
            g = 0
            for x in col:
                g = math.gcd(g, abs(x))
            ctx.check(g == 1, "kernel basis vector not primitive")
        if len(basis) >= 2:
            s = [basis[0][i] + basis[1][i] for i in range(n)]
            ctx.check(sum(v[i] * s[i] for i in range(n)) == 0,
                      "lattice not closed under addition")
    hits = 0
    for m in range(-6, 7):
        for n_ in range(-6, 7):
            if m == 0 or n_ == 0 or math.gcd(abs(m), abs(n_)) != 1:
                continue
            rep = kp1p1_bundles(m, n_, Fraction(3, 2))
            ctx.check(rep["admissible"] == (m * n_ > 0),
                      f"admissibility wrong at ({m},{n_})")
            ctx.check((rep["pairing_value"] == 0) == (m * n_ > 0),
                      f"pairing zero-set wrong at ({m},{n_})")
            hits += 1
    ctx.check(hits > 40, "sweep too small")


@_row("topology.family-table")
def _row_family_table(ctx: _Ctx):
    for p in range(1, 21):
        fam = cAp_model(p)
        ctx.check(fam.total_space_betti == (1, 0, p - 1, p, 0, 0, 0, 0),
                  f"total space betti wrong at p={p}")
        ctx.check(fam.end_bundle_betti == (1, 0, p - 1, 2 * p, p - 1, 0, 1),
                  f"end bundle betti wrong at p={p}")
        ctx.check(fam.link_description == f"#{p}(S^2 x S^3)",
                  "link description wrong")
        ctx.check(f"z^{p + 1}" in fam.equation and f"w^{p + 1}" in fam.equation,
                  "defining equation wrong")
        w = Fraction(3 * (p + 1), 4)
        ctx.check(fam.reeb_weights == (w, w, Fraction(3, 2), Fraction(3, 2)),
                  "reeb weights wrong")


@_row("topology.l2-poincare")
def _row_l2(ctx: _Ctx):
    models = [kp1p1_model()] + [cAp_model(p).model for p in (1, 2, 5, 9)]
    for model in models:
        dims = l2_cohomology(model)
        for k in range(7):
            ctx.check(dims[k] == dims[6 - k],
                      f"L2 duality broken at k={k} for {model.name}")
    ctx.check(l2_cohomology(kp1p1_model()) == [0, 0, 1, 0, 1, 0, 0],
              "canonical-bundle L2 table wrong")


@_row("series.jet-ring")
def _row_jet_ring(ctx: _Ctx):
    rng = ctx.rng
    for _ in range(10):
        o = rng.randint(2, 5)
        a = Jet(o, [_rand_frac(rng) for _ in range(o + 1)])
        b = Jet(o, [_rand_frac(rng) for _ in range(o + 1)])
        c = Jet(o, [_rand_frac(rng) for _ in range(o + 1)])
        ctx.check((a + b) * c == a * c + b * c, "distributivity fails")
        ctx.check(a * b == b * a, "commutativity fails")
        ctx.check((a * b) * c == a * (b * c), "associativity fails")
        if a.coeffs[0] != 0:
            ctx.check(a * a.inv() == Jet.constant(o, Fraction(1)),
                      "inverse fails")
        sq = a * a
        if a.coeffs[0] > 0:
            ctx.check(sq.sqrt() == a or sq.sqrt() == -a, "sqrt fails")
    h1, h2 = Fraction(3, 7), Fraction(-2, 5)
    j = Jet(2, [Fraction(1), h1, h2])
    p = jet_pow(j, Fraction(3, 4))
    ctx.check(p.coefficient(1) == Fraction(3, 4) * h1,
              "first fractional-power coefficient wrong")
    ctx.check(p.coefficient(2)
              == Fraction(3, 4) * h2 - Fraction(3, 32) * h1 * h1,
              "second fractional-power coefficient wrong")
    ctx.check(jet_pow(j, Fraction(1, 4)) * jet_pow(j, Fraction(3, 4)) == j,
              "fractional powers do not add")


@_row("series.qk-locality")
def _row_qk(ctx: _Ctx):
    rng = ctx.rng
    ctx.check(hitchin_Qk([], 1).is_zero(), "Q1 != 0")
    rhos = [_rand_scalar_form(rng, DIM, 3) for _ in range(4)]
    t = Fraction(5, 3)
    for k in range(2, 5):
        qk = hitchin_Qk(rhos[:k - 1], k)
        scaled = [t ** (j + 1) * rhos[j] for j in range(k - 1)]
        ctx.check(hitchin_Qk(scaled, k) == t ** k * qk,
                  f"Q_{k} is not weighted-homogeneous of degree {k}")
    state = SeriesState(_rand_scalar_form(rng, DIM, 3), Form(DIM, 1))
    for k in range(2, 4):
        state.extend(_rand_frac(rng), Form(DIM, 1),
                     _rand_scalar_form(rng, DIM, 3))
    for k in range(1, 5):
        ctx.check(alpha0k_residual(state, k).is_zero(),
                  f"normalisation residual at order {k}")
    ctx.check(multiindices(2, 3) == [(0, 2, 0), (1, 0, 1)],
              "multiindex table at (2,3) wrong")
    ctx.check(multiindices(2, 1) == [(2,)], "multiindex table at (2,1) wrong")
    for k in range(1, 8):
        ctx.check(multiindices(1, k) == [], f"I(1,{k}) should be empty")
    nu = Fraction(-3, 2)
    for m in range(2, 6):
        for idx in multiindices(m, 3):
            lhs = -idx[0] + (m - idx[0]) * nu
            ctx.check(exponent_condition(idx, nu) == (lhs <= nu),
                      "exponent condition mismatch")


@_row("series.flat-closedness")
def _row_series_flat(ctx: _Ctx):
    x0, x2 = Poly.var(DIM, 0), Poly.var(DIM, 2)
    theta = poly_form(DIM, 1, {(1,): x0, (3,): Fraction(-1) * x2})
    kappa = Form.basis(DIM, 0, 1) - Form.basis(DIM, 2, 3)
    ctx.check(poly_d(theta) == const_coeffs(kappa), "d theta != kappa")
    star_k = const_coeffs(hodge(kappa))
    rho1 = Fraction(1, 4) * contract(euler_vector(DIM), star_k)
    ctx.check(poly_d(rho1) == star_k, "d rho1 != *kappa")
    w0 = const_coeffs(standard_omega())
    ctx.check((wedge(poly_d(theta), w0) + poly_d(rho1)).is_zero(),
              "d theta ^ omega + d rho1 != 0")
    state = SeriesState(rho1, theta, d=poly_d)
    state.extend(Fraction(0), Form(DIM, 1), Form(DIM, 3))
    rhs = rhs_assembly(state, 2)
    ctx.check(rhs["alpha1"] == wedge(poly_d(theta), state.rho_hat_k(1)),
              "order-2 alpha1 != d theta ^ rho-hat")
    ctx.check(rhs["alpha2"].is_zero(), "order-2 alpha2 != 0")
    q2 = state.Q_k(2)
    ctx.check(rhs["primitive3"] == q2, "order-2 source != Q2")
    ctx.check(rhs["alpha3"] == Fraction(-1) * poly_d(q2),
              "order-2 alpha3 != -d Q2")


@_row("series.majorant")
def _row_majorant(ctx: _Ctx):
    rng = ctx.rng
    rep = majorant_check(16, 16, 30)
    ctx.check(rep["holds"] and not rep["failures"],
              "reference majorant family fails its own bound")
    for _ in range(20):
        b = Fraction(rng.randint(1, 40), rng.randint(1, 3))
        c = Fraction(rng.randint(1, 40), rng.randint(1, 3))
        rep = majorant_check(b, c, 12)
        ctx.check(rep["holds"], f"majorant convolution fails at b={b} c={c}")
        coeffs = majorant_coefficients(b, c, 12)
        for k in range(1, 13):
            ctx.check(coeffs[k - 1] == Fraction(b, 16 * c) * c ** k
                      / Fraction(k * k), f"A_{k} formula wrong")
    out = mock_iterate(1, {2: Fraction(1)}, Fraction(1, 2), 50)
    ctx.check(out["certified"], "quadratic model not certified")
    ctx.check(out["closing_value"] <= 1, "closing constant exceeds 1")
    ctx.check(all(out["norms"][k - 1] <= out["majorant"][k - 1]
                  for k in range(1, 51)),
              "iterate escapes its majorant")
    out = mock_iterate(3, {2: Fraction(1, 2), 3: Fraction(1, 4)},
                       Fraction(1, 3), 30)
    ctx.check(out["certified"], "cubic model not certified")


# ------------------------------------------------------------------ driver

def run_matrix(mode: str = "exact", seed: int = 0, tolerance: float = 1e-10,
               jobs: int = 1, tags=None) -> dict:
    """Run the identity matrix and return a JSON-ready report."""
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    selected = [(t, f) for t, f in _ROWS if tags is None or t in set(tags)]
    if tags is not None:
        known = {t for t, _ in _ROWS}
        missing = set(tags) - known
        if missing:
            raise ValueError(f"unknown rows: {sorted(missing)}")

    def run_one(item):
        tag, fn = item
        ctx = _Ctx(mode, tolerance, random.Random(f"{seed}:{tag}"))
        try:
            fn(ctx)
            return {"tag": tag, "passed": True, "checks": ctx.checks,
                    "detail": ""}
        except VerifyError as e:
            return {"tag": tag, "passed": False, "checks": ctx.checks,
                    "detail": str(e)}
        except Exception as e:  # an identity crashed instead of failing
            return {"tag": tag, "passed": False, "checks": ctx.checks,
                    "detail": f"{type(e).__name__}: {e}"}

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_one, selected))
    else:
        rows = [run_one(item) for item in selected]
    failures = [r["tag"] for r in rows if not r["passed"]]
    return {"mode": mode, "seed": seed, "tolerance": tolerance,
            "rows": rows, "checks": sum(r["checks"] for r in rows),
            "passed": not failures, "failures": failures}
