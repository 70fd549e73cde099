"""Five-dimensional link structures, metric cones, and homogeneous forms.

Link forms live in a small symbolic algebra: words are a structure part
(products of eta, w1, w2, w3) times at most one declared eigenform symbol.
Rewriting uses only the declared relations -- eta^eta = 0, wi^wj = delta_ij
w1^2, primitivity, and the d / d* / * images attached to each symbol.
Anything that cannot be reduced stays symbolic; anything that cannot even be
represented raises.

A second backend represents link forms concretely as pairs (P, s) with P a
tangential polynomial form on R^n and the link form P/r^s restricted to the
unit sphere.  Both backends expose d, * and the codifferential, and the cone
operators are generic over them; the Cartesian backend is the oracle that the
symbolic route is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .forms import Form, contract, hodge, wedge
from .polyforms import (Poly, euler_vector, form_div_r2, poly_d,
                        radial_square)
from .scalars import Scalar

LINK_DIM = 5


class SymbolAlgebraError(ValueError):
    """Operation leaves the declared rewriting system."""


# ---------------------------------------------------------------- structure words

# canonical basis of the pure SU(2)-structure part of the algebra
_WORDS = {
    "1": 0, "eta": 1, "w1": 2, "w2": 2, "w3": 2,
    "eta.w1": 3, "eta.w2": 3, "eta.w3": 3, "w1.w1": 4, "eta.w1.w1": 5,
}


def _word_mul(a: str, b: str):
    """Product of two structure words: (word, coeff) or None for zero."""
    if a == "1":
        return b, Fraction(1)
    if b == "1":
        return a, Fraction(1)
    fa, fb = a.split("."), b.split(".")
    eta_count = fa.count("eta") + fb.count("eta")
    if eta_count > 1:
        return None
    ws = [f for f in fa + fb if f != "eta"]
    if len(ws) > 2:
        return None
    if len(ws) == 2:
        if ws[0] != ws[1]:
            return None        # wi ^ wj = 0 for i != j
        ws = ["w1", "w1"]      # wi ^ wi = w1 ^ w1
    # omega factors are even and eta moves to the front with no sign
    word = ".".join((["eta"] if eta_count else []) + ws)
    return word, Fraction(1)


@dataclass(frozen=True)
class EigenformSymbol:
    """A declared eigenform on the link.

    kind: closed / exact / coexact / coclosed / harmonic / generic.
    primitive: marks a basic primitive (1,1) 2-form, independent of kind --
    wedges with the omegas vanish and *s = -eta^s.
    d_to / codiff_to: (symbol name, coefficient) images, when declared.
    """
    name: str
    degree: int
    kind: str
    mu: Scalar | None = None
    d_to: tuple[str, Scalar] | None = None
    codiff_to: tuple[str, Scalar] | None = None
    star_to: tuple[str, Scalar] | None = None
    primitive: bool = False

    def __post_init__(self):
        if self.kind not in ("closed", "exact", "coexact", "coclosed",
                             "harmonic", "generic"):
            raise SymbolAlgebraError(f"unknown symbol kind {self.kind!r}")
        if self.primitive and self.degree != 2:
            raise SymbolAlgebraError("primitive flag is for 2-forms only")
        if self.kind == "harmonic":
            if self.d_to is not None or self.codiff_to is not None:
                raise SymbolAlgebraError(
                    "harmonic symbol must not declare d or d* images")
            if self.mu not in (None, 0):
                raise SymbolAlgebraError("harmonic symbol must have mu = 0")
        if self.kind in ("closed", "exact") and self.d_to is not None:
            raise SymbolAlgebraError("closed symbol with a d image")
        if self.kind in ("coclosed", "coexact") and self.codiff_to is not None:
            raise SymbolAlgebraError("coclosed symbol with a d* image")


class LinkAlgebra:
    """Symbol table plus structure relations; the context for LinkExpr."""

    def __init__(self, d_eta=None, d_w1=None, d_w2=None, d_w3=None):
        self.symbols: dict[str, EigenformSymbol] = {}
        self._d_rules: dict[str, "LinkExpr"] = {}
        for name, rule in (("eta", d_eta), ("w1", d_w1), ("w2", d_w2),
                           ("w3", d_w3)):
            self._d_rules[name] = rule if rule is not None else None

    def declare(self, sym: EigenformSymbol):
        if sym.name in _WORDS or sym.name in self.symbols:
            raise SymbolAlgebraError(f"symbol {sym.name!r} already taken")
        self.symbols[sym.name] = sym
        self._validate(sym)
        return sym

    def _validate(self, sym: EigenformSymbol):
        # declared eigenvalue must match the declared couplings when both exist
        if sym.d_to and sym.codiff_to is None and sym.mu is not None:
            partner, c = sym.d_to
            p = self.symbols.get(partner)
            if p and p.codiff_to and p.codiff_to[0] == sym.name:
                prod = c * p.codiff_to[1]
                if prod != sym.mu:
                    raise SymbolAlgebraError(
                        f"{sym.name}: mu={sym.mu} but couplings give {prod}")

    def set_d_rule(self, gen: str, expr: "LinkExpr"):
        if gen not in ("eta", "w1", "w2", "w3"):
            raise SymbolAlgebraError(f"no structure generator {gen!r}")
        self._d_rules[gen] = expr

    def d_rule(self, gen: str) -> "LinkExpr":
        r = self._d_rules.get(gen)
        if r is None:
            raise SymbolAlgebraError(f"d({gen}) was never declared")
        return r

    # -- expression constructors
    def expr(self, degree: int) -> "LinkExpr":
        return LinkExpr(self, degree)

    def word(self, word: str, sym: str | None = None, c: Scalar = 1) -> "LinkExpr":
        deg = _WORDS[word] + (self.symbols[sym].degree if sym else 0)
        e = LinkExpr(self, deg)
        e.terms[(word, sym)] = Fraction(c) if isinstance(c, int) else c
        return e

    def structure_form(self, name: str) -> "LinkExpr":
        return self.word(name)


class LinkExpr:
    """Linear combination of words (structure_word, symbol_or_None)."""

    __slots__ = ("alg", "degree", "terms")

    def __init__(self, alg: LinkAlgebra, degree: int, terms=None):
        self.alg = alg
        self.degree = degree
        self.terms: dict[tuple[str, str | None], Scalar] = {}
        if terms:
            for k, v in terms.items():
                if v != 0:
                    self.terms[k] = v

    def copy(self):
        return LinkExpr(self.alg, self.degree, dict(self.terms))

    def is_zero(self):
        return all(v == 0 for v in self.terms.values())

    def __add__(self, other):
        if not isinstance(other, LinkExpr):
            return NotImplemented
        if other.alg is not self.alg or (self.degree != other.degree
                                         and not (self.is_zero() or other.is_zero())):
            raise SymbolAlgebraError("incompatible link expressions")
        out = LinkExpr(self.alg, other.degree if self.is_zero() else self.degree)
        out.terms = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.terms.get(k, 0) + v
            if nv == 0:
                out.terms.pop(k, None)
            else:
                out.terms[k] = nv
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        out = LinkExpr(self.alg, self.degree)
        for k, v in self.terms.items():
            nv = c * v
            if nv != 0:
                out.terms[k] = nv
        return out

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, LinkExpr):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        for (w, s), c in sorted(self.terms.items(), key=lambda t: (t[0][0], t[0][1] or "")):
            name = w if s is None else (s if w == "1" else f"{w}.{s}")
            bits.append(f"{c}*{name}")
        return " + ".join(bits)


def link_wedge(a: LinkExpr, b: LinkExpr) -> LinkExpr:
    if a.alg is not b.alg:
        raise SymbolAlgebraError("different algebras")
    alg = a.alg
    deg = a.degree + b.degree
    if deg > LINK_DIM:
        return LinkExpr(alg, LINK_DIM)     # identically zero above top degree
    out = LinkExpr(alg, deg)
    for (wa, sa), ca in a.terms.items():
        for (wb, sb), cb in b.terms.items():
            if sa is not None and sb is not None:
                raise SymbolAlgebraError(
                    f"product of symbols {sa!r} and {sb!r} is not declared")
            sym = sa or sb
            sign = Fraction(1)
            if sa is not None:
                # move the symbol of a past the structure part of b
                if (alg.symbols[sa].degree % 2) and (_WORDS[wb] % 2):
                    sign = -sign
            prod = _word_mul(wa, wb)
            if prod is None:
                continue
            word, wc = prod
            if sym is not None:
                sdeg = alg.symbols[sym].degree
                if _WORDS[word] + sdeg > LINK_DIM:
                    continue
                if alg.symbols[sym].primitive and "w" in word:
                    continue      # sigma ^ omega_i = 0 for basic primitive (1,1)
            c = ca * cb * sign * wc
            key = (word, sym)
            nv = out.terms.get(key, 0) + c
            if nv == 0:
                out.terms.pop(key, None)
            else:
                out.terms[key] = nv
    return out


def _d_structure_word(alg: LinkAlgebra, word: str) -> LinkExpr:
    if word == "1":
        return LinkExpr(alg, 1)
    factors = word.split(".")
    total = LinkExpr(alg, _WORDS[word] + 1)
    for i, f in enumerate(factors):
        dfi = alg.d_rule(f)
        before = ".".join(factors[:i]) or "1"
        after = ".".join(factors[i + 1:]) or "1"
        sign = Fraction(-1) if (_WORDS[before] % 2) else Fraction(1)
        piece = link_wedge(link_wedge(alg.word(before), dfi), alg.word(after))
        total = total + sign * piece
    return total


def link_d(a: LinkExpr) -> LinkExpr:
    alg = a.alg
    out = LinkExpr(alg, a.degree + 1)
    for (w, s), c in a.terms.items():
        dstruct = _d_structure_word(alg, w)
        if s is None:
            out = out + c * dstruct
            continue
        sym = alg.symbols[s]
        symexpr = alg.word("1", s)
        out = out + c * link_wedge(dstruct, symexpr)
        if sym.kind in ("closed", "exact", "harmonic"):
            continue
        if sym.d_to is None:
            raise SymbolAlgebraError(f"d({s}) is not declared")
        pname, pc = sym.d_to
        sign = Fraction(-1) if (_WORDS[w] % 2) else Fraction(1)
        out = out + (sign * pc * c) * link_wedge(alg.word(w), alg.word("1", pname))
    return out


_STAR_TABLE = {
    "1": (("eta.w1.w1", Fraction(1, 2)),),
    "eta": (("w1.w1", Fraction(1, 2)),),
    "w1": (("eta.w1", Fraction(1)),),
    "w2": (("eta.w2", Fraction(1)),),
    "w3": (("eta.w3", Fraction(1)),),
    "eta.w1": (("w1", Fraction(1)),),
    "eta.w2": (("w2", Fraction(1)),),
    "eta.w3": (("w3", Fraction(1)),),
    "w1.w1": (("eta", Fraction(2)),),
    "eta.w1.w1": (("1", Fraction(2)),),
}


def link_star(a: LinkExpr) -> LinkExpr:
    alg = a.alg
    out = LinkExpr(alg, LINK_DIM - a.degree)
    for (w, s), c in a.terms.items():
        if s is None:
            for word, sc in _STAR_TABLE[w]:
                out = out + (c * sc) * alg.word(word)
            continue
        sym = alg.symbols[s]
        if sym.primitive:
            # *s = -eta^s and *(eta^s) = -s
            if w == "1":
                out = out + (-c) * alg.word("eta", s)
            elif w == "eta":
                out = out + (-c) * alg.word("1", s)
            else:
                raise SymbolAlgebraError(f"*({w}.{s}) is not declared")
            continue
        if w == "1" and sym.star_to is not None:
            pname, pc = sym.star_to
            out = out + (c * pc) * alg.word("1", pname)
            continue
        raise SymbolAlgebraError(f"*({w}.{s}) is not declared")
    return out


def link_codiff(a: LinkExpr) -> LinkExpr:
    """d* = (-1)^k *d* on k-forms of a 5-manifold."""
    alg = a.alg
    out = LinkExpr(alg, max(a.degree - 1, 0))
    for (w, s), c in a.terms.items():
        if s is not None and w == "1":
            sym = alg.symbols[s]
            if sym.kind in ("coclosed", "coexact", "harmonic"):
                continue
            if sym.codiff_to is not None:
                pname, pc = sym.codiff_to
                out = out + (c * pc) * alg.word("1", pname)
                continue
        single = LinkExpr(alg, a.degree, {(w, s): c})
        sign = Fraction(-1) if (a.degree % 2) else Fraction(1)
        out = out + sign * link_star(link_d(link_star(single)))
    return out


def link_laplacian(a: LinkExpr) -> LinkExpr:
    """Hodge Laplacian d d* + d* d via the declared relations.

    Declared eigenvalues short-circuit bare symbol words so that coexact
    symbols with only a d-image (and a partner d*-rule) still reduce.
    """
    alg = a.alg
    out = LinkExpr(alg, a.degree)
    for (w, s), c in a.terms.items():
        single = LinkExpr(alg, a.degree, {(w, s): c})
        if s is not None and w == "1":
            sym = alg.symbols[s]
            if sym.kind == "harmonic":
                continue
            if sym.mu is not None:
                out = out + sym.mu * single
                continue
        out = out + link_d(link_codiff(single)) + link_codiff(link_d(single))
    return out


# ---------------------------------------------------------------- SU(2) structures

@dataclass
class SU2Structure:
    """Symbolic 1-form eta and 2-form triple with declared derivatives."""
    algebra: LinkAlgebra

    @property
    def eta(self):
        return self.algebra.word("eta")

    def omega(self, i: int):
        return self.algebra.word(f"w{i}")


def sasaki_einstein_structure() -> SU2Structure:
    """The declared relations d eta = 2 w1, d w2 = -3 eta^w3, d w3 = 3 eta^w2
    (and d w1 = 0, forced by d^2 = 0)."""
    alg = LinkAlgebra()
    alg.set_d_rule("eta", 2 * alg.word("w1"))
    alg.set_d_rule("w1", LinkExpr(alg, 3))
    alg.set_d_rule("w2", -3 * alg.word("eta.w3"))
    alg.set_d_rule("w3", 3 * alg.word("eta.w2"))
    return SU2Structure(alg)


def generic_su2_structure(d_eta=None, d_w1=None, d_w2=None, d_w3=None) -> SU2Structure:
    """Structure with caller-declared derivative rules; each rule is a
    callable taking the fresh algebra and returning a LinkExpr (default 0)."""
    alg = LinkAlgebra()
    for gen, rule, deg in (("eta", d_eta, 2), ("w1", d_w1, 3),
                           ("w2", d_w2, 3), ("w3", d_w3, 3)):
        alg.set_d_rule(gen, rule(alg) if rule is not None else LinkExpr(alg, deg))
    return SU2Structure(alg)


def structure_consistency(s: SU2Structure) -> list[LinkExpr]:
    """d^2 residuals of the declared relations, reported symbolically."""
    return [link_d(s.algebra.d_rule(g)) for g in ("eta", "w1", "w2", "w3")]


@dataclass
class SEResult:
    residuals: tuple[LinkExpr, LinkExpr, LinkExpr]
    scal: int | None      # 20 when the relations hold, else None


def se_residual(s: SU2Structure) -> SEResult:
    """Residuals of d eta - 2 w1, d w2 + 3 eta^w3, d w3 - 3 eta^w2."""
    alg = s.algebra
    r1 = link_d(s.eta) - 2 * alg.word("w1")
    r2 = link_d(s.omega(2)) + 3 * alg.word("eta.w3")
    r3 = link_d(s.omega(3)) - 3 * alg.word("eta.w2")
    ok = r1.is_zero() and r2.is_zero() and r3.is_zero()
    return SEResult((r1, r2, r3), 20 if ok else None)


def su2_wedge_residuals(s: SU2Structure) -> list[LinkExpr]:
    """The algebraic constraints: wi^wj - delta_ij w1^2 (zero by rewriting)
    plus the nonvanishing witness eta^w1^2."""
    alg = s.algebra
    out = []
    for i in range(1, 4):
        for j in range(i, 4):
            r = link_wedge(s.omega(i), s.omega(j))
            if i == j:
                r = r - alg.word("w1.w1")
            out.append(r)
    return out


def volume_form(s: SU2Structure) -> LinkExpr:
    return Fraction(1, 2) * s.algebra.word("eta.w1.w1")


# ---------------------------------------------------------------- cone forms

@dataclass
class ConeForm:
    """r^(lambda+k) ((dr/r)^alpha + beta) with alpha a (k-1)-form and beta a
    k-form on the link; n is the cone dimension."""
    n: int
    k: int
    rate: Scalar
    alpha: object       # LinkExpr or CartLink
    beta: object

    def is_zero(self):
        return self.alpha.is_zero() and self.beta.is_zero()


def cone_d(g: ConeForm) -> ConeForm:
    lam, k = g.rate, g.k
    alpha = (lam + k) * g.beta + (-1) * _d(g.alpha)
    return ConeForm(g.n, k + 1, lam - 1, alpha, _d(g.beta))


def cone_hodge(g: ConeForm) -> ConeForm:
    # the warped-product star preserves the homogeneity rate
    sign = Fraction(-1) if (g.k % 2) else Fraction(1)
    return ConeForm(g.n, g.n - g.k, g.rate,
                    sign * _star(g.beta), _star(g.alpha))


def cone_codiff(g: ConeForm) -> ConeForm:
    """d* = (-1)^(n(k+1)+1) * d * on the n-dimensional cone."""
    sign = Fraction(-1) if ((g.n * (g.k + 1) + 1) % 2) else Fraction(1)
    out = cone_hodge(cone_d(cone_hodge(g)))
    return ConeForm(out.n, out.k, out.rate, sign * out.alpha, sign * out.beta)


def cone_wedge(a: ConeForm, b: ConeForm) -> ConeForm:
    sign = Fraction(-1) if (a.k % 2) else Fraction(1)
    alpha = _wedge(a.alpha, b.beta) + sign * _wedge(a.beta, b.alpha)
    return ConeForm(a.n, a.k + b.k, a.rate + b.rate, alpha, _wedge(a.beta, b.beta))


def _wedge(x, y):
    if isinstance(x, LinkExpr):
        return link_wedge(x, y)
    return CartLink(x.n, wedge(x.form, y.form), x.s + y.s)


def _d(x):
    return link_d(x) if isinstance(x, LinkExpr) else x.d()


def _star(x):
    return link_star(x) if isinstance(x, LinkExpr) else x.star()


def _codiff(x):
    return link_codiff(x) if isinstance(x, LinkExpr) else x.codiff()


def _lap(x):
    return link_laplacian(x) if isinstance(x, LinkExpr) else x.laplacian()


def cone_laplacian(g: ConeForm, u: list[Scalar] | None = None):
    """Hodge Laplacian of u(log r) * g, by the radial separation formula.

    Returns (A, B): lists of link forms, the coefficients of powers of
    log r in Delta(u g) = r^(lambda+k-2)((dr/r)^A(t) + B(t)).
    """
    lam, k, n = g.rate, g.k, g.n
    if u is None:
        u = [Fraction(1)]
    m = len(u)
    ca = _lap(g.alpha) + (-(lam + k - 2) * (lam + n - k)) * g.alpha \
        + (-2) * _codiff(g.beta)
    cb = _lap(g.beta) + (-(lam + n - k - 2) * (lam + k)) * g.beta \
        + (-2) * _d(g.alpha)
    A, B = [], []
    for j in range(m):
        u1 = (j + 1) * u[j + 1] if j + 1 < m else 0      # coefficient of u'
        u2 = (j + 2) * (j + 1) * u[j + 2] if j + 2 < m else 0   # of u''
        aj = u[j] * ca + (-(2 * lam + n - 1) * u1) * g.alpha \
            + (-(u2 - u1)) * g.alpha
        bj = u[j] * cb + (-(2 * lam + n - 1) * u1) * g.beta \
            + (-(u2 - u1)) * g.beta
        A.append(aj)
        B.append(bj)
    while len(A) > 1 and A[-1].is_zero() and B[-1].is_zero():
        A.pop()
        B.pop()
    return A, B


# ---------------------------------------------------------------- conical CY

@dataclass
class ConicalCY:
    omega: ConeForm
    re_omega: ConeForm
    im_omega: ConeForm
    d_residuals: tuple


def conical_cy(s: SU2Structure) -> ConicalCY:
    """omega_C = r dr^eta + r^2 w1 and Omega_C = r^2 (dr + i r eta)^(w2 + i w3),
    with closure residuals reduced through the declared relations."""
    alg = s.algebra
    w = ConeForm(6, 2, 0, alg.word("eta"), alg.word("w1"))
    re = ConeForm(6, 3, 0, alg.word("w2"), -1 * alg.word("eta.w3"))
    im = ConeForm(6, 3, 0, alg.word("w3"), alg.word("eta.w2"))
    res = []
    for f in (w, re, im):
        df = cone_d(f)
        res.append((df.alpha, df.beta))
    return ConicalCY(w, re, im, tuple(res))


def conical_su3_residuals(c: ConicalCY):
    """The algebraic SU(3) constraints for the cone triple, reduced in the
    symbol algebra: omega^Re = 0 and (1/6) omega^3 - (1/4) Re^Im = 0."""
    o, re, im = c.omega, c.re_omega, c.im_omega
    r1 = cone_wedge(o, re)
    w3 = cone_wedge(o, cone_wedge(o, o))
    riri = cone_wedge(re, im)
    r2a = Fraction(1, 6) * w3.alpha - Fraction(1, 4) * riri.alpha
    r2b = Fraction(1, 6) * w3.beta - Fraction(1, 4) * riri.beta
    return (r1.alpha, r1.beta, r2a, r2b)


# ---------------------------------------------------------------- classification

@dataclass
class HarmonicComponent:
    type_tag: str          # "i", "ii", "iii", "ii=iii", "iv"
    alpha: object
    beta: object
    closed: bool
    coclosed: bool


class ClassifyError(ValueError):
    pass


def classify_homogeneous_harmonic(lam: Scalar, k: int, n: int,
                                  alpha_parts, beta_parts,
                                  alg: LinkAlgebra) -> list[HarmonicComponent]:
    """Split a homogeneous harmonic cone form into the four first-order types.

    alpha_parts / beta_parts: lists of (coefficient, symbol name).  Each
    symbol must carry enough declared relations to match exactly one type;
    at the degenerate rate lam = -(n-2)/2 the two coupled branches coincide
    and are tagged "ii=iii".
    """
    comps = []
    degenerate = (2 * lam == -(n - 2))
    beta_left = {name: c for c, name in beta_parts}
    for c, name in alpha_parts:
        sym = alg.symbols[name]
        if sym.degree != k - 1:
            raise ClassifyError(f"{name} has degree {sym.degree}, expected {k-1}")
        if sym.kind in ("closed", "exact", "harmonic"):
            mu = sym.mu if sym.mu is not None else 0
            want = (lam + k - 2) * (lam + n - k)
            if mu != want:
                raise ClassifyError(
                    f"type (i) eigenvalue mismatch for {name}: {mu} != {want}")
            comps.append(HarmonicComponent(
                "i", alg.word("1", name, c), LinkExpr(alg, k),
                closed=True, coclosed=(lam + n - k == 0)))
            continue
        if sym.kind == "coexact":
            if sym.d_to is None:
                raise ClassifyError(f"coexact {name} has no d image")
            pname, cd = sym.d_to
            if pname not in beta_left:
                raise ClassifyError(f"partner {pname} of {name} missing from beta")
            y = beta_left.pop(pname)
            partner = alg.symbols[pname]
            if partner.codiff_to is None or partner.codiff_to[0] != name:
                raise ClassifyError(f"{pname} lacks a d* image back to {name}")
            ccd = partner.codiff_to[1]
            mu = cd * ccd
            # branch (ii): d alpha = (lam+k) beta, d* beta = (lam+n-k) alpha
            is_ii = (c * cd == (lam + k) * y) and (y * ccd == (lam + n - k) * c)
            # branch (iii): d alpha = -(lam+n-k-2) beta, d* beta = -(lam+k-2) alpha
            is_iii = (c * cd == -(lam + n - k - 2) * y) and \
                (y * ccd == -(lam + k - 2) * c)
            if degenerate:
                if not (is_ii and is_iii):
                    raise ClassifyError(
                        f"pair ({name},{pname}) fails the degenerate-branch system")
                tag = "ii=iii"
            elif is_ii and is_iii:
                raise ClassifyError(
                    f"pair ({name},{pname}) matches both branches away from "
                    f"the degenerate rate")
            elif is_ii:
                tag = "ii"
            elif is_iii:
                tag = "iii"
            else:
                raise ClassifyError(
                    f"pair ({name},{pname}) solves neither first-order branch")
            if tag in ("ii", "ii=iii"):
                want = (lam + k) * (lam + n - k)
            else:
                want = (lam + k - 2) * (lam + n - k - 2)
            if mu != want:
                raise ClassifyError(
                    f"pair ({name},{pname}) eigenvalue {mu} != {want}")
            comps.append(HarmonicComponent(
                tag, alg.word("1", name, c), alg.word("1", pname, y),
                closed=(tag != "iii"), coclosed=(tag != "iii")))
            continue
        raise ClassifyError(f"alpha part {name} has unusable kind {sym.kind}")
    for name, y in beta_left.items():
        sym = alg.symbols[name]
        if sym.degree != k:
            raise ClassifyError(f"{name} has degree {sym.degree}, expected {k}")
        if sym.kind not in ("coclosed", "coexact", "harmonic"):
            raise ClassifyError(f"beta part {name} is not coclosed")
        mu = sym.mu if sym.mu is not None else 0
        want = (lam + n - k - 2) * (lam + k)
        if mu != want:
            raise ClassifyError(
                f"type (iv) eigenvalue mismatch for {name}: {mu} != {want}")
        comps.append(HarmonicComponent(
            "iv", LinkExpr(alg, k - 1), alg.word("1", name, y),
            closed=(lam + k == 0), coclosed=True))
    return comps


def reconstruct_partner(lam: Scalar, k: int, n: int, branch: str,
                        c_alpha: Scalar, cd: Scalar):
    """Coefficient of the beta partner determined by an alpha coefficient
    through the branch's first equation (d alpha = cd * partner-symbol)."""
    if branch == "ii":
        denom = lam + k
    elif branch == "iii":
        denom = -(lam + n - k - 2)
    else:
        raise ClassifyError(f"unknown branch {branch!r}")
    if denom == 0:
        raise ClassifyError("branch coupling degenerates at this rate")
    return c_alpha * cd / denom


# ---------------------------------------------------------------- gauge system

def gauge_cone_system_residual(lam: Scalar, beta0: LinkExpr, beta1: LinkExpr):
    """Residuals of the radially-reduced gauge-operator system on a
    6-dimensional cone:

    R0 = (2/3) d*d b0 - (lam-1)(lam+5) b0 + (1/3)(lam-5) d* b1
    R1 = (d d* + (2/3) d*d) b1 - (2/3)(lam+1)(lam+3) b1 - (1/3)(lam+9) d b0
    """
    r0 = Fraction(2, 3) * link_codiff(link_d(beta0)) \
        + (-(lam - 1) * (lam + 5)) * beta0 \
        + Fraction(1, 3) * (lam - 5) * link_codiff(beta1)
    r1 = link_d(link_codiff(beta1)) \
        + Fraction(2, 3) * link_codiff(link_d(beta1)) \
        + (-Fraction(2, 3) * (lam + 1) * (lam + 3)) * beta1 \
        + (-Fraction(1, 3) * (lam + 9)) * link_d(beta0)
    return r0, r1


# ---------------------------------------------------------------- Cartesian oracle

class CartLink:
    """Link form on S^(n-1) as P / r^s with P tangential (E . P = 0) and
    polynomial-homogeneous: coefficients of P have degree s - k."""

    __slots__ = ("n", "form", "s")

    def __init__(self, n: int, form: Form, s: int, normalize=True):
        self.n = n
        self.form = form
        self.s = s
        if normalize:
            self._normalize()

    def _normalize(self):
        while True:
            div = form_div_r2(self.form)
            if div is None or self.form.is_zero():
                break
            self.form = div
            self.s -= 2

    @classmethod
    def validate(cls, x: "CartLink"):
        e = euler_vector(x.n)
        if not contract(e, x.form).is_zero():
            raise ValueError("not tangential")
        for c in x.form.terms.values():
            if isinstance(c, Poly) and not c.is_homogeneous():
                raise ValueError("coefficients not homogeneous")

    @property
    def degree(self):
        return self.form.degree

    def is_zero(self):
        return self.form.is_zero()

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b = self, other
        if a.s != b.s:
            # bring to a common grading by multiplying with powers of r^2
            r2 = radial_square(self.n)
            while a.s < b.s:
                a = CartLink(a.n, a.form.map_coeffs(lambda c: r2 * c), a.s + 2,
                             normalize=False)
            while b.s < a.s:
                b = CartLink(b.n, b.form.map_coeffs(lambda c: r2 * c), b.s + 2,
                             normalize=False)
        return CartLink(a.n, a.form + b.form, a.s)

    def __rmul__(self, c):
        return CartLink(self.n, c * self.form, self.s, normalize=False)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return (self + (-1) * other).is_zero()

    def d(self):
        xf = Form(self.n, 1, {(i,): Poly.var(self.n, i) for i in range(self.n)})
        newform = poly_d(self.form).map_coeffs(lambda c: radial_square(self.n) * c) \
            - self.s * wedge(xf, self.form)
        return CartLink(self.n, newform, self.s + 2)

    def star(self):
        e = euler_vector(self.n)
        sign = Fraction(-1) if (self.degree % 2) else Fraction(1)
        return CartLink(self.n, sign * contract(e, hodge(self.form)),
                        self.s + self.n - 2 * self.degree)

    def codiff(self):
        k = self.degree
        m = self.n - 1   # link dimension
        sign = Fraction(-1) if ((m * (k + 1) + 1) % 2) else Fraction(1)
        return sign * self.star().d().star()

    def laplacian(self):
        return self.d().codiff() + self.codiff().d()


def cart_to_cone(gamma: Form, n: int) -> ConeForm:
    """Re-express a homogeneous polynomial form on R^n as a homogeneous cone
    form: gamma = r^(lam+k)((dr/r)^alpha + beta) with lam the coefficient
    degree."""
    k = gamma.degree
    degs = set()
    for c in gamma.terms.values():
        if isinstance(c, Poly):
            if not c.is_homogeneous():
                raise ValueError("coefficients must be homogeneous")
            degs.add(c.total_degree())
        else:
            degs.add(0)
    if len(degs) > 1:
        raise ValueError("mixed coefficient degrees")
    lam = degs.pop() if degs else 0
    if k == 0:
        return ConeForm(n, 0, lam, CartLink(n, Form(n, 0), lam),
                        CartLink(n, gamma, lam))
    e = euler_vector(n)
    al = contract(e, gamma)
    xf = Form(n, 1, {(i,): Poly.var(n, i) for i in range(n)})
    beta_form = gamma.map_coeffs(lambda c: radial_square(n) * c) - wedge(xf, al)
    alpha = CartLink(n, al, lam + k)
    beta = CartLink(n, beta_form, lam + k + 2)
    return ConeForm(n, k, lam, alpha, beta)
