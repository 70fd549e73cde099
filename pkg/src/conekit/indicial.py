"""Indicial-rate bookkeeping for operators on a metric cone over a 5-link.

A homogeneous kernel element of a cone operator exists only at rates where
a quadratic in the rate meets an eigenvalue of the link Laplacian, or a
Betti number of the link is nonzero.  This module enumerates those rates
and their multiplicities for the Laplacian on k-forms, the mixed-degree
first-order operator d + d*, the Dirac operator, and the pair of
gauge-fixing operators, given the link's spectral data as *input*.

Nothing here computes a spectrum.  The engine consumes eigenvalue lines
(degree, eigenvalue, multiplicity, flags) together with Betti numbers,
validates them against the lower bounds that hold on an Einstein 5-link
carrying Killing spinors, and turns them into indicial roots, kernel
dimensions, log orders and Fredholm index jumps.

Arithmetic is exact wherever the data is: rational eigenvalues with square
discriminants yield Fraction roots; everything else falls back to binary64
with a 1e-9 merge tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

MERGE_TOL = 1e-9

ALLOWED_FLAGS = frozenset(
    {"harmonic", "killing-dual", "killing-spinor-preserving", "basic"})

ALLOWED_OPERATORS = ("laplacian_0", "laplacian_1", "laplacian_2",
                     "laplacian_3", "laplacian_4", "laplacian_5",
                     "laplacian_6", "d_plus_dstar_even", "d_plus_dstar_odd",
                     "dirac", "gauge")


class SpectralDataError(ValueError):
    """Link spectral data violates a structural or eigenvalue bound."""


class WindowOnRootError(ValueError):
    """A window endpoint sits exactly on an indicial root."""


class OutsideTableError(ValueError):
    """Query outside the range covered by the implemented branch tables."""


# ---------------------------------------------------------------- numbers

def _as_number(x):
    if isinstance(x, bool):
        raise SpectralDataError("boolean is not a number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, float)):
        return x
    raise SpectralDataError(f"unsupported numeric type {type(x).__name__}")


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _exact_sqrt(q: Fraction):
    """Square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _num_eq(a, b) -> bool:
    if _is_exact(a) and _is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= MERGE_TOL


def _quad_roots(a: int, b: int, mu):
    """Real solutions of (lam + a)(lam + b) = mu, exact when possible."""
    if _is_exact(mu):
        mu = Fraction(mu)
        disc = Fraction((a - b) ** 2) + 4 * mu
        if disc < 0:
            return set()
        s = _exact_sqrt(disc)
        if s is not None:
            return {(Fraction(-(a + b)) + s) / 2, (Fraction(-(a + b)) - s) / 2}
        disc_f = float(disc)
    else:
        disc_f = float((a - b) ** 2) + 4.0 * float(mu)
        if disc_f < 0:
            return set()
    s = math.sqrt(disc_f)
    return {(-(a + b) + s) / 2.0, (-(a + b) - s) / 2.0}


# the linear factors (lam + A)(lam + B) = mu of the four component types
# of a homogeneous harmonic k-form on an n-dimensional cone
def _branch_factors(n: int, k: int, branch: str):
    if branch == "i":
        return k - 2, n - k
    if branch == "ii":
        return k, n - k
    if branch == "iii":
        return k - 2, n - k - 2
    if branch == "iv":
        return n - k - 2, k
    raise ValueError(f"unknown branch {branch!r}")


def rate_candidates(n: int, k: int, branch: str, mu):
    """Rates lam with (lam + A)(lam + B) = mu for the given branch.

    branch 'i'  : coefficient is a closed (k-1)-eigenform,  A,B = k-2, n-k
    branch 'ii' : coexact/exact pair,                       A,B = k,   n-k
    branch 'iii': coexact/exact pair,                       A,B = k-2, n-k-2
    branch 'iv' : coefficient is a coclosed k-eigenform,    A,B = n-k-2, k

    Exact rationals whenever mu is rational with square discriminant.
    """
    mu = _as_number(mu)
    if mu < 0:
        raise ValueError("eigenvalue must be nonnegative")
    a, b = _branch_factors(n, k, branch)
    return _quad_roots(a, b, mu)


# ---------------------------------------------------------------- link data

@dataclass(frozen=True)
class SpectralLine:
    """One eigenvalue line of the link Laplacian.

    kind 'function' (degree 0, nonconstant eigenfunctions) or 'coexact'
    (degree 1 or 2).  Degrees 3 and 4 are never given: on a closed
    oriented 5-manifold the Hodge star pairs them with degrees 1 and 0,
    and the engine derives them.
    """
    degree: int
    kind: str
    mu: object
    mult: int
    flags: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "mu", _as_number(self.mu))
        object.__setattr__(self, "flags", frozenset(self.flags))
        if self.kind not in ("function", "coexact"):
            raise SpectralDataError(f"unknown line kind {self.kind!r}")
        if self.kind == "function" and self.degree != 0:
            raise SpectralDataError("function lines have degree 0")
        if self.kind == "coexact" and self.degree not in (1, 2):
            raise SpectralDataError(
                "coexact lines carry degree 1 or 2; degrees 3 and 4 are "
                "derived by duality -- give the degree 4-p line instead")
        if not (isinstance(self.mult, int) and self.mult >= 1):
            raise SpectralDataError("multiplicity must be a positive integer")
        if self.mu <= 0:
            raise SpectralDataError(
                "eigenvalue lines are strictly positive; zero modes are "
                "carried by the Betti numbers")
        bad = self.flags - ALLOWED_FLAGS
        if bad:
            raise SpectralDataError(f"unknown flags {sorted(bad)}")


class LinkSpectralData:
    """Validated spectral and topological data of a 5-dimensional link.

    Enforced on construction:

    * the not-round-sphere flag must be set -- the branch tables assume
      the link carries no constant-curvature metric;
    * Betti numbers: b0 = 1, b1 = 0, Poincare duality b_p = b_{5-p};
    * function eigenvalues are > 5;
    * coclosed 1-form eigenvalues are >= 8, with equality exactly on
      lines flagged 'killing-dual';
    * on a regular link, coexact 2-form eigenvalues are > 4.
    """

    def __init__(self, name: str, regular: bool, not_round_sphere: bool,
                 lines, betti, dim: int = 5):
        if dim != 5:
            raise SpectralDataError("spectral data model is for 5-links")
        if not not_round_sphere:
            raise SpectralDataError(
                "link must be declared not isometric to the round 5-sphere; "
                "behaviour without this flag is undefined and rejected")
        betti = list(betti)
        if len(betti) != 6:
            raise SpectralDataError("need Betti numbers b0..b5")
        if any(not isinstance(b, int) or b < 0 for b in betti):
            raise SpectralDataError("Betti numbers are nonnegative integers")
        if betti[0] != 1:
            raise SpectralDataError("link must be connected (b0 = 1)")
        if betti[1] != 0:
            raise SpectralDataError("link has finite fundamental group "
                                    "(b1 = 0)")
        for p in range(6):
            if betti[p] != betti[5 - p]:
                raise SpectralDataError("Betti numbers must satisfy "
                                        "Poincare duality b_p = b_{5-p}")
        self.name = name
        self.dim = 5
        self.regular = bool(regular)
        self.not_round_sphere = True
        self.betti = betti
        self.lines = tuple(line if isinstance(line, SpectralLine)
                           else SpectralLine(**line) for line in lines)
        self._validate_bounds()

    def _validate_bounds(self):
        for line in self.lines:
            if line.kind == "function":
                if not line.mu > 5:
                    raise SpectralDataError(
                        "function eigenvalues are strictly greater than 5")
                if "killing-dual" in line.flags:
                    raise SpectralDataError(
                        "killing-dual marks coexact 1-form lines only")
            elif line.degree == 1:
                if line.mu < 8 and not _num_eq(line.mu, 8):
                    raise SpectralDataError(
                        "coclosed 1-form eigenvalues are at least 8")
                is_eight = _num_eq(line.mu, 8)
                has_flag = "killing-dual" in line.flags
                if is_eight != has_flag:
                    raise SpectralDataError(
                        "eigenvalue-8 coexact 1-form lines are exactly the "
                        "killing-dual ones")
                if ("killing-spinor-preserving" in line.flags
                        and not has_flag):
                    raise SpectralDataError(
                        "killing-spinor-preserving implies killing-dual")
            elif line.degree == 2:
                if "killing-dual" in line.flags:
                    raise SpectralDataError(
                        "killing-dual marks coexact 1-form lines only")
                if self.regular and not line.mu > 4:
                    raise SpectralDataError(
                        "on a regular link, coexact 2-form eigenvalues "
                        "are strictly greater than 4")

    # -------------------------------------------------- multiplicity lookup

    def betti_number(self, p: int) -> int:
        if 0 <= p <= 5:
            return self.betti[p]
        return 0

    def coexact_multiplicity(self, p: int, mu) -> int:
        """Multiplicity of coexact p-eigenforms at eigenvalue mu.

        p = 0 means nonconstant eigenfunctions; p = 3, 4 are resolved to
        4-p through the Hodge star.  Nonpositive mu never matches a line.
        """
        if p < 0 or p > 4:
            return 0
        if p > 2:
            p = 4 - p
        if mu <= 0:
            return 0
        kind = "function" if p == 0 else "coexact"
        return sum(line.mult for line in self.lines
                   if line.kind == kind and line.degree == p
                   and _num_eq(line.mu, mu))

    def killing_multiplicity(self, spinor_preserving: bool = False) -> int:
        """Dimension of the Killing-dual eigenvalue-8 space (or its
        spinor-preserving subspace)."""
        want = ("killing-spinor-preserving" if spinor_preserving
                else "killing-dual")
        return sum(line.mult for line in self.lines if want in line.flags)

    # ------------------------------------------------------------- JSON

    @classmethod
    def from_json_dict(cls, d: dict) -> "LinkSpectralData":
        link = d.get("link", d)
        if "not_round_sphere" in link:
            nrs = link["not_round_sphere"]
        elif "not-round-sphere" in link:
            nrs = link["not-round-sphere"]
        else:
            raise SpectralDataError(
                "spectral JSON must set \"not_round_sphere\"")
        lines = []
        for raw in link.get("lines", []):
            lines.append(SpectralLine(
                degree=raw["degree"], kind=raw["kind"],
                mu=_parse_json_number(raw["mu"]), mult=raw["mult"],
                flags=frozenset(raw.get("flags", []))))
        return cls(name=link.get("name", ""),
                   regular=link["regular"], not_round_sphere=nrs,
                   lines=lines, betti=link["betti"],
                   dim=link.get("dim", 5))

    def to_json_dict(self) -> dict:
        return {"link": {
            "name": self.name, "dim": 5, "regular": self.regular,
            "not_round_sphere": True, "betti": list(self.betti),
            "lines": [{"degree": line.degree, "kind": line.kind,
                       "mu": _dump_json_number(line.mu), "mult": line.mult,
                       "flags": sorted(line.flags)}
                      for line in self.lines]}}


def _parse_json_number(x):
    if isinstance(x, str):
        return Fraction(x)
    return _as_number(x)


def _dump_json_number(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, int):
        return x
    return float(x)


# ---------------------------------------------------------------- roots

@dataclass(frozen=True)
class IndicialRoot:
    lam: object
    operator: str
    degree: object
    multiplicity: int
    log_order: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("an indicial root has multiplicity >= 1")
        if self.log_order not in (0, 1):
            raise ValueError("log order is 0 or 1")


def _degenerate_rate(n: int):
    return -Fraction(n - 2, 2)


def harmonic_form_dim(data: LinkSpectralData, n: int, k: int, lam) -> int:
    """Dimension of homogeneous harmonic k-forms at rate lam on the n-cone.

    Sums the four component types; the tangential coefficient of type 'i'
    is a closed (k-1)-eigenform (harmonic at eigenvalue zero, exact above
    it), types 'ii'/'iii' run over coexact (k-1)-eigenforms, and type 'iv'
    takes a coclosed k-eigenform.  At the degenerate rate -(n-2)/2 types
    'ii' and 'iii' coincide and count once.
    """
    if not 0 <= k <= n:
        raise ValueError(f"no {k}-forms on an {n}-cone")
    lam = _as_number(lam)
    dim = 0
    if k >= 1:
        mu = (lam + k - 2) * (lam + n - k)
        if mu > 0:
            dim += data.coexact_multiplicity(k - 2, mu)
        elif _num_eq(mu, 0):
            dim += data.betti_number(k - 1)
        mu2 = (lam + k) * (lam + n - k)
        mu3 = (lam + k - 2) * (lam + n - k - 2)
        if mu2 > 0:
            dim += data.coexact_multiplicity(k - 1, mu2)
        if mu3 > 0 and not _num_eq(lam, _degenerate_rate(n)):
            dim += data.coexact_multiplicity(k - 1, mu3)
    mu4 = (lam + n - k - 2) * (lam + k)
    if mu4 > 0:
        dim += data.coexact_multiplicity(k, mu4)
    elif _num_eq(mu4, 0):
        dim += data.betti_number(k)
    return dim


def closed_coclosed_dim(data: LinkSpectralData, n: int, k: int, lam) -> int:
    """Dimension of closed-and-coclosed homogeneous k-forms at rate lam.

    Type 'i' survives only at lam = k - n (harmonic coefficient), type
    'iv' only at lam = -k; type 'ii' always does, type 'iii' never --
    except at the degenerate rate, where it equals type 'ii' and the
    count stays single.
    """
    if not 0 <= k <= n:
        raise ValueError(f"no {k}-forms on an {n}-cone")
    lam = _as_number(lam)
    dim = 0
    if k >= 1 and _num_eq(lam, k - n):
        dim += data.betti_number(k - 1)
    if k >= 1:
        mu2 = (lam + k) * (lam + n - k)
        if mu2 > 0:
            dim += data.coexact_multiplicity(k - 1, mu2)
    if _num_eq(lam, -k):
        dim += data.betti_number(k)
    return dim


@dataclass(frozen=True)
class DiracKernel:
    dimension: int
    description: str


def dirac_kernel_cone(data: LinkSpectralData, lam) -> DiracKernel:
    """Kernel of the cone Dirac operator at homogeneity rate lam in [-5, 1].

    The table: two constants at rate 0; trivial on (-5, 0); a radial/Reeb
    pair at -5; exact 1-forms from eigenfunctions at (lam+5)(lam+1) on
    (0, 1); and at rate 1 the spinor-preserving Killing duals together
    with the eigenvalue-12 eigenfunctions.
    """
    lam = _as_number(lam)
    if lam < -5 or lam > 1:
        raise OutsideTableError("Dirac kernel table covers rates in [-5, 1]")
    if _num_eq(lam, 1):
        d0 = data.killing_multiplicity(spinor_preserving=True)
        m12 = data.coexact_multiplicity(0, 12)
        return DiracKernel(d0 + m12,
                           "spinor-preserving Killing duals plus "
                           "eigenvalue-12 eigenfunctions")
    if _num_eq(lam, 0):
        return DiracKernel(2, "two constant spinor components")
    if _num_eq(lam, -5):
        return DiracKernel(2, "radial 1-form and weighted Reeb form")
    if lam > 0:
        mu = (lam + 5) * (lam + 1)
        m = data.coexact_multiplicity(0, mu)
        return DiracKernel(m, "exact 1-forms from eigenfunctions" if m
                           else "trivial")
    return DiracKernel(0, "trivial")


def gauge_kernel_dim(data: LinkSpectralData, lam) -> int:
    """Homogeneous kernel dimension of the two gauge-fixing operators.

    The scalar operator's kernel consists of harmonic functions on the
    cone.  For the 1-form operator the coclosed channel needs a coexact
    1-eigenform at (lam+1)(lam+3), and the channel mixing a function with
    an exact 1-form needs an eigenfunction at (lam+1)(lam+5) or at
    (lam-1)(lam+3).  (At lam = -2 the mixed channel would need eigenvalue
    -3, so it is empty there for every admissible spectrum.)
    """
    lam = _as_number(lam)
    dim = 0
    if _num_eq(lam, 0) or _num_eq(lam, -4):
        dim += data.betti_number(0)
    dim += data.coexact_multiplicity(0, lam * (lam + 4))
    dim += data.coexact_multiplicity(1, (lam + 1) * (lam + 3))
    if _num_eq((lam + 1) * (lam + 3), 0):
        dim += data.betti_number(1)
    dim += data.coexact_multiplicity(0, (lam + 1) * (lam + 5))
    dim += data.coexact_multiplicity(0, (lam - 1) * (lam + 3))
    return dim


def log_terms(operator: str, lam, n: int) -> int:
    """Log order at a root: 1 only for the Laplacian at rate -(n-2)/2."""
    if operator not in ALLOWED_OPERATORS:
        raise ValueError(f"unknown operator {operator!r}")
    if operator.startswith("laplacian") and _num_eq(lam, _degenerate_rate(n)):
        return 1
    return 0


# ---------------------------------------------------------------- windows

def _parse_operator(operator: str):
    if operator not in ALLOWED_OPERATORS:
        raise ValueError(f"unknown operator {operator!r}; choose one of "
                         f"{', '.join(ALLOWED_OPERATORS)}")
    if operator.startswith("laplacian_"):
        return "laplacian", int(operator.rsplit("_", 1)[1])
    if operator == "d_plus_dstar_even":
        return "dpds", 0
    if operator == "d_plus_dstar_odd":
        return "dpds", 1
    return operator, None


def _merge_candidates(cands):
    """Sort and deduplicate rates, preferring exact representatives."""
    ordered = sorted(cands, key=float)
    merged = []
    for lam in ordered:
        if merged and abs(float(lam) - float(merged[-1])) <= MERGE_TOL:
            if _is_exact(lam) and not _is_exact(merged[-1]):
                merged[-1] = lam
            continue
        merged.append(lam)
    return merged


def _laplacian_candidates(data, n, k):
    cands = set()
    for line in data.lines:
        for p in {line.degree, 4 - line.degree}:
            if p == k - 2:
                cands |= _quad_roots(k - 2, n - k, line.mu)
            if p == k - 1:
                cands |= _quad_roots(k, n - k, line.mu)
                cands |= _quad_roots(k - 2, n - k - 2, line.mu)
            if p == k:
                cands |= _quad_roots(n - k - 2, k, line.mu)
    if data.betti_number(k - 1) > 0:
        cands |= {Fraction(2 - k), Fraction(k - n)}
    if data.betti_number(k) > 0:
        cands |= {Fraction(-k), Fraction(k + 2 - n)}
    return cands


def _dpds_candidates(data, n, parity):
    cands = set()
    for k in range(parity, n + 1, 2):
        for line in data.lines:
            if k - 1 in {line.degree, 4 - line.degree}:
                cands |= _quad_roots(k, n - k, line.mu)
        if data.betti_number(k - 1) > 0:
            cands.add(Fraction(k - n))
        if data.betti_number(k) > 0:
            cands.add(Fraction(-k))
    return cands


def _dirac_candidates(data):
    cands = {Fraction(-5), Fraction(0), Fraction(1)}
    for line in data.lines:
        if line.kind == "function":
            cands |= _quad_roots(5, 1, line.mu)
    return cands


def _gauge_candidates(data):
    cands = {Fraction(0), Fraction(-4)}
    for line in data.lines:
        if line.kind == "function":
            cands |= _quad_roots(0, 4, line.mu)
            cands |= _quad_roots(1, 5, line.mu)
            cands |= _quad_roots(-1, 3, line.mu)
        elif line.degree == 1:
            cands |= _quad_roots(1, 3, line.mu)
    if data.betti_number(1) > 0:
        cands |= {Fraction(-1), Fraction(-3)}
    return cands


def indicial_set(operator: str, data: LinkSpectralData, window):
    """Indicial roots of the operator inside the open window (nu1, nu2).

    Raises WindowOnRootError when an endpoint carries a root, and
    OutsideTableError when the Dirac window leaves [-5, 1].
    """
    kind, k = _parse_operator(operator)
    nu1, nu2 = (_as_number(w) for w in window)
    if not nu1 < nu2:
        raise ValueError("window must satisfy nu1 < nu2")
    n = data.dim + 1

    if kind == "laplacian":
        cands = _laplacian_candidates(data, n, k)

        def dim_at(lam):
            return harmonic_form_dim(data, n, k, lam)
        degree = k
    elif kind == "dpds":
        parity = k

        def dim_at(lam):
            return sum(closed_coclosed_dim(data, n, j, lam)
                       for j in range(parity, n + 1, 2))
        cands = _dpds_candidates(data, n, parity)
        degree = "even" if parity == 0 else "odd"
    elif kind == "dirac":
        if nu1 < -5 or nu2 > 1:
            raise OutsideTableError("Dirac roots are tabulated on [-5, 1]")
        cands = _dirac_candidates(data)

        def dim_at(lam):
            return dirac_kernel_cone(data, lam).dimension
        degree = "spinor"
    else:
        cands = _gauge_candidates(data)

        def dim_at(lam):
            return gauge_kernel_dim(data, lam)
        degree = "mixed"

    roots = []
    for lam in _merge_candidates(cands):
        if lam < nu1 or lam > nu2:
            if not (_num_eq(lam, nu1) or _num_eq(lam, nu2)):
                continue
        mult = dim_at(lam)
        if mult == 0:
            continue
        if _num_eq(lam, nu1) or _num_eq(lam, nu2):
            raise WindowOnRootError(
                f"window endpoint {lam} is an indicial root of {operator}")
        log_order = log_terms(operator, lam, n)
        if log_order:
            mult *= 2
        roots.append(IndicialRoot(lam=lam, operator=operator, degree=degree,
                                  multiplicity=mult, log_order=log_order))
    return roots


def index_jump(operator: str, data: LinkSpectralData, nu1, nu2) -> int:
    """Fredholm index change across (nu1, nu2): the sum of d(lam)."""
    return sum(root.multiplicity
               for root in indicial_set(operator, data, (nu1, nu2)))


# ------------------------------------------------- harmonic spaces downstairs

def harmonic_space_dims(model, nu) -> dict:
    """Dimensions of decaying closed-and-coclosed 2- and 3-forms at rate nu.

    `model` supplies the topology: attributes betti_compact,
    restriction_ranks and betti_link (see topology.CohomologyModel).
    Degree 2 is covered on (-6, 0) away from -2, degree 3 on (-5, -1)
    away from -3 (None outside its window).
    """
    nu = _as_number(nu)
    if not -6 < nu < 0 or _num_eq(nu, -2) or _num_eq(nu, -3):
        raise OutsideTableError(
            "rate must lie in (-6, 0) away from the roots -2 and -3")
    b2c = model.betti_compact[2]
    r2 = model.restriction_ranks[2]
    r3 = model.restriction_ranks[3]
    l2h3 = model.betti_compact[3] - model.betti_link[2] + r2
    h2 = b2c if nu < -2 else b2c + r2
    if nu <= -5 or nu >= -1:
        h3 = None
    else:
        h3 = l2h3 if nu < -3 else l2h3 + 2 * r3
    return {"H2": h2, "H3": h3}


def slow_harmonic_2form_dim(model) -> int:
    """Dimension of decaying harmonic (not necessarily closed) 2-forms on
    a cone-ended space for rates just above -2: the compactly-supported
    degree-2 dimension plus b2 of the link."""
    return model.betti_compact[2] + model.betti_link[2]
