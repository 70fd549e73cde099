"""Cohomological bookkeeping for circle bundles over cone-ended 6-manifolds.

A 6-manifold with one cone-like end retracts onto its compact core; its
topology enters through Betti numbers, the restriction maps to the link
cross-section, and (when present) the scalar-valued cup pairing on degree
2.  The model here stores exactly that data, validates it against the
long exact sequence of the (core, link) pair and Poincare duality, and
derives the rest: compactly-supported and square-integrable dimensions,
Gysin Betti numbers of circle bundles, and the admissibility locus of a
first Chern class against a fixed cohomology class of the 4-form flux.

Everything is exact integer/Fraction arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class CohomologyError(ValueError):
    """Topological data is inconsistent or insufficient."""


def _check_betti(name, values, length):
    values = list(values)
    if len(values) != length:
        raise CohomologyError(f"{name} needs {length} entries")
    if any(not isinstance(b, int) or b < 0 for b in values):
        raise CohomologyError(f"{name} entries are nonnegative integers")
    return values


class CohomologyModel:
    """Betti numbers and restriction ranks of a 6-manifold with one end.

    betti_base        b_0..b_6 of the open manifold (b_0 = 1, b_6 = 0)
    betti_link        b_0..b_5 of the link cross-section
    restriction_ranks rank of H^k(base) -> H^k(link) for k = 0..5
    pairing           scalar cup pairing on H^2 when b_4 = 1 (b2 x b2,
                      symmetric, rational); None when b_4 = 0
    kahler_cone       predicate on H^2 coordinate vectors; defaults to
                      componentwise positivity

    Construction checks the long exact sequence of the (core, link) pair:
    with compactly-supported dimensions set by duality b^k_c = b_{6-k},
    every k must satisfy  b^{k+1}_c = bL_k - r_k + b_{k+1} - r_{k+1}.
    """

    def __init__(self, betti_base, betti_link, restriction_ranks,
                 pairing=None, kahler_cone=None, name=""):
        self.name = name
        self.betti_base = _check_betti("betti_base", betti_base, 7)
        self.betti_link = _check_betti("betti_link", betti_link, 6)
        self.restriction_ranks = _check_betti(
            "restriction_ranks", restriction_ranks, 6)
        if self.betti_base[0] != 1:
            raise CohomologyError("base must be connected (b_0 = 1)")
        if self.betti_base[6] != 0:
            raise CohomologyError("open 6-manifold has b_6 = 0")
        if self.betti_link[0] != 1:
            raise CohomologyError("link must be connected")
        if self.betti_link[1] != 0:
            raise CohomologyError("link must have b_1 = 0")
        for p in range(6):
            if self.betti_link[p] != self.betti_link[5 - p]:
                raise CohomologyError("link Betti numbers violate duality")
        for k in range(6):
            if self.restriction_ranks[k] > min(self.betti_base[k],
                                               self.betti_link[k]):
                raise CohomologyError(
                    f"restriction rank r_{k} exceeds its source or target")
        if self.restriction_ranks[0] != 1:
            raise CohomologyError("restriction is an isomorphism on H^0")
        self.betti_compact = [self.betti_base[6 - k] for k in range(7)]
        for k in range(-1, 6):
            lhs = self.betti_compact[k + 1]
            rhs = (self._bl(k) - self._rr(k)
                   + self._bb(k + 1) - self._rr(k + 1))
            if lhs != rhs:
                raise CohomologyError(
                    f"long exact sequence fails at degree {k + 1}: "
                    f"b^{k + 1}_c = {lhs} but the sequence forces {rhs}")
        b2, b4 = self.betti_base[2], self.betti_base[4]
        if pairing is not None:
            if b4 != 1:
                raise CohomologyError(
                    "scalar cup pairing needs a one-dimensional H^4")
            pairing = [[Fraction(x) for x in row] for row in pairing]
            if len(pairing) != b2 or any(len(row) != b2 for row in pairing):
                raise CohomologyError("pairing must be b_2 x b_2")
            for i in range(b2):
                for j in range(b2):
                    if pairing[i][j] != pairing[j][i]:
                        raise CohomologyError("cup pairing is symmetric")
        self.pairing = pairing
        self._kahler_cone = kahler_cone

    def _bb(self, k):
        return self.betti_base[k] if 0 <= k <= 6 else 0

    def _bl(self, k):
        return self.betti_link[k] if 0 <= k <= 5 else 0

    def _rr(self, k):
        return self.restriction_ranks[k] if 0 <= k <= 5 else 0

    def in_kahler_cone(self, a) -> bool:
        if self._kahler_cone is not None:
            return bool(self._kahler_cone(a))
        return all(x > 0 for x in a)

    def l2_dims(self):
        return l2_cohomology(self)

    # ------------------------------------------------------------- JSON

    @classmethod
    def from_json_dict(cls, d: dict) -> "CohomologyModel":
        m = d.get("model", d)
        pairing = m.get("pairing")
        if pairing is not None:
            pairing = [[Fraction(x) if isinstance(x, str) else x
                        for x in row] for row in pairing]
        return cls(betti_base=m["betti_base"], betti_link=m["betti_link"],
                   restriction_ranks=m["restriction_ranks"],
                   pairing=pairing, name=m.get("name", ""))

    def to_json_dict(self) -> dict:
        pairing = None
        if self.pairing is not None:
            pairing = [[x.numerator if x.denominator == 1 else str(x)
                        for x in row] for row in self.pairing]
        return {"model": {"name": self.name,
                          "betti_base": list(self.betti_base),
                          "betti_link": list(self.betti_link),
                          "restriction_ranks": list(self.restriction_ranks),
                          "pairing": pairing}}


@dataclass(frozen=True)
class CircleBundleSpec:
    """A principal circle bundle fixed by its first Chern class.

    c1 is given in the integral basis of H^2 of the base; `primitive`
    asserts it is a primitive lattice vector (making the total space
    simply connected over a simply connected base).  cup_ranks, when
    supplied, are the ranks of cup product with c1 from H^j to H^{j+2};
    left None they are derived where the Betti numbers force them.
    """
    c1: tuple
    primitive: bool = False
    cup_ranks: tuple = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))
        if self.primitive:
            if not any(self.c1):
                raise CohomologyError("zero class is not primitive")
            if math.gcd(*(abs(x) for x in self.c1)) != 1:
                raise CohomologyError(
                    "primitive class has coprime coordinates")
        if self.cup_ranks is not None:
            object.__setattr__(self, "cup_ranks",
                               tuple(int(x) for x in self.cup_ranks))
            if any(x < 0 for x in self.cup_ranks):
                raise CohomologyError("cup ranks are nonnegative")


def gysin_betti_from_ranks(betti, cup_ranks):
    """Betti numbers of a circle bundle from base data.

    betti are b_0..b_m of the base, cup_ranks the ranks of cup product
    with the Euler class from H^j to H^{j+2} (j = 0..m-2).  The long
    exact sequence splits into  b_k(total) = (b_k - r_{k-2})
    + (b_{k-1} - r_{k-1}); inconsistent ranks surface as negative
    entries and are rejected.
    """
    betti = list(betti)
    m = len(betti) - 1
    cup = list(cup_ranks)
    if len(cup) != m - 1:
        raise CohomologyError(f"need cup ranks for j = 0..{m - 2}")

    def b(j):
        return betti[j] if 0 <= j <= m else 0

    def r(j):
        return cup[j] if 0 <= j <= m - 2 else 0

    for j in range(m - 1):
        if r(j) > min(b(j), b(j + 2)):
            raise CohomologyError(
                f"cup rank r_{j} exceeds min(b_{j}, b_{j + 2})")
    out = []
    for k in range(m + 2):
        coker = b(k) - r(k - 2)
        kernel = b(k - 1) - r(k - 1)
        if coker < 0 or kernel < 0:
            raise CohomologyError(f"inconsistent cup ranks at degree {k}")
        out.append(coker + kernel)
    assert sum((-1) ** k * v for k, v in enumerate(out)) == 0
    return out


def derive_cup_ranks(betti, c1, pairing=None):
    """Cup-product ranks with c1 in the cases the Betti numbers force.

    Rules: rank 0 whenever source or target vanishes; rank 1 from H^0
    when c1 is nonzero; on a closed oriented base the top-degree rank
    equals the H^0 rank by duality; with a scalar degree-2 pairing the
    H^2 -> H^4 rank is governed by the pairing vector.  Any position
    not covered must be supplied explicitly.
    """
    betti = list(betti)
    m = len(betti) - 1
    nonzero = any(c1)
    closed = betti[m] == 1 and all(betti[j] == betti[m - j]
                                   for j in range(m + 1))
    ranks = []
    for j in range(m - 1):
        if betti[j] == 0 or betti[j + 2] == 0:
            ranks.append(0)
        elif j == 0:
            ranks.append(1 if nonzero else 0)
        elif j == m - 2 and closed:
            ranks.append(1 if nonzero else 0)
        elif j == 2 and betti[4] == 1 and pairing is not None:
            v = [sum(Fraction(row[i]) * c1[i] for i in range(len(c1)))
                 for row in pairing]
            ranks.append(1 if any(v) else 0)
        else:
            raise CohomologyError(
                f"cup rank H^{j} -> H^{j + 2} is not determined by the "
                "Betti numbers; supply cup_ranks explicitly")
    return ranks


def gysin_betti(base, spec: CircleBundleSpec):
    """Betti numbers of the circle bundle given by spec over the base.

    base is a CohomologyModel (its open 6-manifold) or a plain Betti
    list, e.g. of the closed 5-dimensional link.
    """
    if isinstance(base, CohomologyModel):
        betti = base.betti_base
        pairing = base.pairing
    else:
        betti = list(base)
        pairing = None
    cup = spec.cup_ranks
    if cup is None:
        cup = derive_cup_ranks(betti, spec.c1, pairing)
    return gysin_betti_from_ranks(betti, cup)


def l2_cohomology(model: CohomologyModel):
    """Square-integrable cohomology dimensions of the cone-ended space.

    In each degree this is the image of compactly-supported in ordinary
    cohomology, b_k - r_k; the validated exact sequence makes the result
    automatically symmetric about the middle degree.
    """
    dims = [model.betti_base[k] - model.restriction_ranks[k]
            for k in range(6)] + [0]
    for k in range(7):
        assert dims[k] == dims[6 - k], "duality of L2 dimensions"
    return dims


# ------------------------------------------------------- flux admissibility

def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def integer_kernel_of_row(v):
    """Basis of the integer solutions x of sum_i v_i x_i = 0.

    Column-reduces the row to (g, 0, ..., 0) by unimodular moves and
    returns the columns that end up annihilated — a genuine lattice
    basis, not just a spanning set.
    """
    v = [int(x) for x in v]
    n = len(v)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    w = list(v)
    for i in range(1, n):
        if w[i] == 0:
            continue
        g, x, y = _xgcd(w[0], w[i])
        c0, ci = cols[0], cols[i]
        new0 = [x * c0[t] + y * ci[t] for t in range(n)]
        newi = [(-w[i] // g) * c0[t] + (w[0] // g) * ci[t] for t in range(n)]
        cols[0], cols[i] = new0, newi
        w[0], w[i] = g, 0
    if w[0] == 0:
        return cols
    return cols[1:]


def _slice_meets_open_cone(w):
    """Does {a : w . a = 0} meet the open positive orthant?"""
    if all(x == 0 for x in w):
        return True
    has_pos = any(x > 0 for x in w)
    has_neg = any(x < 0 for x in w)
    return has_pos and has_neg


def ch1_check(model: CohomologyModel, c1, a) -> dict:
    """Admissibility of a first Chern class against a degree-2 class.

    The obstruction is the cup pairing value <c1 . a> in H^4; it must
    vanish.  Returns the value, the verdict, an integer basis of the
    admissible c1 lattice for this fixed a, and the normal vector of the
    admissible slice of the positive cone for this fixed c1 (with a flag
    saying whether that slice is nonempty).
    """
    b2 = model.betti_base[2]
    c1 = [int(x) for x in c1]
    a = [Fraction(x) for x in a]
    if len(c1) != b2 or len(a) != b2:
        raise CohomologyError(f"classes live in H^2 of dimension {b2}")
    if not model.in_kahler_cone(a):
        raise CohomologyError("class a lies outside the Kahler cone")
    if model.betti_base[4] == 0:
        return {"admissible": True, "pairing_value": Fraction(0),
                "c1_lattice_basis": integer_kernel_of_row([0] * b2),
                "kahler_normal": [Fraction(0)] * b2,
                "kahler_slice_nonempty": True}
    if model.pairing is None:
        raise CohomologyError("model carries no cup pairing")
    P = model.pairing
    v = [sum(P[i][j] * a[j] for j in range(b2)) for i in range(b2)]
    value = sum(c1[i] * v[i] for i in range(b2))
    den = math.lcm(*(x.denominator for x in v)) if v else 1
    vint = [int(x * den) for x in v]
    w = [sum(P[i][j] * c1[j] for j in range(b2)) for i in range(b2)]
    return {"admissible": value == 0,
            "pairing_value": value,
            "c1_lattice_basis": integer_kernel_of_row(vint),
            "kahler_normal": w,
            "kahler_slice_nonempty": _slice_meets_open_cone(w)}


# ------------------------------------------------------------- fixtures

@dataclass(frozen=True)
class ConeFamily:
    """A named cone-ended space with its bundle bookkeeping precomputed."""
    model: CohomologyModel
    link_description: str
    equation: str = ""
    reeb_weights: tuple = ()
    total_space_betti: tuple = ()
    end_bundle_betti: tuple = ()
    end_description: str = ""


def cAp_model(p: int) -> ConeFamily:
    """Small resolution of the rank-p conifold-type hypersurface family.

    The base has b_2 = p and no middle cohomology; the link is a
    connected sum of p copies of S^2 x S^3.  Any primitive circle bundle
    over the base has b_2 = p - 1, b_3 = p; over the link it acquires
    the extra dual classes, b_2 = p - 1, b_3 = 2p.
    """
    if not (isinstance(p, int) and p >= 1):
        raise CohomologyError("the family is indexed by integers p >= 1")
    model = CohomologyModel(
        betti_base=[1, 0, p, 0, 0, 0, 0],
        betti_link=[1, 0, p, p, 0, 1],
        restriction_ranks=[1, 0, p, 0, 0, 0],
        pairing=None,
        name=f"cA_{p} small resolution")
    c1 = tuple([1] + [0] * (p - 1))
    spec = CircleBundleSpec(c1=c1, primitive=True, name="total space")
    total = tuple(gysin_betti(model, spec))
    end = tuple(gysin_betti(model.betti_link,
                            CircleBundleSpec(c1=c1, primitive=True,
                                             name="end bundle")))
    w = Fraction(3 * (p + 1), 4)
    return ConeFamily(
        model=model,
        link_description=f"#{p}(S^2 x S^3)",
        equation=f"x^2 + y^2 + z^{p + 1} - w^{p + 1} = 0",
        reeb_weights=(w, w, Fraction(3, 2), Fraction(3, 2)),
        total_space_betti=total,
        end_bundle_betti=end,
        end_description=f"#{p - 1}(S^2 x S^4) # {p}(S^3 x S^3)")


def kp1p1_model() -> CohomologyModel:
    """Canonical line bundle over the product of two projective lines.

    b_2 = 2 with hyperbolic cup pairing into the one-dimensional H^4;
    the link is an S^3 x S^3 quotient with b_2 = b_3 = 1.
    """
    return CohomologyModel(
        betti_base=[1, 0, 2, 0, 1, 0, 0],
        betti_link=[1, 0, 1, 1, 0, 1],
        restriction_ranks=[1, 0, 1, 0, 0, 0],
        pairing=[[0, 1], [1, 0]],
        name="canonical bundle over P1 x P1")


def kp1p1_bundles(m: int, n: int, a) -> dict:
    """Admissibility of the (m, n) circle bundle family over the
    canonical-bundle base, with collapsing class proportional to
    (|m|, |n|) scaled by a > 0.

    Coprime (m, n) give the Chern class (m, -n); the pairing value is
    a(m|n| - n|m|), zero exactly when mn > 0.
    """
    if math.gcd(abs(m), abs(n)) != 1:
        raise CohomologyError("the bundle family needs coprime (m, n)")
    a = Fraction(a)
    if a <= 0:
        raise CohomologyError("scale must be positive")
    model = kp1p1_model()
    c1 = (m, -n)
    cls = (a * abs(m), a * abs(n))
    if not all(x > 0 for x in cls):
        raise CohomologyError("collapsing class must be in the open cone")
    report = ch1_check(model, c1, cls)
    admissible = m * n > 0
    assert report["admissible"] == admissible
    return {"c1": c1, "kahler_class": cls, "admissible": admissible,
            "pairing_value": report["pairing_value"],
            "check": report,
            "spec": CircleBundleSpec(c1=c1, primitive=True,
                                     name=f"({m},{n}) bundle")}
