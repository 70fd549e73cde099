"""Inline verification of the indicial engine against hand-derived tables."""
from fractions import Fraction as F
from types import SimpleNamespace

from conekit.indicial import (
    LinkSpectralData, SpectralLine, SpectralDataError, WindowOnRootError,
    OutsideTableError, rate_candidates, harmonic_form_dim,
    closed_coclosed_dim, dirac_kernel_cone, gauge_kernel_dim, log_terms,
    indicial_set, index_jump, harmonic_space_dims, slow_harmonic_2form_dim)

ok = 0


def check(label, cond):
    global ok
    assert cond, label
    ok += 1
    print(f"  OK {label}")


# sample admissible regular spectrum
S = LinkSpectralData(
    name="sample", regular=True, not_round_sphere=True,
    betti=[1, 0, 2, 2, 0, 1],
    lines=[
        SpectralLine(0, "function", 12, 3, frozenset({"basic"})),
        SpectralLine(0, "function", F(21, 2), 2),
        SpectralLine(0, "function", 6.7, 1),
        SpectralLine(1, "coexact", 8, 2,
                     frozenset({"killing-dual", "killing-spinor-preserving"})),
        SpectralLine(1, "coexact", 8, 1, frozenset({"killing-dual"})),
        SpectralLine(1, "coexact", 15, 2),
        SpectralLine(2, "coexact", 9, 2),
        SpectralLine(2, "coexact", 4.5, 1),
    ])

# --- rate_candidates
check("iv n=6 k=0 mu=0 -> {0,-4}",
      rate_candidates(6, 0, "iv", 0) == {F(0), F(-4)})
check("iv n=6 k=1 mu=8 -> {1,-5}",
      rate_candidates(6, 1, "iv", 8) == {F(1), F(-5)})
check("iv n=2 k=0 mu=9 -> {3,-3}",
      rate_candidates(2, 0, "iv", 9) == {F(3), F(-3)})
r = rate_candidates(6, 1, "ii", F(21, 2))
check("irrational disc -> floats", all(isinstance(x, float) for x in r)
      and abs(min(r) - (-6 - 58 ** 0.5) / 2) < 1e-12)
check("exact rational roots", rate_candidates(6, 2, "ii", 8) == {F(0), F(-6)})
try:
    rate_candidates(6, 2, "ii", -1)
    check("negative mu rejected", False)
except ValueError:
    check("negative mu rejected", True)

# --- laplacian_0 table
roots = indicial_set("laplacian_0", S, (-4.5, 0.5))
check("laplacian_0 roots {-4:1, 0:1}",
      [(r.lam, r.multiplicity, r.log_order) for r in roots]
      == [(F(-4), 1, 0), (F(0), 1, 0)])
roots = indicial_set("laplacian_0", S, (-7, 3))
got = {(round(float(r.lam), 8), r.multiplicity) for r in roots}
import math
lam_a = (-4 - math.sqrt(16 + 4 * 10.5)) / 2
lam_b = (-4 - math.sqrt(16 + 4 * 6.7)) / 2
expect = {(-6.0, 3), (round(lam_a, 8), 2), (round(lam_b, 8), 1), (-4.0, 1),
          (0.0, 1), (round(-4 - lam_a, 8), 2), (round(-4 - lam_b, 8), 1),
          (2.0, 3)}
check("laplacian_0 wide window", got == expect)
check("laplacian_0 duality", all(
    harmonic_form_dim(S, 6, 0, lam) == harmonic_form_dim(S, 6, 0, -4 - lam)
    for lam in (F(2), F(0), F(-4), F(-6), 0.9371)))

# --- laplacian_1 table
check("laplacian_1 dim at 1 = 1+3+3",
      harmonic_form_dim(S, 6, 1, 1) == 7)
check("laplacian_1 dim at -5 = 7 (duality)",
      harmonic_form_dim(S, 6, 1, -5) == 7)
check("laplacian_1 empty on (-4,0)",
      indicial_set("laplacian_1", S, (-4, 0)) == [])
roots = indicial_set("laplacian_1", S, (F(1, 100), F(99, 100)))
lam_c = (-6 + math.sqrt(16 + 4 * 10.5)) / 2
lam_d = (-6 + math.sqrt(16 + 4 * 6.7)) / 2
check("laplacian_1 roots on (0,1)",
      {(round(float(r.lam), 9), r.multiplicity) for r in roots}
      == {(round(lam_c, 9), 2), (round(lam_d, 9), 1)})

# --- laplacian_2 table
check("killing 2-form row at 0 (mu2=8)", harmonic_form_dim(S, 6, 2, 0) == 3)
# at -6 the mu=12 function line also enters through type i: 3 + 3
check("killing 2-form row at -6 (+type-i mu=12)",
      harmonic_form_dim(S, 6, 2, -6) == 6)
check("type-iii row at 2 (mu3=8) + type-i (mu_i=12)",
      harmonic_form_dim(S, 6, 2, 2) == 6)
check("type-iii row at -4 (dual of 0)", harmonic_form_dim(S, 6, 2, -4) == 3)
check("laplacian_2 log doubling at -2",
      [(r.lam, r.multiplicity, r.log_order)
       for r in indicial_set("laplacian_2", S, (F(-21, 10), F(-19, 10)))]
      == [(F(-2), 4, 1)])
check("log_terms", log_terms("laplacian_2", -2, 6) == 1
      and log_terms("laplacian_2", 0, 6) == 0
      and log_terms("d_plus_dstar_even", -2, 6) == 0
      and log_terms("gauge", -2, 6) == 0)
check("index jump across -2 = 2*b2",
      index_jump("laplacian_2", S, F(-21, 10), F(-19, 10)) == 2 * S.betti[2])
# regular link: no laplacian_2 roots on (-4,0) except -2
inside = indicial_set("laplacian_2", S, (F(-39, 10), F(-1, 10)))
check("laplacian_2 regular: only -2 inside (-4,0)",
      [(r.lam, r.multiplicity) for r in inside] == [(F(-2), 4)])

# --- laplacian_3 / coexact-2 rows (type iv (lam+1)(lam+3)=mu)
check("laplacian_3 type-iv mu=9 row",
      harmonic_form_dim(S, 6, 3, F(-2) + 3) == harmonic_form_dim(S, 6, 3, 1)
      and harmonic_form_dim(S, 6, 3, 1) >= 0)
check("laplacian_3 betti row at -3",
      harmonic_form_dim(S, 6, 3, -3) >= 2 * S.betti[2])

# --- duality across the reflection for every operator degree
for k in range(0, 7):
    lams = [F(1), F(-2), F(-5), F(-1, 2), 0.73, -3.88, F(2), F(-6)]
    check(f"harmonic duality k={k}", all(
        harmonic_form_dim(S, 6, k, lam)
        == harmonic_form_dim(S, 6, k, (F(-4) - lam) if not isinstance(
            lam, float) else (-4 - lam)) for lam in lams))
check("laplacian_6 dual of laplacian_0", all(
    harmonic_form_dim(S, 6, 6, lam) == harmonic_form_dim(S, 6, 0, -4 - lam)
    for lam in (F(0), F(-4), F(2), F(-6), F(-2), 0.31)))

# --- closed & coclosed parity counts
even_cc = sum(closed_coclosed_dim(S, 6, k, -2) for k in (0, 2, 4, 6))
odd_cc = sum(closed_coclosed_dim(S, 6, k, -3) for k in (1, 3, 5))
check("even cc at -2 = 2*b2", even_cc == 2 * S.betti[2])
check("odd cc at -3 = 2*b2", odd_cc == 2 * S.betti[2])
check("cc_2 zero on (-6,0) away from -2", all(
    closed_coclosed_dim(S, 6, 2, lam) == 0
    for lam in (F(-59, 10), F(-4), F(-3), F(-1), F(-1, 10), -2.7)))
roots = indicial_set("d_plus_dstar_even", S, (F(-5, 2), F(-3, 2)))
check("even parity root at -2, no log",
      [(r.lam, r.multiplicity, r.log_order, r.degree) for r in roots]
      == [(F(-2), 4, 0, "even")])
roots = indicial_set("d_plus_dstar_odd", S, (F(-7, 2), F(-5, 2)))
check("odd parity root at -3",
      [(r.lam, r.multiplicity, r.log_order) for r in roots]
      == [(F(-3), 4, 0)])

# --- dirac
check("dirac at -5", dirac_kernel_cone(S, -5).dimension == 2)
check("dirac trivial on (-5,0)", all(
    dirac_kernel_cone(S, lam).dimension == 0
    for lam in (F(-9, 2), F(-2), F(-1, 2), -3.3)))
check("dirac at 0", dirac_kernel_cone(S, 0).dimension == 2)
check("dirac at 1 = d0 + m12", dirac_kernel_cone(S, 1).dimension == 2 + 3)
lam_e = (-6 + math.sqrt(16 + 4 * 6.7)) / 2   # (lam+5)(lam+1)=6.7
check("dirac eigenfunction row on (0,1)",
      dirac_kernel_cone(S, lam_e).dimension == 1)
roots = indicial_set("dirac", S, (-4.9, 0.9))
check("dirac indicial_set",
      [(round(float(r.lam), 9), r.multiplicity) for r in roots]
      == [(0.0, 2), (round(lam_e, 9), 1),
          (round((-6 + math.sqrt(58)) / 2, 9), 2)])
try:
    indicial_set("dirac", S, (-6, 0.5))
    check("dirac window outside table", False)
except OutsideTableError:
    check("dirac window outside table", True)
try:
    indicial_set("dirac", S, (-5, 0.5))
    check("dirac window endpoint on root", False)
except (WindowOnRootError, OutsideTableError) as e:
    check("dirac window endpoint on root",
          isinstance(e, WindowOnRootError))

# --- gauge
check("gauge empty on (-4,0)",
      indicial_set("gauge", S, (F(-399, 100), F(-1, 100))) == []
      and all(gauge_kernel_dim(S, lam) == 0
              for lam in (F(-7, 2), F(-2), F(-1, 2), -3.14, -0.25)))
check("gauge at 0 and -4", gauge_kernel_dim(S, 0) == 1
      and gauge_kernel_dim(S, -4) == 1)
# function mu=12 enters via lam(lam+4)=12 -> lam=2,-6 and via the mixed
# channels (lam+1)(lam+5)=12 -> lam=-6.16.., 1.16..? (disc 16+48=64): lam=(-6+8)/2=1, (-6-8)/2=-7
# at 1: mixed channel (2)(6)=12 gives 3, coexact channel (2)(4)=8 gives 3
check("gauge channels at 1", gauge_kernel_dim(S, 1) == 6)
# (lam-1)(lam+3)=12 -> lam^2+2lam-15=(lam+5)(lam-3): lam=3,-5
check("gauge mixed channel at 3", gauge_kernel_dim(S, 3) == 3)
check("gauge coexact channel: (lam+1)(lam+3)=15 -> lam=2",
      gauge_kernel_dim(S, 2) >= 2)

# --- window endpoint on root
try:
    indicial_set("laplacian_2", S, (-2, 0.5))
    check("endpoint on root raises", False)
except WindowOnRootError:
    check("endpoint on root raises", True)

# --- data validation
bad = [
    dict(betti=[1, 0, 2, 3, 0, 1]),                      # PD violated
    dict(betti=[2, 0, 1, 1, 0, 2]),                      # b0 != 1
    dict(betti=[1, 1, 2, 2, 1, 1]),                      # b1 != 0
    dict(lines=[SpectralLine(0, "function", 5, 1)]),     # mu <= 5
    dict(lines=[SpectralLine(1, "coexact", 7, 1)]),      # mu < 8
    dict(lines=[SpectralLine(1, "coexact", 8, 1)]),      # 8 without flag
    dict(lines=[SpectralLine(1, "coexact", 9, 1,
                             frozenset({"killing-dual"}))]),
    dict(lines=[SpectralLine(2, "coexact", 4, 1)]),      # regular needs >4
    dict(not_round_sphere=False),
]
for i, kw in enumerate(bad):
    base = dict(name="x", regular=True, not_round_sphere=True,
                betti=[1, 0, 0, 0, 0, 1], lines=[])
    base.update(kw)
    try:
        LinkSpectralData(**base)
        check(f"bad data {i} rejected", False)
    except SpectralDataError:
        check(f"bad data {i} rejected", True)
try:
    SpectralLine(3, "coexact", 10, 1)
    check("degree-3 line rejected", False)
except SpectralDataError:
    check("degree-3 line rejected", True)

# irregular link may carry low coexact-2 eigenvalues
irr = LinkSpectralData(name="irr", regular=False, not_round_sphere=True,
                       betti=[1, 0, 0, 0, 0, 1],
                       lines=[SpectralLine(2, "coexact", 4, 1)])
check("irregular low 2-form line allowed",
      irr.coexact_multiplicity(2, 4) == 1)
# irregular link: (lam+2)^2 = 4 -> lam = 0, -4: laplacian_2 root inside [-4,0]
check("irregular type-iv root at 0",
      harmonic_form_dim(irr, 6, 2, 0) == 1)

# --- JSON round trip
d = S.to_json_dict()
S2 = LinkSpectralData.from_json_dict(d)
check("json round trip", S2.to_json_dict() == d and S2.betti == S.betti
      and len(S2.lines) == len(S.lines))
d2 = {"link": dict(d["link"])}
d2["link"]["not-round-sphere"] = d2["link"].pop("not_round_sphere")
check("hyphen key accepted",
      LinkSpectralData.from_json_dict(d2).not_round_sphere)
check("fraction via string",
      LinkSpectralData.from_json_dict(
          {"link": {"regular": True, "not_round_sphere": True,
                    "betti": [1, 0, 0, 0, 0, 1],
                    "lines": [{"degree": 0, "kind": "function",
                               "mu": "21/2", "mult": 1}]}}
      ).lines[0].mu == F(21, 2))

# --- harmonic spaces from a topology-style model
kmodel = SimpleNamespace(betti_compact=[0, 0, 1, 0, 2, 0, 1],
                         restriction_ranks=(1, 0, 1, 0, 0, 0),
                         betti_link=[1, 0, 1, 1, 0, 1])
check("K-model H2/H3 below -2",
      harmonic_space_dims(kmodel, F(-5, 2)) == {"H2": 1, "H3": 0})
check("K-model H2/H3 above -2",
      harmonic_space_dims(kmodel, F(-3, 2)) == {"H2": 2, "H3": 0})
check("K-model H3 None near 0",
      harmonic_space_dims(kmodel, F(-1, 2)) == {"H2": 2, "H3": None})
camodel = SimpleNamespace(betti_compact=[0, 0, 0, 0, 3, 0, 1],
                          restriction_ranks=(1, 0, 3, 0, 0, 0),
                          betti_link=[1, 0, 3, 3, 0, 1])
check("cA_p model H2 jumps by r2 = p",
      harmonic_space_dims(camodel, F(-3, 2))["H2"] == 3
      and harmonic_space_dims(camodel, F(-5, 2))["H2"] == 0)
for bad_nu in (F(-2), F(-3), F(0), F(-6), 1):
    try:
        harmonic_space_dims(kmodel, bad_nu)
        check(f"harmonic_space_dims rejects {bad_nu}", False)
    except OutsideTableError:
        check(f"harmonic_space_dims rejects {bad_nu}", True)
check("slow harmonic 2-forms = b2c + b2(link)",
      slow_harmonic_2form_dim(kmodel) == 2)

# --- index jump bulk property on generated regular spectra
import random
rng = random.Random(7)
for trial in range(100):
    b2 = rng.randrange(0, 6)
    lines = [SpectralLine(0, "function", rng.randrange(6, 40),
                          rng.randrange(1, 4))]
    nkd = rng.randrange(0, 3)
    if nkd:
        lines.append(SpectralLine(1, "coexact", 8, nkd,
                                  frozenset({"killing-dual"})))
    lines.append(SpectralLine(1, "coexact", rng.randrange(9, 40),
                              rng.randrange(1, 4)))
    lines.append(SpectralLine(2, "coexact", rng.randrange(5, 40),
                              rng.randrange(1, 4)))
    data = LinkSpectralData(name=f"t{trial}", regular=True,
                            not_round_sphere=True,
                            betti=[1, 0, b2, b2, 0, 1], lines=lines)
    jump = index_jump("laplacian_2", data, F(-21, 10), F(-19, 10))
    assert jump == 2 * b2, (trial, jump, b2)
ok += 1
print("  OK index jump across -2 equals 2*b2 on 100 random regular spectra")

print(f"\nall {ok} indicial checks passed")
