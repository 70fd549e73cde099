"""Inline verification of the topology module fixtures and operations."""
from fractions import Fraction as F

from conekit.topology import (
    CohomologyModel, CircleBundleSpec, CohomologyError, gysin_betti,
    gysin_betti_from_ranks, derive_cup_ranks, l2_cohomology, ch1_check,
    integer_kernel_of_row, cAp_model, kp1p1_model, kp1p1_bundles)
from conekit.indicial import harmonic_space_dims, slow_harmonic_2form_dim

ok = 0


def check(label, cond):
    global ok
    assert cond, label
    ok += 1
    print(f"  OK {label}")


# --- cA_p family
for p in range(1, 21):
    fam = cAp_model(p)
    assert fam.total_space_betti == (1, 0, p - 1, p, 0, 0, 0, 0), p
    assert fam.end_bundle_betti == (1, 0, p - 1, 2 * p, p - 1, 0, 1), p
    assert fam.model.betti_compact == [0, 0, 0, 0, p, 0, 1], p
    assert l2_cohomology(fam.model) == [0, 0, 0, 0, 0, 0, 0], p
    assert fam.reeb_weights == (F(3 * (p + 1), 4), F(3 * (p + 1), 4),
                                F(3, 2), F(3, 2)), p
ok += 1
print("  OK cA_p family: b2(M)=p-1, b3(M)=p, b2(N)=p-1, b3(N)=2p, "
      "L2 trivial, Reeb weights (p=1..20)")
fam = cAp_model(3)
check("cA_p strings", fam.link_description == "#3(S^2 x S^3)"
      and fam.end_description == "#2(S^2 x S^4) # 3(S^3 x S^3)"
      and "z^4" in fam.equation)
try:
    cAp_model(0)
    check("p >= 1 enforced", False)
except CohomologyError:
    check("p >= 1 enforced", True)

# --- K over P1xP1
K = kp1p1_model()
check("K compact support dims", K.betti_compact == [0, 0, 1, 0, 2, 0, 1])
check("K L2 dims", l2_cohomology(K) == [0, 0, 1, 0, 1, 0, 0])
spec = CircleBundleSpec(c1=(1, 1), primitive=True)
check("K bundle Betti", gysin_betti(K, spec) == [1, 0, 1, 1, 0, 1, 0, 0])

# --- harmonic space dims tie-in with the indicial layer
check("K harmonic 2/3-form dims across -2",
      harmonic_space_dims(K, F(-5, 2)) == {"H2": 1, "H3": 0}
      and harmonic_space_dims(K, F(-3, 2)) == {"H2": 2, "H3": 0})
check("slow harmonic 2-forms (K) = b2c + b2(link) = 2",
      slow_harmonic_2form_dim(K) == 2
      and slow_harmonic_2form_dim(K)
      == harmonic_space_dims(K, F(-3, 2))["H2"]
      + K.restriction_ranks[3])
cam = cAp_model(4).model
check("cA_4 harmonic 2-form dims across -2",
      harmonic_space_dims(cam, F(-5, 2)) == {"H2": 0, "H3": 0}
      and harmonic_space_dims(cam, F(-3, 2)) == {"H2": 4, "H3": 0})

# --- gysin generic behaviour
check("trivial bundle doubles", gysin_betti_from_ranks(
    [1, 0, 2, 0, 1, 0, 0], [0, 0, 0, 0, 0])
    == [1, 1, 2, 2, 1, 1, 0, 0])
check("chi of total space vanishes", sum(
    (-1) ** k * v for k, v in enumerate(gysin_betti(K, spec))) == 0)
try:
    gysin_betti_from_ranks([1, 0, 2, 0, 1, 0, 0], [1, 1, 0, 0, 0])
    check("overflowing cup rank rejected", False)
except CohomologyError:
    check("overflowing cup rank rejected", True)
try:
    derive_cup_ranks([1, 0, 2, 0, 2, 0, 0], (1, 0))
    check("underdetermined rank demands explicit data", False)
except CohomologyError:
    check("underdetermined rank demands explicit data", True)

# --- model validation
try:
    CohomologyModel(betti_base=[1, 0, 3, 0, 0, 0, 0],
                    betti_link=[1, 0, 3, 3, 0, 1],
                    restriction_ranks=[1, 0, 2, 0, 0, 0])
    check("exact sequence violation rejected", False)
except CohomologyError:
    check("exact sequence violation rejected", True)
try:
    CohomologyModel(betti_base=[1, 0, 2, 0, 1, 0, 0],
                    betti_link=[1, 0, 1, 1, 0, 1],
                    restriction_ranks=[1, 0, 1, 0, 0, 0],
                    pairing=[[0, 1], [2, 0]])
    check("asymmetric pairing rejected", False)
except CohomologyError:
    check("asymmetric pairing rejected", True)

# --- integer kernel
for v in ([3, 2], [0, 0], [4], [6, 10, 15], [0, 5, 0, 7]):
    basis = integer_kernel_of_row(v)
    assert all(sum(x * y for x, y in zip(v, vec)) == 0 for vec in basis), v
    expected_rank = len(v) - (1 if any(v) else 0)
    assert len(basis) == expected_rank, v
check("integer kernel bases annihilate and have full rank", True)
# det check on [3,2]: the basis vector must be primitive
b = integer_kernel_of_row([3, 2])[0]
import math
check("kernel vector primitive", math.gcd(abs(b[0]), abs(b[1])) == 1)

# --- ch1_check on the K model
rep = ch1_check(K, (1, -1), (1, 1))
check("ch1 admissible diagonal", rep["admissible"]
      and rep["pairing_value"] == 0 and rep["kahler_slice_nonempty"])
rep = ch1_check(K, (1, 1), (2, 3))
check("ch1 inadmissible same-sign", not rep["admissible"]
      and rep["pairing_value"] == 5
      and not rep["kahler_slice_nonempty"])
# admissible lattice for fixed a=(a1,a2): c with c1*a2 + c2*a1 = 0
rep = ch1_check(K, (0, 0), (F(2, 3), F(5, 7)))
basis = rep["c1_lattice_basis"]
check("lattice basis solves a2 c1 + a1 c2 = 0",
      len(basis) == 1
      and all(F(2, 3) * vec[1] + F(5, 7) * vec[0] == 0 for vec in basis))
try:
    ch1_check(K, (1, 0), (1, -1))
    check("outside Kahler cone rejected", False)
except CohomologyError:
    check("outside Kahler cone rejected", True)
# b4 = 0 means no obstruction
rep = ch1_check(cAp_model(2).model, (1, 1), (1, 1))
check("no H^4 means unconditional admissibility",
      rep["admissible"] and rep["pairing_value"] == 0
      and len(rep["c1_lattice_basis"]) == 2)

# --- the (m, n) bundle family
grid = 0
for m in range(-13, 14):
    for n in range(-13, 14):
        if m == 0 or n == 0 or math.gcd(abs(m), abs(n)) != 1:
            continue
        out = kp1p1_bundles(m, n, 1)
        assert out["admissible"] == (m * n > 0), (m, n)
        assert out["check"]["admissible"] == (m * n > 0), (m, n)
        assert out["pairing_value"] == m * abs(n) - n * abs(m), (m, n)
        grid += 1
check(f"(m,n) sweep admissible iff mn>0 ({grid} points)", grid >= 400)
check("antidiagonal bundle always obstructed",
      not kp1p1_bundles(1, -1, F(7, 2))["admissible"])
try:
    kp1p1_bundles(2, 4, 1)
    check("non-coprime rejected", False)
except CohomologyError:
    check("non-coprime rejected", True)

# --- JSON round trip
d = K.to_json_dict()
K2 = CohomologyModel.from_json_dict(d)
check("model json round trip", K2.to_json_dict() == d
      and K2.pairing == K.pairing)

print(f"\nall {ok} topology checks passed")
