"""
The running example: y^2 + y = x^3 over F_2
===========================================

Frobenius values, the T-adic L-function, and its first specialization,
checked against a brute-force count of points on the layer-1 curve.
"""

from zptower import make_spec, frobenius_values, tadic_l, specialize, layer_zeta
from zptower.ff import poly_str
from zptower.tower import layer_one_point_counts, layer_one_zeta_oracle

spec = make_spec(2, [0, 0, 0, 1])
print(spec.label())
print("precision:", spec.precision.as_dict())

# rho(Frob_x) for the closed points of degree <= 3
for pt, v in frobenius_values(spec, 3):
    print(f"  {poly_str(spec.ctx, pt.minpoly):<12} deg {pt.degree}  rho = {v.value}")

L = tadic_l(spec)
# the s^1 coefficient is (1+T)^0 + (1+T)^1 = 2 + T
print("s^1 coefficient:", L.coeff(1).coeffs[:4], "...")

# T = zeta_2 - 1 = -2 gives L(chi_1, s)
L1 = specialize(L, 1)
print("L(chi_1, s) coefficients:", [c.coeffs[0] for c in L1.coefficients])

# the same polynomial from counting points on y^2 + y = x^3
print("N_1, N_2 =", layer_one_point_counts(spec, 2))
print("P(X_1, s) from counts:", layer_one_zeta_oracle(spec))

# higher layers: degrees grow like d p^(n-1) - 1
for n in (1, 2, 3):
    Ln = specialize(L, n)
    print(f"n = {n}: ell = {Ln.degree}, deg P(X_n, s) = {layer_zeta(spec, n).degree}")
