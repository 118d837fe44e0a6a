"""
Newton polygons up the tower
============================

Slopes of L(chi_n, s) at each level, and the first slope of the layer
zeta numerator P(X_n, s).
"""

import numpy as np

from zptower import make_spec, tadic_l, specialize, newton_polygon, layer_zeta

for spec in [make_spec(2, [0, 0, 0, 1]), make_spec(2, [0, 1, 0, 1]), make_spec(3, [0, 0, 1])]:
    print(spec.label())
    L = tadic_l(spec)
    for n in range(1, spec.precision.n_max + 1):
        slopes = np.array([float(s) for s in newton_polygon(specialize(L, n)).slopes])
        print(f"  n = {n}: {len(slopes)} slopes, mean {slopes.mean():.3f}, min {slopes.min():.4f}")

    # P(X_n, s) has coefficients up to p^(r g_n); raise a to see the whole polygon
    n = spec.precision.n_max
    deep = spec.with_precision(a=max(spec.precision.a, spec.r * spec.genus(n) + 2), n_max=n)
    for k in range(1, n + 1):
        npg = newton_polygon(layer_zeta(deep, k))
        print(f"  zeta n = {k}: first slope {npg.slopes[0]}, symmetric: {npg.is_symmetric(spec.r)}")
