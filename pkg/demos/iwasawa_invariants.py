"""
Iwasawa invariants of a few towers
==================================

For each tower, prepare L_rho(T, 1) to read off (mu, lambda), then compare
v_p(L(chi_n, 1)) with mu + lambda / (p^(n-1)(p-1)) level by level.
"""

from fractions import Fraction

from zptower import make_spec, verify_theorem

towers = [
    make_spec(2, [0, 0, 0, 1]),
    make_spec(2, [0, 0, 0, 0, 0, 1]),
    make_spec(3, [0, 0, 1]),
    make_spec(2, [0, 1], domain="Gm", f_neg=[1]),
    make_spec(3, [0, 1], domain="Gm", f_neg=[1]),
]

for spec in towers:
    rep = verify_theorem(spec)
    print(f"{spec.label():<24} mu = {rep.mu}  lambda = {rep.lam}  nu = {rep.nu}")
    for r in rep.per_n:
        v = Fraction(*r.v_L1)
        status = {True: "holds", False: "FAILS", None: "not applicable"}[r.identity_ok]
        print(f"    n = {r.n}: ell = {r.ell:<3} v(L(chi_n,1)) = {str(v):<5} identity {status}, v_p(h_n) = {r.v_h}")
    print("    ramification:", [(r.ram_lower_bound, r.ram_check) for r in rep.per_n])
