"""
Looking for towers with lambda != 0
===================================

Scan small families of f and tabulate (mu, lambda). Affine-line towers
over F_2 with odd-degree f tend to have lambda = 0; the torus with a
pole at 0 does not.
"""

from zptower import make_spec
from zptower.iwasawa import SCAN_HEADER, scan_family

affine = make_spec(2, [0, 1], a=12)
print(SCAN_HEADER)
# x, x^3 + a x^2 + b x with a, b in {0, 1}, and x^5
for row in scan_family(affine, [[0, 1], [0, [0, 1], [0, 1], 1], [0, 0, 0, 0, 0, 1]]):
    print(row.tsv())

# degrees on the torus grow faster, so give the margin test more digits
torus = make_spec(2, [0, 1], domain="Gm", f_neg=[1], a=20)
for row in scan_family(torus, [[0, 1], [0, 1, 0, 1]]):
    print(row.tsv())
