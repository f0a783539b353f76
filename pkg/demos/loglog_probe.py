"""
A power series matrix that is not nuclear
=========================================

With alpha_j = log(1 + log j) the ratio a_{j,q}/a_{j,r} decays slower than
any power of j.  The symbolic engine has no basis function for this, so the
evidence is numeric: partial sums keep growing across every decade.
"""

from koethe_lab.construct import power_series_grid
from koethe_lab.matrix_calculus import probe_nuclearity

tab = power_series_grid("log log j", 10 ** 6, 4)
for r in (1, 2, 3):
    pr = probe_nuclearity(tab, 0, r)
    sums = ", ".join(f"{s:.3g}" for s in pr.partial_sums)
    print(f"q=0 r={r}: partial sums at 10^k -> {sums}; diverging = {pr.diverging}")

# For comparison, alpha_j = j: the sums level off immediately.
pr = probe_nuclearity(power_series_grid("j", 10 ** 4, 2), 0, 1)
print("alpha_j = j:", pr.diverging)
