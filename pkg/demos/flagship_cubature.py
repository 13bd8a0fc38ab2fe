"""
Three-node Chebyshev rule against four-node Lobatto on [-1, 1]
==============================================================

Both rules integrate cubics exactly, so they agree on every polynomial of
degree 3. Against 3-convex functions (nonnegative fourth derivative) the
Chebyshev rule never exceeds Lobatto. This script walks through why.
"""

import math

import numpy as np

from cxorder import measure as M
from cxorder import ordering, quadrature

cheb = quadrature.builtin("chebyshev3")
lob = quadrature.builtin("lobatto4")
print("exactness:", cheb.name, cheb.exactness, "|", lob.name, lob.exactness)

# Moments 0..3 agree, the fourth does not.
for k in range(5):
    print(f"m{k}: {M.moment(cheb.measure, k):+.12f}  {M.moment(lob.measure, k):+.12f}")

# %%
# The cascade: H_0 is the gap between the distribution functions, each
# further H_k integrates the previous one. With n = 3 the decision is read
# off the sign changes of H_2 and the value of H_3 between them.
prof = ordering.h_sequence(cheb.measure, lob.measure, 3)
print("H_k(1):", [f"{r:.1e}" for r in prof.endpoint_residuals])
print("crossings of H_2:", prof.catalogue.points)
x = 1 + math.sqrt(5) - 2 * math.sqrt(2)
print("closed form:      ", (-x, 0.0, x))

# %%
# One checkpoint between the outer crossings; it must be nonnegative.
(x2, g2), = prof.checkpoints
print(f"G({x2:.2g}) = {g2:.15f}")
print(f"1/72 + sqrt5/360 - sqrt2/72 = {1 / 72 + math.sqrt(5) / 360 - math.sqrt(2) / 72:.15f}")

# %%
# Both engines agree, and swapping the rules flips the verdict.
cmp = quadrature.compare("chebyshev3", "lobatto4", 3)
print("global:", cmp.verdict.verdict.value, "| crossing:", cmp.crossing.verdict.value)
print("swapped:", ordering.global_check(lob.measure, cheb.measure, 3).verdict.value)

# %%
# A concrete 3-convex function: exp. Chebyshev comes in under Lobatto.
f = np.exp
cheb_f = sum(t.weight * f(t.location) for t in cheb.measure.atoms)
lob_f = sum(t.weight * f(t.location) for t in lob.measure.atoms)
print(f"exp: chebyshev3 {cheb_f:.12f} <= lobatto4 {lob_f:.12f}")
