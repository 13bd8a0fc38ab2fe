"""
Midpoint, mean value and trapezoid for convex functions
=======================================================

For convex f on [a, b]: f at the midpoint <= the average of f <= the
average of the endpoint values. In measure language the midpoint atom,
the uniform law and the two-atom endpoint law form a chain in the convex
order. Four engines confirm each link.
"""

import numpy as np

from cxorder import ordering, quadrature

a, b = 0.0, 1.0
mid, uni, trap = (quadrature.rescale(r, a, b) for r in ("midpoint", "uniform", "trapezoid"))

engines = {
    "ohlin": ordering.ohlin_check,
    "levin-steckin": ordering.levin_steckin_check,
    "szostok": ordering.szostok_check,
    "global": lambda m1, m2: ordering.global_check(m1, m2, 1),
}
for label, (m1, m2) in {"midpoint <= uniform": (mid, uni), "uniform <= trapezoid": (uni, trap)}.items():
    print(label, {name: check(m1, m2).verdict.value for name, check in engines.items()})

# %%
# The single crossing of F_2 - F_1 is what the Ohlin test looks for.
print("crossing:", ordering.ohlin_check(mid, uni).crossings)

# %%
# Numbers for one convex function, cosh(3t), whose mean on [0, 1] is sinh(3) / 3.
f = lambda t: np.cosh(3 * t)
print(f"f(mid) = {f(0.5):.6f} <= mean = {np.sinh(3) / 3:.6f} <= ends = {(f(a) + f(b)) / 2:.6f}")

# %%
# With n = 2 the midpoint and trapezoid rules are no longer comparable:
# they disagree on the second moment, and the witness says which monomial shows it.
v = ordering.global_check(mid, trap, 2)
print(v.verdict.value, v.witness, v.reason)
