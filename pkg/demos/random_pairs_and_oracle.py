"""
Cross-checking the exact engine against brute force
===================================================

Draw random atomic pairs whose moments agree through order n, decide each
one exactly, then try to break the verdict with ten thousand random
n-convex test functions (nonnegative mixtures of truncated powers plus a
free polynomial of degree n).
"""

from collections import Counter

import numpy as np

from cxorder import measure as M
from cxorder import oracle, ordering

rng = np.random.default_rng(2024)
n = 2


def matched_pair():
    x1 = rng.uniform(-1, 1, 4)
    w1 = rng.dirichlet(np.ones(4))
    mu1 = M.atomic((-1.0, 1.0), x1, w1)
    x2 = np.sort(rng.uniform(-1, 1, n + 1))
    w2 = np.linalg.solve(np.vander(x2, n + 1, increasing=True).T, [M.moment(mu1, k) for k in range(n + 1)])
    return mu1, M.atomic((-1.0, 1.0), x2, w2)


tally = Counter()
for _ in range(200):
    mu1, mu2 = matched_pair()
    v = ordering.global_check(mu1, mu2, n)
    tally[v.verdict.value] += 1
    if v.verdict is ordering.Verdict.HOLDS:
        assert oracle.random_nconvex_suite(mu1, mu2, n, trials=10_000) == 0
    elif v.verdict is ordering.Verdict.NOT_ORDERED:
        f = oracle.from_witness(v.witness, n)
        assert oracle.confirms_violation(f, mu1, mu2)
print(dict(tally))

# %%
# A failing pair up close: the witness knot and the gap it produces.
while True:
    mu1, mu2 = matched_pair()
    v = ordering.global_check(mu1, mu2, n)
    if v.verdict is ordering.Verdict.NOT_ORDERED:
        break
f = oracle.from_witness(v.witness, n)
print("witness:", v.witness, "gap:", oracle.expectation_gap(f, mu1, mu2))
print("random functions that also break it:", oracle.random_nconvex_suite(mu1, mu2, n, trials=10_000))
