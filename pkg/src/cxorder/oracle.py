"""Brute-force checks of the ordering inequality against n-convex test functions.

Nothing here touches the H-cascade: expectations go through moments and
truncated moments of the measures only, so this module can falsify or
corroborate the exact engine independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from . import measure as M
from .measure import SignedMeasure

DEFAULT_KNOTS = 8


@dataclass(frozen=True)
class TestFunction:
    """``f(t) = sum_k poly_coeffs[k] t**k + sum_j spline_weights[j] (t - knots[j])_+**order``.

    Nonnegative spline weights keep ``f`` n-convex; the polynomial part has
    degree at most ``order`` and is both n-convex and n-concave.
    """

    __test__ = False  # keep pytest from collecting this class

    order: int
    knots: Tuple[float, ...] = ()
    spline_weights: Tuple[float, ...] = ()
    poly_coeffs: Tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.knots) != len(self.spline_weights):
            raise ValueError("one weight per knot")
        if any(w < 0 for w in self.spline_weights):
            raise ValueError("spline weights must be nonnegative")
        if len(self.poly_coeffs) > self.order + 1:
            raise ValueError("polynomial part must have degree <= order")

    @property
    def kind(self) -> str:
        if self.knots and any(self.poly_coeffs):
            return "mixture"
        return "spline" if self.knots else "monomial"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.polynomial.polynomial.polyval(t, self.poly_coeffs) if self.poly_coeffs else np.zeros_like(t)
        for x, w in zip(self.knots, self.spline_weights):
            out = out + w * np.maximum(t - x, 0.0) ** self.order
        return out

    def magnitude(self, support: Tuple[float, float]) -> float:
        """Upper bound for ``|f|`` on ``support``."""
        a, b = support
        r = max(abs(a), abs(b), 1.0)
        return float(sum(abs(c) * r**k for k, c in enumerate(self.poly_coeffs)) + sum(self.spline_weights) * (b - a) ** self.order)


def from_witness(witness, n: int) -> TestFunction:
    """Turn an ordering witness into the test function it names."""
    if witness.kind == "monomial":
        k = int(witness.param)
        coeffs = [0.0] * k + [float(witness.sign)]
        return TestFunction(n, poly_coeffs=tuple(coeffs))
    return TestFunction(n, knots=(float(witness.param),), spline_weights=(1.0,))


def expectation(f: TestFunction, mu: SignedMeasure) -> float:
    total = sum(c * M.moment(mu, k) for k, c in enumerate(f.poly_coeffs) if c)
    if f.knots:
        total += float(np.dot(f.spline_weights, M.truncated_moment(mu, np.array(f.knots), f.order)))
    return float(total)


def expectation_gap(f: TestFunction, mu1: SignedMeasure, mu2: SignedMeasure) -> float:
    """``int f d(mu1) - int f d(mu2)``; positive means ``f`` breaks ``mu1 <= mu2``."""
    return expectation(f, mu1) - expectation(f, mu2)


def violation_scale(f: TestFunction, mu1: SignedMeasure, mu2: SignedMeasure) -> float:
    return (M.total_variation(mu1) + M.total_variation(mu2)) * f.magnitude(mu1.support)


def confirms_violation(f: TestFunction, mu1: SignedMeasure, mu2: SignedMeasure, tol: float = 1e-9) -> bool:
    return expectation_gap(f, mu1, mu2) > tol * violation_scale(f, mu1, mu2)


def grid_condition_check(
    mu1: SignedMeasure, mu2: SignedMeasure, n: int, grid_size: int = 2001, tol: float = 1e-9
) -> bool:
    """Moment equalities for ``k = 0..n`` plus truncated-power dominance on a uniform grid."""
    return grid_condition_margin(mu1, mu2, n, grid_size, tol) >= 0


def grid_condition_margin(
    mu1: SignedMeasure, mu2: SignedMeasure, n: int, grid_size: int = 2001, tol: float = 1e-9
) -> float:
    """Worst slack of the grid conditions in units of their tolerance band.

    Negative means some condition fails; the value is ``-inf`` for a moment
    mismatch, otherwise ``min_x (T_2(x) - T_1(x)) / scale + tol``.
    """
    if grid_size < 101:
        raise ValueError("grid_size must be at least 101")
    a, b = mu1.support
    tv = M.total_variation(mu1) + M.total_variation(mu2)
    r = max(abs(a), abs(b), 1.0)
    for k in range(n + 1):
        if abs(M.moment(mu1, k) - M.moment(mu2, k)) > tol * tv * r**k:
            return float("-inf")
    xs = np.linspace(a, b, grid_size)
    gap = M.truncated_moment(mu2, xs, n) - M.truncated_moment(mu1, xs, n)
    scale = tv * (b - a) ** n
    if scale == 0:
        return 0.0
    return float(np.min(gap) / scale + tol)


def sample_functions(
    support: Tuple[float, float], n: int, trials: int, seed: int, n_knots: int = DEFAULT_KNOTS
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pre-generated ``(knots, spline_weights, poly_coeffs)`` arrays, one row per trial."""
    rng = np.random.default_rng(seed)
    a, b = support
    knots = rng.uniform(a, b, size=(trials, n_knots))
    weights = np.abs(rng.standard_normal((trials, n_knots)))
    coeffs = rng.standard_normal((trials, n + 1))
    return knots, weights, coeffs


def random_nconvex_suite(
    mu1: SignedMeasure,
    mu2: SignedMeasure,
    n: int,
    trials: int = 10_000,
    seed: int = 42,
    tol: float = 1e-9,
    n_knots: int = DEFAULT_KNOTS,
    extra: Iterable[TestFunction] = (),
) -> int:
    """Count sampled n-convex ``f`` with ``int f d(mu1) > int f d(mu2) + tol * scale``.

    ``extra`` functions are appended to the random sample (e.g. a witness).
    The count is identical however the trials are split, since the sample is
    drawn up front from ``seed``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    a, b = mu1.support
    knots, weights, coeffs = sample_functions(mu1.support, n, trials, seed, n_knots)
    mom_gap = np.array([M.moment(mu1, k) - M.moment(mu2, k) for k in range(n + 1)])
    flat = knots.reshape(-1)
    trunc_gap = (M.truncated_moment(mu1, flat, n) - M.truncated_moment(mu2, flat, n)).reshape(knots.shape)
    gaps = coeffs @ mom_gap + np.sum(weights * trunc_gap, axis=1)

    tv = M.total_variation(mu1) + M.total_variation(mu2)
    r = max(abs(a), abs(b), 1.0)
    mags = np.abs(coeffs) @ (r ** np.arange(n + 1)) + weights.sum(axis=1) * (b - a) ** n
    count = int(np.sum(gaps > tol * tv * mags))
    for f in extra:
        count += confirms_violation(f, mu1, mu2, tol)
    return count
