"""Decide higher-order convex ordering between two signed measures.

``mu1 <= mu2`` in the (n+1)-convex order means ``int f d(mu1) <= int f d(mu2)``
for every continuous n-convex ``f`` on ``[a, b]``. The engine works with the
cascade

    H_0 = F_2 - F_1,    H_k(x) = int_a^x H_{k-1}(t) dt,

where ``F_i`` are the distribution functions. The ordering holds iff
``H_k(b) = 0`` for ``k = 0..n`` and ``G = (-1)**(n+1) * H_n >= 0`` on ``(a, b)``.

All tolerances are relative to the natural size of each ``H_k``,
``scale_k = (TV(mu1) + TV(mu2)) * (b - a)**k / k!``, which bounds ``|H_k|``
and scales linearly with the measures.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly

from . import measure as M
from .errors import OrderOverflow, SupportMismatch
from .measure import SignedMeasure
from .piecewise_poly import SNAP_RTOL, PiecewisePolynomial, SignChangeCatalogue, taylor_shift

DEFAULT_TOL = 1e-9
MAX_ORDER = 8


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    HOLDS_REVERSED = "holds_reversed"
    NOT_ORDERED = "not_ordered"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Witness:
    """An n-convex test function that breaks ``mu1 <= mu2``.

    ``kind == "monomial"``: ``f(t) = sign * t**param``.
    ``kind == "spline"``:   ``f(t) = (t - param)_+**n``.
    """

    kind: str
    param: float
    sign: int = 1

    def to_dict(self) -> dict:
        return {"kind": self.kind, "param": self.param, "sign": self.sign}


@dataclass(frozen=True)
class OrderingVerdict:
    verdict: Verdict
    n: int
    witness: Optional[Witness] = None
    reason: Optional[str] = None
    crossings: Tuple[float, ...] = ()
    checkpoints: Tuple[Tuple[float, float], ...] = ()
    endpoint_residuals: Tuple[float, ...] = ()
    areas: Tuple[float, ...] = ()
    engine: str = ""

    @property
    def m(self) -> int:
        return len(self.crossings)

    @property
    def ordered(self) -> bool:
        return self.verdict in (Verdict.HOLDS, Verdict.HOLDS_REVERSED)

    def to_dict(self) -> dict:
        return {
            "order_n": self.n,
            "verdict": self.verdict.value,
            "crossings": list(self.crossings),
            "m": self.m,
            "checkpoints": [{"x": x, "value": v} for x, v in self.checkpoints],
            "endpoint_residuals": list(self.endpoint_residuals),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class HProfile:
    """The cascade ``H_0 .. H_n`` for one ordered pair of measures."""

    n: int
    mu1: SignedMeasure
    mu2: SignedMeasure
    h: Tuple[PiecewisePolynomial, ...]
    endpoint_residuals: Tuple[float, ...]
    scales: Tuple[float, ...]
    catalogue: SignChangeCatalogue
    checkpoints: Tuple[Tuple[float, float], ...]
    route_discrepancy: Optional[float] = None

    @property
    def G(self) -> PiecewisePolynomial:
        """``(-1)**(n+1) * H_n``, nonnegative exactly when the ordering holds."""
        return self.h[self.n] * _parity(self.n + 1)

    @property
    def support(self) -> Tuple[float, float]:
        return self.mu1.support


@dataclass(frozen=True)
class EndpointReport:
    ok: bool
    residuals: Tuple[float, ...]
    first_violation: Optional[int] = None
    moment_gap: Optional[float] = None


def _parity(k: int) -> float:
    return -1.0 if k % 2 else 1.0


def _check_inputs(mu1: SignedMeasure, mu2: SignedMeasure, n: int) -> None:
    if n < 1 or n > MAX_ORDER:
        raise OrderOverflow(f"order n must lie in 1..{MAX_ORDER}, got {n}")
    (a1, b1), (a2, b2) = mu1.support, mu2.support
    tol = SNAP_RTOL * max(b1 - a1, b2 - a2)
    if abs(a1 - a2) > tol or abs(b1 - b2) > tol:
        raise SupportMismatch(f"supports differ: {mu1.support} vs {mu2.support}")


def natural_scales(mu1: SignedMeasure, mu2: SignedMeasure, n: int) -> Tuple[float, ...]:
    tv = M.total_variation(mu1) + M.total_variation(mu2)
    w = mu1.width
    return tuple(tv * w**k / math.factorial(k) for k in range(n + 1))


# --------------------------------------------------------------- cascade


def _grid(mu1: SignedMeasure, mu2: SignedMeasure) -> np.ndarray:
    a, b = mu1.support
    pts = np.union1d(M.breakpoints(mu1), M.breakpoints(mu2))
    return M._snap(pts, a, b)


def h_function(mu1: SignedMeasure, mu2: SignedMeasure, n: int) -> PiecewisePolynomial:
    """``H_n`` from the closed form ``(-1)**(n+1) int (t - x)_+**n / n! d(F_2 - F_1)``.

    This matches the iterated integral only once the moments of orders
    ``0..n`` agree; otherwise it differs from it by a polynomial.
    """
    _check_inputs(mu1, mu2, n)
    grid = _grid(mu1, mu2)
    diff_atoms = [(t.location, t.weight) for t in mu2.atoms] + [(t.location, -t.weight) for t in mu1.atoms]
    diff_pieces = [(p, 1.0) for p in mu2.pieces] + [(p, -1.0) for p in mu1.pieces]
    binom = [math.comb(n, j) for j in range(n + 1)]
    rows = []
    for g0, g1 in zip(grid[:-1], grid[1:]):
        acc = np.zeros(n + 1)
        # (t - g0 - s)**n = sum_j C(n, j) (t - g0)**(n-j) (-s)**j
        for t, w in diff_atoms:
            if t > 0.5 * (g0 + g1):
                d = t - g0
                acc += w * np.array([binom[j] * d ** (n - j) * (-1) ** j for j in range(n + 1)])
        poly = Polynomial(acc)
        h = g1 - g0
        for p, sgn in diff_pieces:
            rho = Polynomial(taylor_shift(np.array(p.coeffs), g0))  # density in local s
            mid = 0.5 * (g0 + g1)
            if p.hi <= mid:
                continue
            if p.lo >= mid:
                lo_u, hi_u = p.lo - g0, p.hi - g0
                mom = [_poly_moment(rho, n - j, lo_u, hi_u) for j in range(n + 1)]
                poly = poly + sgn * Polynomial([binom[j] * (-1) ** j * mom[j] for j in range(n + 1)])
            else:
                s = Polynomial([0.0, 1.0])
                tail = Polynomial([0.0])
                for j in range(n + 1):
                    prim = (Polynomial.basis(n - j) * rho).integ()
                    tail = tail + binom[j] * (-1) ** j * s**j * (prim(h) - prim(s))
                    if p.hi > g1 + SNAP_RTOL * (grid[-1] - grid[0]):
                        tail = tail + binom[j] * (-1) ** j * s**j * _poly_moment(rho, n - j, h, p.hi - g0)
                poly = poly + sgn * tail
        rows.append(poly.coef * (_parity(n + 1) / math.factorial(n)))
    # The rows sum terms as large as TV * width**n, so judge continuity at that size.
    scale = natural_scales(mu1, mu2, n)[n]
    return PiecewisePolynomial(grid, rows, continuous=[True] * (len(grid) - 2), value_scale=scale)


def _poly_moment(rho: Polynomial, k: int, lo: float, hi: float) -> float:
    prim = (Polynomial.basis(k) * rho).integ()
    return float(prim(hi) - prim(lo))


def _cascade(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float) -> HProfile:
    _check_inputs(mu1, mu2, n)
    mu2 = mu2.with_support(mu1.support) if mu2.support != mu1.support else mu2
    b = mu1.support[1]
    h = [M.cdf(mu2) - M.cdf(mu1)]
    for _ in range(n):
        h.append(h[-1].antiderivative())
    scales = natural_scales(mu1, mu2, n)
    residuals = tuple(abs(hk.evaluate(b)) for hk in h)
    catalogue = h[n - 1].sign_changes(tol, scale=scales[n - 1] or 1.0)
    G = h[n] * _parity(n + 1)
    checkpoints = tuple((x, float(G(x))) for x in catalogue.points[1::2])
    return HProfile(n, mu1, mu2, tuple(h), residuals, scales, catalogue, checkpoints)


def h_sequence(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float = DEFAULT_TOL) -> HProfile:
    """Full cascade, cross-checked against the closed form when the moments match.

    ``route_discrepancy`` is the largest gap between the two routes over every
    ``k = 1..n`` (relative to ``scale_k``), sampled at breakpoints and piece
    midpoints; it is ``None`` when the endpoint conditions fail.
    """
    prof = _cascade(mu1, mu2, n, tol)
    ok, _ = check_endpoint_conditions(prof, tol)
    if not ok:
        return prof
    worst = 0.0
    for k in range(1, n + 1):
        direct = h_function(prof.mu1, prof.mu2, k)
        bp = prof.h[k].breakpoints
        xs = np.concatenate([bp, 0.5 * (bp[:-1] + bp[1:])])
        gap = np.max(np.abs(direct(xs) - prof.h[k](xs)))
        worst = max(worst, gap / (prof.scales[k] or 1.0))
        if k >= 2:
            # Downward route: derivative of the closed form against H_{k-1}.
            dgap = np.max(np.abs(direct.differentiate()(xs) - prof.h[k - 1](xs)))
            worst = max(worst, dgap / (prof.scales[k - 1] or 1.0))
    return HProfile(prof.n, prof.mu1, prof.mu2, prof.h, prof.endpoint_residuals, prof.scales, prof.catalogue, prof.checkpoints, worst)


def check_endpoint_conditions(profile: HProfile, tol: float = DEFAULT_TOL) -> Tuple[bool, EndpointReport]:
    """``|H_k(b)| <= tol * scale_k`` for every ``k = 0..n``."""
    for k, (r, s) in enumerate(zip(profile.endpoint_residuals, profile.scales)):
        if r > tol * s:
            gap = M.moment(profile.mu2, k) - M.moment(profile.mu1, k)
            return False, EndpointReport(False, profile.endpoint_residuals, k, gap)
    return True, EndpointReport(True, profile.endpoint_residuals)


# --------------------------------------------------------------- engines


def _diagnostics(prof: HProfile) -> dict:
    return dict(
        crossings=prof.catalogue.points,
        checkpoints=prof.checkpoints,
        endpoint_residuals=prof.endpoint_residuals,
    )


def _monomial_witness(rep: EndpointReport) -> Witness:
    # f = -sign(gap) * t**k gives int f d(mu1) - int f d(mu2) = |gap|.
    return Witness("monomial", rep.first_violation, -1 if rep.moment_gap > 0 else 1)


def global_check(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float = DEFAULT_TOL) -> OrderingVerdict:
    """Exact test: endpoint conditions, then the sign of ``G`` over ``[a, b]``."""
    prof = _cascade(mu1, mu2, n, tol)
    diag = _diagnostics(prof)
    ok, rep = check_endpoint_conditions(prof, tol)
    if not ok:
        return OrderingVerdict(Verdict.NOT_ORDERED, n, _monomial_witness(rep), reason=f"moment mismatch at k={rep.first_violation}", engine="global", **diag)
    G = prof.G
    thr = tol * prof.scales[n]
    x_lo, v_lo = G.global_min()
    if v_lo >= -thr:
        return OrderingVerdict(Verdict.HOLDS, n, engine="global", **diag)
    _, v_hi = G.global_max()
    if v_hi <= thr:
        return OrderingVerdict(Verdict.HOLDS_REVERSED, n, engine="global", **diag)
    return OrderingVerdict(Verdict.NOT_ORDERED, n, Witness("spline", x_lo), reason=f"G({x_lo:.17g}) = {v_lo:.6g} < 0", engine="global", **diag)


def crossing_decision(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float = DEFAULT_TOL) -> OrderingVerdict:
    """Decide from the sign changes ``x_1 < ... < x_m`` of ``H_{n-1}``.

    ``G' = (-1)**(n+1) H_{n-1}``, so ``G`` is monotone between consecutive
    ``x_i`` and vanishes at both ends. With ``G`` rising on ``(a, x_1)`` its
    local minima are ``x_2, x_4, ...``; with ``G`` falling they are
    ``x_1, x_3, ...``. The order holds iff ``G`` is nonnegative at those
    minima. For even ``m`` the last crossing is always a minimum, which is
    where an even count shows up as a failure.
    """
    prof = _cascade(mu1, mu2, n, tol)
    diag = _diagnostics(prof)
    ok, rep = check_endpoint_conditions(prof, tol)
    if not ok:
        return OrderingVerdict(Verdict.INCONCLUSIVE, n, reason="MomentMismatch", engine="crossing", **diag)
    cat = prof.catalogue
    orient = int(_parity(n + 1)) * cat.initial_sign
    if orient == 0 or cat.count == 0:
        # G is monotone between two (near-)zero endpoint values.
        return OrderingVerdict(Verdict.HOLDS, n, engine="crossing", **diag)

    thr = tol * prof.scales[n]
    pts = cat.points
    values = [float(prof.G(x)) for x in pts]
    first_min = 1 if orient > 0 else 0
    minima = [(values[i], pts[i]) for i in range(first_min, cat.count, 2)]
    maxima = [(values[i], pts[i]) for i in range(1 - first_min, cat.count, 2)]
    worst_min = min(minima, default=(0.0, None))
    if worst_min[0] >= -thr:
        return OrderingVerdict(Verdict.HOLDS, n, engine="crossing", **diag)
    if max(maxima, default=(0.0, None))[0] <= thr:
        return OrderingVerdict(Verdict.HOLDS_REVERSED, n, engine="crossing", **diag)
    parity = "even" if cat.count % 2 == 0 else "odd"
    reason = f"m={cat.count} ({parity}), G({worst_min[1]:.17g}) = {worst_min[0]:.6g} < 0"
    return OrderingVerdict(Verdict.NOT_ORDERED, n, Witness("spline", float(worst_min[1])), reason=reason, engine="crossing", **diag)


def _masses_and_means_match(mu1: SignedMeasure, mu2: SignedMeasure, tol: float) -> bool:
    # Same thresholds as the k = 0, 1 endpoint conditions: H_1(b) = b * gap_0 - gap_1.
    s0, s1 = natural_scales(mu1, mu2, 1)
    gap0 = M.total_mass(mu2) - M.total_mass(mu1)
    gap1 = M.moment(mu2, 1) - M.moment(mu1, 1)
    b = mu1.support[1]
    return abs(gap0) <= tol * s0 and abs(b * gap0 - gap1) <= tol * s1


def ohlin_check(mu1: SignedMeasure, mu2: SignedMeasure, tol: float = DEFAULT_TOL) -> OrderingVerdict:
    """Sufficient single-crossing test for the convex order (n = 1)."""
    _check_inputs(mu1, mu2, 1)
    if not _masses_and_means_match(mu1, mu2, tol):
        return OrderingVerdict(Verdict.INCONCLUSIVE, 1, reason="MomentMismatch", engine="ohlin")
    scales = natural_scales(mu1, mu2, 1)
    F = M.cdf(mu2.with_support(mu1.support)) - M.cdf(mu1)
    cat = F.sign_changes(tol, scale=scales[0] or 1.0)
    diag = dict(crossings=cat.points)
    if cat.count == 0:
        return OrderingVerdict(Verdict.HOLDS, 1, engine="ohlin", **diag)
    if cat.count == 1:
        verdict = Verdict.HOLDS if cat.initial_sign > 0 else Verdict.HOLDS_REVERSED
        return OrderingVerdict(verdict, 1, engine="ohlin", **diag)
    return OrderingVerdict(Verdict.INCONCLUSIVE, 1, reason="MultipleCrossings", engine="ohlin", **diag)


def levin_steckin_check(mu1: SignedMeasure, mu2: SignedMeasure, tol: float = DEFAULT_TOL) -> OrderingVerdict:
    """Classical necessary-and-sufficient test for the convex order.

    ``F_1(b) = F_2(b)``, equal integrals of the distribution functions, and
    ``int_a^x F_1 <= int_a^x F_2`` for every ``x``.
    """
    _check_inputs(mu1, mu2, 1)
    a, b = mu1.support
    mu2 = mu2.with_support(mu1.support)
    F1, F2 = M.cdf(mu1), M.cdf(mu2)
    I1, I2 = F1.antiderivative(), F2.antiderivative()
    s0, s1 = natural_scales(mu1, mu2, 1)
    r0 = abs(F2.evaluate(b) - F1.evaluate(b))
    r1 = abs(I2.evaluate(b) - I1.evaluate(b))
    residuals = (r0, r1)
    for k, (r, s) in enumerate(((r0, s0), (r1, s1))):
        if r > tol * s:
            gap = M.moment(mu2, k) - M.moment(mu1, k)
            w = Witness("monomial", k, -1 if gap > 0 else 1)
            return OrderingVerdict(Verdict.NOT_ORDERED, 1, w, reason=f"condition fails at k={k}", endpoint_residuals=residuals, engine="levin_steckin")
    D = I2 - I1
    thr = tol * s1
    x_lo, v_lo = D.global_min()
    if v_lo >= -thr:
        return OrderingVerdict(Verdict.HOLDS, 1, endpoint_residuals=residuals, engine="levin_steckin")
    if D.global_max()[1] <= thr:
        return OrderingVerdict(Verdict.HOLDS_REVERSED, 1, endpoint_residuals=residuals, engine="levin_steckin")
    return OrderingVerdict(Verdict.NOT_ORDERED, 1, Witness("spline", x_lo), reason="integrated cdf gap dips below zero", endpoint_residuals=residuals, engine="levin_steckin")


def szostok_check(mu1: SignedMeasure, mu2: SignedMeasure, tol: float = DEFAULT_TOL) -> OrderingVerdict:
    """Convex order from the areas ``A_i = int |F|`` between crossings of ``F = F_2 - F_1``.

    With ``F >= 0`` before the first crossing and ``m`` odd, the order holds
    iff ``A_0 >= A_1``, ``A_0 + A_2 >= A_1 + A_3``, ... up to index ``m - 2``.
    The areas are returned in ``verdict.areas``.
    """
    _check_inputs(mu1, mu2, 1)
    if not _masses_and_means_match(mu1, mu2, tol):
        return OrderingVerdict(Verdict.INCONCLUSIVE, 1, reason="MomentMismatch", engine="szostok")
    a, b = mu1.support
    s0, s1 = natural_scales(mu1, mu2, 1)
    F = M.cdf(mu2.with_support(mu1.support)) - M.cdf(mu1)
    cat = F.sign_changes(tol, scale=s0 or 1.0)
    edges = (a,) + cat.points + (b,)
    areas = tuple(F.integrate_abs(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]))
    diag = dict(crossings=cat.points, areas=areas, engine="szostok")
    orient = cat.initial_sign
    if orient == 0 or cat.count == 0:
        return OrderingVerdict(Verdict.HOLDS, 1, **diag)
    thr = tol * s1
    pts = cat.points
    # H(x_i) = orient * (A_0 - A_1 + ... +- A_{i-1}), read off the areas alone.
    signed = np.cumsum([areas[i] * (1 if i % 2 == 0 else -1) for i in range(cat.count)]) * orient
    first_min = 1 if orient > 0 else 0
    minima = [(signed[i], pts[i]) for i in range(first_min, cat.count, 2)]
    maxima = [(signed[i], pts[i]) for i in range(1 - first_min, cat.count, 2)]
    worst_min = min(minima, default=(0.0, None))
    if worst_min[0] >= -thr:
        return OrderingVerdict(Verdict.HOLDS, 1, **diag)
    if max(maxima, default=(0.0, None))[0] <= thr:
        return OrderingVerdict(Verdict.HOLDS_REVERSED, 1, **diag)
    return OrderingVerdict(Verdict.NOT_ORDERED, 1, Witness("spline", float(worst_min[1])), reason=f"area inequality fails, m={cat.count}", **diag)
