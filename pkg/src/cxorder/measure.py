"""Finite signed measures on a compact interval.

A measure is a set of point masses plus polynomial densities on disjoint
sub-intervals. Density coefficients are ascending powers of the global
coordinate ``x``. Nothing is normalized: weights may be negative and the
total mass need not be 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly

from .errors import ParseError, ZeroScale
from .piecewise_poly import SNAP_RTOL, PiecewisePolynomial, taylor_shift

MAX_DENSITY_DEGREE = 8
MERGE_RTOL = 1e-14


@dataclass(frozen=True)
class Atom:
    location: float
    weight: float


@dataclass(frozen=True)
class DensityPiece:
    lo: float
    hi: float
    coeffs: Tuple[float, ...]

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) or (0.0,))
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"density piece needs lo < hi, got [{self.lo}, {self.hi}]")
        if len(self.coeffs) - 1 > MAX_DENSITY_DEGREE:
            raise ValueError(f"density degree capped at {MAX_DENSITY_DEGREE}")

    @property
    def poly(self) -> Polynomial:
        return Polynomial(self.coeffs)


AtomLike = Union[Atom, Tuple[float, float]]
PieceLike = Union[DensityPiece, Tuple[float, float, Sequence[float]]]


@dataclass(frozen=True)
class SignedMeasure:
    """Atoms plus piecewise-polynomial density on ``support = (a, b)``.

    Atoms are sorted, merged when closer than ``1e-14 * (b - a)`` and dropped
    when their weight is zero. Density pieces must have disjoint interiors.
    """

    support: Tuple[float, float]
    atoms: Tuple[Atom, ...] = ()
    pieces: Tuple[DensityPiece, ...] = ()

    def __post_init__(self):
        a, b = (float(v) for v in self.support)
        if not a < b:
            raise ValueError(f"support needs a < b, got {self.support}")
        object.__setattr__(self, "support", (a, b))
        object.__setattr__(self, "atoms", _normalize_atoms(self.atoms, a, b))
        pieces = sorted((p if isinstance(p, DensityPiece) else DensityPiece(*p) for p in self.pieces), key=lambda p: p.lo)
        for p in pieces:
            if p.lo < a or p.hi > b:
                raise ValueError(f"density piece [{p.lo}, {p.hi}] leaves the support [{a}, {b}]")
        for p, q in zip(pieces, pieces[1:]):
            if q.lo < p.hi:
                raise ValueError("density pieces overlap")
        object.__setattr__(self, "pieces", tuple(pieces))

    @property
    def width(self) -> float:
        return self.support[1] - self.support[0]

    def with_support(self, support: Tuple[float, float]) -> "SignedMeasure":
        return SignedMeasure(support, self.atoms, self.pieces)

    def __mul__(self, c: float) -> "SignedMeasure":
        c = float(c)
        atoms = tuple(Atom(t.location, c * t.weight) for t in self.atoms)
        pieces = tuple(DensityPiece(p.lo, p.hi, tuple(c * v for v in p.coeffs)) for p in self.pieces)
        return SignedMeasure(self.support, atoms, pieces)

    __rmul__ = __mul__

    def __neg__(self) -> "SignedMeasure":
        return self * -1.0

    def __add__(self, other: "SignedMeasure") -> "SignedMeasure":
        if self.support != other.support:
            raise ValueError("cannot add measures with different supports")
        cuts = sorted({v for p in self.pieces + other.pieces for v in (p.lo, p.hi)})
        pieces = []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            mid = 0.5 * (lo + hi)
            acc = Polynomial([0.0])
            hit = False
            for p in self.pieces + other.pieces:
                if p.lo <= mid <= p.hi:
                    acc = acc + p.poly
                    hit = True
            if hit:
                pieces.append(DensityPiece(lo, hi, tuple(acc.coef)))
        return SignedMeasure(self.support, self.atoms + other.atoms, tuple(pieces))

    def __sub__(self, other: "SignedMeasure") -> "SignedMeasure":
        return self + (-other)


def _normalize_atoms(raw: Iterable[AtomLike], a: float, b: float) -> Tuple[Atom, ...]:
    atoms = sorted(
        (t if isinstance(t, Atom) else Atom(float(t[0]), float(t[1])) for t in raw),
        key=lambda t: t.location,
    )
    tol = MERGE_RTOL * (b - a)
    merged = []
    for t in atoms:
        x, w = float(t.location), float(t.weight)
        if not a <= x <= b:
            raise ValueError(f"atom at {x} outside support [{a}, {b}]")
        if merged and x - merged[-1][0] <= tol:
            merged[-1][1] += w
        else:
            merged.append([x, w])
    return tuple(Atom(x, w) for x, w in merged if w != 0.0)


# ---------------------------------------------------------------- operations


def total_mass(mu: SignedMeasure) -> float:
    return moment(mu, 0)


def moment(mu: SignedMeasure, k: int) -> float:
    """``integral of x**k d(mu)``, exact for the polynomial densities."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    total = math.fsum(t.weight * t.location**k for t in mu.atoms)
    for p in mu.pieces:
        prim = npoly.polyint(np.concatenate([np.zeros(k), p.coeffs]))
        total += float(npoly.polyval(p.hi, prim) - npoly.polyval(p.lo, prim))
    return total


def truncated_moment(mu: SignedMeasure, x, n: int):
    """``integral of (t - x)_+**n d(mu)(t)`` for scalar or array ``x``."""
    if n < 1:
        raise ValueError("truncated moment needs n >= 1")
    xs = np.asarray(x, dtype=float)
    out = np.zeros_like(xs)
    if mu.atoms:
        loc = np.array([t.location for t in mu.atoms])
        w = np.array([t.weight for t in mu.atoms])
        d = np.maximum(loc[None, :] - xs.reshape(-1, 1), 0.0)
        out = out + (d**n @ w).reshape(xs.shape)
    for p in mu.pieces:
        flat = out.reshape(-1)
        for i, xv in enumerate(xs.reshape(-1)):
            lo = max(p.lo, xv)
            if lo >= p.hi:
                continue
            # Integrate s**n * rho(s + x) over s in [lo - x, hi - x].
            shifted = taylor_shift(np.array(p.coeffs), xv)
            prim = npoly.polyint(np.concatenate([np.zeros(n), shifted]))
            flat[i] += npoly.polyval(p.hi - xv, prim) - npoly.polyval(lo - xv, prim)
        out = flat.reshape(xs.shape)
    return float(out) if np.ndim(x) == 0 else out


def total_variation(mu: SignedMeasure) -> float:
    tv = math.fsum(abs(t.weight) for t in mu.atoms)
    for p in mu.pieces:
        tv += PiecewisePolynomial.from_global([p.lo, p.hi], [p.coeffs]).integrate_abs()
    return tv


def breakpoints(mu: SignedMeasure) -> np.ndarray:
    """Support ends, atom locations and density-piece ends, snapped and sorted."""
    a, b = mu.support
    pts = [a, b] + [t.location for t in mu.atoms] + [v for p in mu.pieces for v in (p.lo, p.hi)]
    return _snap(np.unique(pts), a, b)


def _snap(pts: np.ndarray, a: float, b: float) -> np.ndarray:
    tol = SNAP_RTOL * (b - a)
    keep = [a]
    for p in pts:
        if p - keep[-1] > tol:
            keep.append(float(p))
    if b - keep[-1] <= tol:
        keep[-1] = b
    else:
        keep.append(b)
    return np.array(keep)


def density_function(mu: SignedMeasure, grid=None) -> PiecewisePolynomial:
    """The absolutely continuous part as a piecewise polynomial (jumps allowed)."""
    grid = breakpoints(mu) if grid is None else np.asarray(grid)
    rows = []
    for lo, hi in zip(grid[:-1], grid[1:]):
        mid = 0.5 * (lo + hi)
        row = [0.0]
        for p in mu.pieces:
            if p.lo <= mid <= p.hi:
                row = taylor_shift(np.array(p.coeffs), lo)
                break
        rows.append(row)
    return PiecewisePolynomial(grid, rows, continuous=[False] * (len(grid) - 2), max_degree=MAX_DENSITY_DEGREE + 16)


def cdf(mu: SignedMeasure) -> PiecewisePolynomial:
    """``F(x) = mu([a, x])``, right-continuous, with ``F(a-) = 0``.

    Jumps sit exactly at atom locations. ``F(a)`` equals the mass of an atom at
    ``a`` (zero if there is none) and ``F(b)`` is the total mass.
    """
    grid = breakpoints(mu)
    a, b = mu.support
    F = density_function(mu, grid).antiderivative()
    c = np.array(F.coeffs)
    at_node = np.zeros(len(grid))
    for t in mu.atoms:
        # Every atom is a grid node up to snapping.
        at_node[int(np.argmin(np.abs(grid - t.location)))] += t.weight
    cum = np.cumsum(at_node)
    c[:, 0] += cum[:-1]
    flags = [at_node[j] == 0.0 for j in range(1, len(grid) - 1)]
    return PiecewisePolynomial(grid, c, continuous=flags, end_jump=at_node[-1], max_degree=F.max_degree)


def pushforward_affine(mu: SignedMeasure, scale: float, shift: float) -> SignedMeasure:
    """Image of ``mu`` under ``x -> scale * x + shift``."""
    if scale == 0:
        raise ZeroScale("affine pushforward needs a nonzero scale")
    a, b = mu.support
    ends = sorted((scale * a + shift, scale * b + shift))
    atoms = tuple(Atom(scale * t.location + shift, t.weight) for t in mu.atoms)
    inv = Polynomial([-shift / scale, 1.0 / scale])
    pieces = []
    for p in mu.pieces:
        lo, hi = sorted((scale * p.lo + shift, scale * p.hi + shift))
        g = p.poly(inv) / abs(scale)
        pieces.append(DensityPiece(max(lo, ends[0]), min(hi, ends[1]), tuple(g.coef)))
    clipped = tuple(Atom(min(max(t.location, ends[0]), ends[1]), t.weight) for t in atoms)
    return SignedMeasure(tuple(ends), clipped, tuple(pieces))


# ------------------------------------------------------------------ JSON I/O


def from_spec(spec: dict) -> SignedMeasure:
    """Parse ``{"support": [a, b], "atoms": [{"x", "w"}], "density": [{"from", "to", "coeffs"}]}``."""
    try:
        if not isinstance(spec, dict):
            raise TypeError("measure spec must be a JSON object")
        a, b = spec["support"]
        atoms = [(float(t["x"]), float(t["w"])) for t in spec.get("atoms", [])]
        pieces = [(float(p["from"]), float(p["to"]), [float(c) for c in p["coeffs"]]) for p in spec.get("density", [])]
        return SignedMeasure((float(a), float(b)), atoms, pieces)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad measure spec: {exc}") from exc


def to_spec(mu: SignedMeasure) -> dict:
    return {
        "support": list(mu.support),
        "atoms": [{"x": t.location, "w": t.weight} for t in mu.atoms],
        "density": [{"from": p.lo, "to": p.hi, "coeffs": list(p.coeffs)} for p in mu.pieces],
    }


def atomic(support: Tuple[float, float], locations: Sequence[float], weights: Sequence[float]) -> SignedMeasure:
    return SignedMeasure(support, tuple(zip(locations, weights)))


def uniform(a: float, b: float) -> SignedMeasure:
    """Normalized Lebesgue measure on ``[a, b]``."""
    return SignedMeasure((a, b), (), ((a, b, (1.0 / (b - a),)),))
