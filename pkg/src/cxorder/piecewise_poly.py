"""Piecewise polynomials with explicit jump semantics.

A :class:`PiecewisePolynomial` lives on a grid ``b_0 < b_1 < ... < b_M``.
Piece ``i`` covers ``[b_i, b_{i+1})`` and stores ascending coefficients in the
*local* variable ``s = x - b_i``, which keeps root finding well conditioned.
Evaluation is right-continuous; the value at ``b_M`` is the left limit of the
last piece plus ``end_jump`` (a point mass sitting exactly on the right end).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _sturm
from .errors import DegreeOverflow, JumpDifferentiation, OutOfDomain, SupportMismatch

MAX_DEGREE = 24
CONTINUITY_RTOL = 1e-12
SNAP_RTOL = 1e-14
ISOLATION_RTOL = 1e-10


def taylor_shift(coeffs: np.ndarray, d: float) -> np.ndarray:
    """Coefficients of ``q(s + d)`` given those of ``q(s)``."""
    c = np.array(coeffs, dtype=float)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += d * c[j + 1]
    return c


def _horner(c: np.ndarray, s):
    acc = np.zeros_like(np.asarray(s, dtype=float)) + c[-1]
    for v in c[-2::-1]:
        acc = acc * s + v
    return acc


@dataclass(frozen=True)
class SignChangeCatalogue:
    """Strict sign alternations of a function, zero stretches discarded.

    ``initial_sign`` is the sign on ``(a, x_1)`` and is 0 only when the
    function vanishes (to tolerance) everywhere.
    """

    points: Tuple[float, ...]
    initial_sign: int

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def final_sign(self) -> int:
        if self.count % 2:
            return -self.initial_sign
        return self.initial_sign


class PiecewisePolynomial:
    def __init__(
        self,
        breakpoints: Sequence[float],
        coeffs,
        continuous: Optional[Sequence[bool]] = None,
        end_jump: float = 0.0,
        max_degree: int = MAX_DEGREE,
        value_scale: float = 1.0,
    ):
        """``value_scale`` floors the magnitude that continuity is judged against;
        pass it when the coefficients come out of heavy cancellation."""
        bp = np.array(breakpoints, dtype=float)
        if bp.ndim != 1 or len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        rows = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coeffs]
        if len(rows) != len(bp) - 1:
            raise ValueError(f"expected {len(bp) - 1} pieces, got {len(rows)}")
        width = max(len(r) for r in rows)
        if width - 1 > max_degree:
            raise DegreeOverflow(f"piece degree {width - 1} exceeds cap {max_degree}")
        c = np.zeros((len(rows), width))
        for i, r in enumerate(rows):
            c[i, : len(r)] = r
        # Drop all-zero top columns so the degree is honest.
        while c.shape[1] > 1 and not np.any(c[:, -1]):
            c = c[:, :-1]
        bp.setflags(write=False)
        c.setflags(write=False)
        self._bp = bp
        self._c = c
        self.max_degree = max_degree
        self.end_jump = float(end_jump)

        gaps = self._raw_jumps()
        tol = CONTINUITY_RTOL * np.maximum(self._jump_scales(), value_scale)
        if continuous is None:
            flags = np.abs(gaps) <= tol
        else:
            flags = np.array(continuous, dtype=bool)
            if flags.shape != gaps.shape:
                raise ValueError("continuity flags must cover the interior breakpoints")
            bad = flags & (np.abs(gaps) > tol)
            if np.any(bad):
                i = int(np.argmax(bad)) + 1
                raise ValueError(f"marked continuous at {bp[i]!r} but jumps by {gaps[i - 1]:.3g}")
        flags.setflags(write=False)
        self._continuous = flags

    # ------------------------------------------------------------------ basics

    @classmethod
    def from_global(cls, breakpoints, global_coeffs, **kw) -> "PiecewisePolynomial":
        """Build from per-piece coefficients written in the global variable ``x``."""
        bp = np.asarray(breakpoints, dtype=float)
        local = [taylor_shift(np.atleast_1d(np.asarray(g, dtype=float)), bp[i]) for i, g in enumerate(global_coeffs)]
        return cls(bp, local, **kw)

    @classmethod
    def zero(cls, lo: float, hi: float) -> "PiecewisePolynomial":
        return cls([lo, hi], [[0.0]], continuous=[])

    @property
    def breakpoints(self) -> np.ndarray:
        return self._bp

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def continuous(self) -> np.ndarray:
        return self._continuous

    @property
    def support(self) -> Tuple[float, float]:
        return float(self._bp[0]), float(self._bp[-1])

    @property
    def degree(self) -> int:
        return self._c.shape[1] - 1

    @property
    def n_pieces(self) -> int:
        return len(self._bp) - 1

    def widths(self) -> np.ndarray:
        return np.diff(self._bp)

    def is_continuous(self) -> bool:
        return bool(np.all(self._continuous)) and self.end_jump == 0.0

    def _left_values(self) -> np.ndarray:
        # Left limit of piece i at b_{i+1}.
        h = self.widths()
        acc = self._c[:, -1].copy()
        for k in range(self._c.shape[1] - 2, -1, -1):
            acc = acc * h + self._c[:, k]
        return acc

    def _raw_jumps(self) -> np.ndarray:
        return self._c[1:, 0] - self._left_values()[:-1]

    def _jump_scales(self) -> np.ndarray:
        h = self.widths()
        mags = np.sum(np.abs(self._c) * h[:, None] ** np.arange(self._c.shape[1]), axis=1)
        right = np.abs(self._c[1:, 0])
        return np.maximum(1.0, np.maximum(mags[:-1], right))

    def jumps(self) -> np.ndarray:
        """Jump sizes (right value minus left limit) at ``b_1 .. b_M``.

        Flagged-continuous interior breakpoints report exactly 0.
        """
        j = np.where(self._continuous, 0.0, self._raw_jumps())
        return np.append(j, self.end_jump)

    def __repr__(self) -> str:
        return f"PiecewisePolynomial(pieces={self.n_pieces}, degree={self.degree}, support={self.support})"

    # -------------------------------------------------------------- evaluation

    def _locate(self, x: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._bp, x, side="right") - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def __call__(self, x):
        """Vectorized right-continuous evaluation (no domain check)."""
        x = np.asarray(x, dtype=float)
        idx = self._locate(x)
        s = x - self._bp[idx]
        c = self._c[idx]
        acc = c[..., -1].copy() if c.ndim > 1 else c[-1]
        for k in range(self._c.shape[1] - 2, -1, -1):
            acc = acc * s + c[..., k]
        if self.end_jump:
            acc = acc + np.where(x >= self._bp[-1], self.end_jump, 0.0)
        return acc

    def _check_domain(self, x: float) -> None:
        lo, hi = self.support
        if not lo <= x <= hi:
            raise OutOfDomain(f"{x!r} outside [{lo!r}, {hi!r}]")

    def evaluate(self, x: float) -> float:
        self._check_domain(x)
        return float(self(x))

    def evaluate_left_limit(self, x: float) -> float:
        """Left limit at ``x``; at ``b_0`` the function is taken as 0 outside the support."""
        self._check_domain(x)
        if x == self._bp[0]:
            return 0.0
        i = int(np.searchsorted(self._bp, x, side="left")) - 1
        return float(_horner(self._c[i], x - self._bp[i]))

    # ----------------------------------------------------------------- algebra

    def _same_support(self, other: "PiecewisePolynomial") -> None:
        (a0, b0), (a1, b1) = self.support, other.support
        tol = SNAP_RTOL * max(b0 - a0, b1 - a1)
        if abs(a0 - a1) > tol or abs(b0 - b1) > tol:
            raise SupportMismatch(f"supports differ: {self.support} vs {other.support}")

    def refine(self, grid: Sequence[float]) -> "PiecewisePolynomial":
        """Same function on a grid that contains the current breakpoints."""
        grid = np.asarray(grid, dtype=float)
        idx = self._locate(grid[:-1])
        local = [taylor_shift(self._c[i], g - self._bp[i]) for i, g in zip(idx, grid[:-1])]
        flags = []
        for g in grid[1:-1]:
            j = np.searchsorted(self._bp, g)
            on_bp = j < len(self._bp) and self._bp[j] == g
            flags.append(bool(self._continuous[j - 1]) if on_bp else True)
        return PiecewisePolynomial(grid, local, continuous=flags, end_jump=self.end_jump, max_degree=self.max_degree)

    def _merged_grid(self, other: "PiecewisePolynomial") -> np.ndarray:
        lo, hi = self.support
        tol = SNAP_RTOL * (hi - lo)
        pts = np.union1d(self._bp, other._bp)
        keep = [pts[0]]
        for p in pts[1:]:
            if p - keep[-1] > tol:
                keep.append(p)
        keep[0], keep[-1] = lo, hi
        return np.array(keep)

    def __add__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        self._same_support(other)
        grid = self._merged_grid(other)
        p, q = self._snap_refine(grid), other._snap_refine(grid)
        width = max(p._c.shape[1], q._c.shape[1])
        c = np.zeros((len(grid) - 1, width))
        c[:, : p._c.shape[1]] += p._c
        c[:, : q._c.shape[1]] += q._c
        out = PiecewisePolynomial(grid, c, end_jump=p.end_jump + q.end_jump, max_degree=max(self.max_degree, other.max_degree))
        flags = (p._continuous & q._continuous) | out._continuous
        return PiecewisePolynomial(grid, c, continuous=flags, end_jump=out.end_jump, max_degree=out.max_degree)

    def _snap_refine(self, grid: np.ndarray) -> "PiecewisePolynomial":
        # Map each own breakpoint to its snapped grid location before refining.
        snapped = grid[np.clip(np.searchsorted(grid, self._bp - SNAP_RTOL * (grid[-1] - grid[0])), 0, len(grid) - 1)]
        if np.array_equal(snapped, self._bp):
            return self.refine(grid)
        moved = PiecewisePolynomial(
            snapped,
            self._c,
            continuous=self._continuous,
            end_jump=self.end_jump,
            max_degree=self.max_degree,
        )
        return moved.refine(grid)

    def scale(self, c: float) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self._bp, self._c * c, continuous=self._continuous, end_jump=self.end_jump * c, max_degree=self.max_degree)

    def __mul__(self, c: float) -> "PiecewisePolynomial":
        return self.scale(float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "PiecewisePolynomial":
        return self.scale(-1.0)

    def __sub__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        return self + (-other)

    # ---------------------------------------------------------------- calculus

    def antiderivative(self, base: Optional[float] = None) -> "PiecewisePolynomial":
        """``P(x) = integral of p from b_0 to x``; continuous, degree + 1."""
        if base is not None and base != self._bp[0]:
            raise ValueError("antiderivative base must be the left end of the support")
        if self.degree + 1 > self.max_degree:
            raise DegreeOverflow(f"antiderivative would reach degree {self.degree + 1}")
        k = np.arange(1, self._c.shape[1] + 1)
        out = np.zeros((self.n_pieces, self._c.shape[1] + 1))
        out[:, 1:] = self._c / k
        acc = 0.0
        for i, h in enumerate(self.widths()):
            out[i, 0] = acc
            acc = float(_horner(out[i], h))
        return PiecewisePolynomial(self._bp, out, continuous=[True] * (self.n_pieces - 1), max_degree=self.max_degree)

    def differentiate(self) -> "PiecewisePolynomial":
        if not self.is_continuous():
            raise JumpDifferentiation("cannot differentiate across a jump")
        return self._piecewise_derivative()

    def _piecewise_derivative(self) -> "PiecewisePolynomial":
        if self.degree == 0:
            return PiecewisePolynomial(self._bp, np.zeros((self.n_pieces, 1)), max_degree=self.max_degree)
        k = np.arange(1, self._c.shape[1])
        return PiecewisePolynomial(self._bp, self._c[:, 1:] * k, max_degree=self.max_degree)

    def integral(self, lo: Optional[float] = None, hi: Optional[float] = None) -> float:
        lo = self.support[0] if lo is None else lo
        hi = self.support[1] if hi is None else hi
        P = PiecewisePolynomial(self._bp, self._c, continuous=self._continuous, max_degree=self.max_degree + 1).antiderivative()
        return float(P(hi) - P(lo))

    def integrate_abs(self, lo: Optional[float] = None, hi: Optional[float] = None) -> float:
        """Exact integral of ``|p|`` over ``[lo, hi]``, splitting at every root."""
        lo = self.support[0] if lo is None else lo
        hi = self.support[1] if hi is None else hi
        total = 0.0
        for i in range(self.n_pieces):
            a = max(lo, self._bp[i])
            b = min(hi, self._bp[i + 1])
            if b <= a:
                continue
            c = self._c[i]
            a_s, b_s = a - self._bp[i], b - self._bp[i]
            cuts = [a_s] + [r for r, _ in _sturm.isolate_roots(c, a_s, b_s, 0.0) if a_s < r < b_s] + [b_s]
            ci = npoly.polyint(c)
            vals = npoly.polyval(np.array(cuts), ci)
            total += float(np.sum(np.abs(np.diff(vals))))
        return total

    # ------------------------------------------------------------------- roots

    def _piece_roots(self, i: int, lo: float, hi: float) -> List[Tuple[float, bool]]:
        b = self._bp[i]
        h = self._bp[i + 1] - b
        lo_s, hi_s = max(lo - b, 0.0), min(hi - b, h)
        if hi_s < lo_s:
            return []
        roots = _sturm.isolate_roots(self._c[i], lo_s, hi_s, ISOLATION_RTOL * h)
        return [(float(b + r), odd) for r, odd in roots]

    def real_roots_on(self, lo: Optional[float] = None, hi: Optional[float] = None, tol: float = 1e-12) -> List[Tuple[float, bool]]:
        """Real roots of every piece within ``[lo, hi]`` as ``(x, odd_multiplicity)``.

        Pieces that vanish identically contribute nothing. Roots reported by two
        adjacent pieces at their shared breakpoint are listed once. ``tol`` sets
        the de-duplication distance relative to the support width.
        """
        lo = self.support[0] if lo is None else lo
        hi = self.support[1] if hi is None else hi
        out: List[Tuple[float, bool]] = []
        dedup = tol * (self.support[1] - self.support[0])
        for i in range(self.n_pieces):
            if self._bp[i + 1] < lo or self._bp[i] > hi:
                continue
            for r, odd in self._piece_roots(i, lo, hi):
                if out and abs(r - out[-1][0]) <= dedup:
                    continue
                out.append((r, odd))
        return out

    def sup_norm(self) -> float:
        """Max of ``|p|`` over breakpoints (both sides) and interior critical points."""
        vals = [np.abs(self._c[:, 0]), np.abs(self._left_values()), [abs(self.evaluate(self._bp[-1]))]]
        if self.degree >= 2:
            for i, h in enumerate(self.widths()):
                dc = npoly.polyder(self._c[i])
                if not np.any(dc):
                    continue
                r = npoly.polyroots(np.trim_zeros(dc, "b")) if np.any(dc[1:]) else np.array([])
                r = r[np.abs(r.imag) <= 1e-12 * max(1.0, h)].real if len(r) else r
                r = r[(r > 0) & (r < h)] if len(r) else r
                if len(r):
                    vals.append(np.abs(npoly.polyval(r, self._c[i])))
        return float(max(np.max(v) if len(v) else 0.0 for v in vals))

    def sign_changes(self, tol: float = 1e-9, scale: Optional[float] = None) -> SignChangeCatalogue:
        """Catalogue the strict sign changes on the open support.

        A stretch where ``|p| <= tol * scale`` throughout is a zero term and is
        skipped; a change across such a gap is placed at its midpoint. The
        default scale is ``max(1, sup-norm)``.
        """
        if scale is None:
            scale = max(1.0, self.sup_norm())
        thr = tol * scale
        segments: List[Tuple[float, float, int]] = []
        for i in range(self.n_pieces):
            b0, b1 = float(self._bp[i]), float(self._bp[i + 1])
            h = b1 - b0
            c = self._c[i]
            if np.sum(np.abs(c) * h ** np.arange(len(c))) <= thr:
                segments.append((b0, b1, 0))
                continue
            cuts = [0.0] + [r for r, odd in _sturm.isolate_roots(c, 0.0, h, ISOLATION_RTOL * h) if odd and 0.0 < r < h] + [h]
            for s0, s1 in zip(cuts[:-1], cuts[1:]):
                if s1 <= s0:
                    continue
                t = s0 + (s1 - s0) * _SAMPLE_NODES
                v = _horner(c, t)
                j = int(np.argmax(np.abs(v)))
                sgn = 0 if abs(v[j]) <= thr else int(np.sign(v[j]))
                segments.append((b0 + s0, b0 + s1, sgn))

        points: List[float] = []
        initial = 0
        last_sign, last_end = 0, None
        for lo, hi, sgn in segments:
            if sgn == 0:
                continue
            if last_sign == 0:
                initial = sgn
            elif sgn != last_sign:
                points.append(lo if lo == last_end else 0.5 * (last_end + lo))
            last_sign, last_end = sgn, hi
        return SignChangeCatalogue(tuple(points), initial)

    def global_min(self, lo: Optional[float] = None, hi: Optional[float] = None) -> Tuple[float, float]:
        """Exact minimum over ``[lo, hi]`` of a continuous function: ``(argmin, value)``."""
        if not self.is_continuous():
            raise JumpDifferentiation("global_min needs a continuous function")
        lo = self.support[0] if lo is None else lo
        hi = self.support[1] if hi is None else hi
        cand = [lo, hi] + [float(b) for b in self._bp if lo < b < hi]
        dp = self._piecewise_derivative()
        for i in range(self.n_pieces):
            if self._bp[i + 1] < lo or self._bp[i] > hi:
                continue
            cand.extend(r for r, _ in dp._piece_roots(i, lo, hi))
        cand = np.array(sorted(set(cand)))
        vals = self(cand)
        j = int(np.argmin(vals))
        return float(cand[j]), float(vals[j])

    def global_max(self, lo: Optional[float] = None, hi: Optional[float] = None) -> Tuple[float, float]:
        x, v = (-self).global_min(lo, hi)
        return x, -v

    # ------------------------------------------------------------------- dumps

    def to_dict(self) -> dict:
        """JSON-ready dump; ``pieces`` hold local coefficients in ``x - b_i``.

        ``jumps`` has one entry per breakpoint ``b_1 .. b_M``.
        """
        return {
            "breakpoints": [float(b) for b in self._bp],
            "pieces": [[float(v) for v in row] for row in self._c],
            "jumps": [float(j) for j in self.jumps()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PiecewisePolynomial":
        jumps = list(d.get("jumps", []))
        n_inner = len(d["breakpoints"]) - 2
        flags = [j == 0.0 for j in jumps[:n_inner]] if jumps else None
        end = jumps[-1] if len(jumps) == n_inner + 1 else 0.0
        return cls(d["breakpoints"], d["pieces"], continuous=flags, end_jump=end)


_SAMPLE_NODES = 0.5 - 0.5 * np.cos(np.pi * (np.arange(9) + 0.5) / 9)
