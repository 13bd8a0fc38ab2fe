"""Exact real-root isolation for polynomials with double-precision coefficients.

Every double is a dyadic rational, so the Sturm sequence is built over
``fractions.Fraction`` and root counts are exact for the polynomial as stored.
Sign evaluations try floats first and fall back to exact arithmetic whenever
the float value does not clear its rounding bound. Odd roots are bisected
until floats can no longer tell the sign, then polished with Newton steps.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

Poly = List[Fraction]  # ascending degree, no trailing zeros (empty list == 0)

MAX_BISECTIONS = 60


def _trim(p: Poly) -> Poly:
    while p and p[-1] == 0:
        p.pop()
    return p


def to_exact(coeffs: Sequence[float]) -> Poly:
    return _trim([Fraction(float(c)) for c in coeffs])


def _deriv(p: Poly) -> Poly:
    return _trim([k * p[k] for k in range(1, len(p))])


def _divmod(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    num = list(num)
    dq = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dq, 1)
    while len(num) - 1 >= dq and num:
        shift = len(num) - 1 - dq
        c = num[-1] / lead
        quot[shift] = c
        for j, d in enumerate(den):
            num[shift + j] -= c * d
        num.pop()
        _trim(num)
    return _trim(quot), num


def _monic(p: Poly) -> Poly:
    lead = p[-1]
    return [c / lead for c in p]


def _gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, _divmod(p, q)[1]
    return _monic(p)


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def evaluate(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _squarefree(p: Poly) -> Poly:
    dp = _deriv(p)
    if not dp:
        return p
    g = _gcd(p, dp)
    if len(g) == 1:
        return p
    return _divmod(p, g)[0]


def sturm_sequence(p: Poly) -> List[Poly]:
    """Sturm chain of the square-free part of ``p``."""
    q = _squarefree(p)
    seq = [q, _deriv(q)]
    while seq[-1]:
        rem = _divmod(seq[-2], seq[-1])[1]
        seq.append([-c for c in rem])
    seq.pop()
    # Positive rescaling keeps every sign and stops coefficient growth.
    return [[c / abs(s[-1]) for c in s] for s in seq]


def _signers(seq: List[Poly]) -> List[_Signer]:
    return [_Signer(s) for s in seq]


class _Signer:
    """Sign of an exact polynomial at a dyadic point, float-first.

    Horner in floats is trusted when the value clears a rigorous rounding
    bound; otherwise the sign is recomputed in exact arithmetic.
    """

    __slots__ = ("exact", "c", "abs_c", "eps")

    def __init__(self, p: Poly):
        self.exact = p
        self.c = [float(v) for v in p]
        self.abs_c = [abs(v) for v in self.c]
        self.eps = (2 * len(p) + 4) * 2.0**-52

    def __call__(self, x: Fraction) -> int:
        v = self.float_sign(x)
        return v if v is not None else _sign(evaluate(self.exact, x))

    def float_sign(self, x: Fraction):
        """The sign when floats settle it, else None."""
        xf = float(x)
        if xf == x and math.isfinite(xf):
            v = _horner(self.c, xf)
            bound = self.eps * _horner(self.abs_c, abs(xf)) + 1e-290
            if abs(v) > bound and math.isfinite(bound):
                return 1 if v > 0 else -1
        return None


def _variations(seq: List[Poly], x: Fraction) -> int:
    count = 0
    last = 0
    for s in seq:
        v = s(x) if isinstance(s, _Signer) else _sign(evaluate(s, x))
        if v == 0:
            continue
        if last and v != last:
            count += 1
        last = v
    return count


def count_roots(seq: List[Poly], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    return _variations(seq, lo) - _variations(seq, hi)


def _multiplicity(p: Poly, x: Fraction) -> int:
    m = 0
    q = p
    while q and evaluate(q, x) == 0:
        m += 1
        q = _deriv(q)
    return m


def isolate_roots(
    coeffs: Sequence[float], lo: float, hi: float, min_width: float
) -> List[Tuple[float, bool]]:
    """All distinct real roots of the polynomial in ``[lo, hi]``.

    Returns ``(root, odd)`` pairs sorted by location; ``odd`` is True when the
    polynomial changes sign across the root. Roots closer together than
    ``min_width`` are reported once, with the parity of the whole cluster.
    The zero polynomial has no isolated roots and yields an empty list.
    """
    if _clearly_rootless(coeffs, lo, hi):
        return []
    p = to_exact(coeffs)
    if len(p) <= 1:
        return []
    seq = _signers(sturm_sequence(p))
    flo, fhi = Fraction(lo), Fraction(hi)
    out: List[Tuple[float, bool]] = []

    if evaluate(p, flo) == 0:
        out.append((float(lo), _multiplicity(p, flo) % 2 == 1))

    stack = [(flo, fhi, count_roots(seq, flo, fhi))]
    found = []
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1 or b - a <= min_width:
            found.append((a, b, n))
            continue
        m = Fraction((float(a) + float(b)) / 2)
        if not a < m < b:
            found.append((a, b, n))
            continue
        left = count_roots(seq, a, m)
        stack.append((m, b, n - left))
        stack.append((a, m, left))

    for a, b, n in sorted(found):
        out.append(_refine(p, seq, a, b, n))
    out.sort()
    return out


def _clearly_rootless(coeffs: Sequence[float], lo: float, hi: float) -> bool:
    """True when ``|p(mid)|`` beats a Taylor bound on ``|p - p(mid)|`` over ``[lo, hi]``."""
    c = [float(v) for v in coeffs]
    if not any(c) or not all(map(math.isfinite, c)):
        return False
    mid, r = (lo + hi) / 2, (hi - lo) / 2
    # Taylor coefficients at mid via repeated synthetic division.
    t = list(c)
    taylor = []
    for _ in range(len(t)):
        acc = 0.0
        rem = []
        for v in reversed(t):
            acc = acc * mid + v
            rem.append(acc)
        taylor.append(rem[-1])
        t = rem[-2::-1]
    spread = sum(abs(v) * r**k for k, v in enumerate(taylor) if k)
    size = sum(abs(v) * max(abs(lo), abs(hi)) ** k for k, v in enumerate(c))
    return abs(taylor[0]) > spread + 1e-12 * size


def _refine(p: Poly, seq: List[Poly], a: Fraction, b: Fraction, n: int) -> Tuple[float, bool]:
    sa = _right_sign(p, a)
    sb = _sign(evaluate(p, b))
    if sb == 0:
        return float(b), _multiplicity(p, b) % 2 == 1
    if n > 1:
        return (float(a) + float(b)) / 2, sa != sb
    if sa != sb:
        # Odd root: certified-sign bisection, then a guarded Newton step.
        sign_at = _Signer(p)
        for _ in range(MAX_BISECTIONS):
            m = Fraction((float(a) + float(b)) / 2)
            if not a < m < b:
                break
            sm = sign_at.float_sign(m)
            if sm is None:
                # Within rounding of the root: floats cannot tell more.
                break
            if sm == 0:
                return float(m), True
            if sm == sa:
                a = m
            else:
                b = m
        return _newton_polish(p, a, b), True
    # Even root: bisect on the Sturm count.
    for _ in range(MAX_BISECTIONS):
        m = Fraction((float(a) + float(b)) / 2)
        if not a < m < b:
            break
        if evaluate(p, m) == 0:
            return float(m), False
        if count_roots(seq, a, m):
            b = m
        else:
            a = m
    return (float(a) + float(b)) / 2, False


def _right_sign(p: Poly, x: Fraction) -> int:
    """Sign of ``p`` just to the right of ``x``."""
    q = p
    while q:
        v = _sign(evaluate(q, x))
        if v:
            return v
        q = _deriv(q)
    return 0


def _newton_polish(p: Poly, a: Fraction, b: Fraction) -> float:
    fa, fb = float(a), float(b)
    x = (fa + fb) / 2
    if fb - fa <= 4 * math.ulp(x):
        return x
    c = [float(v) for v in p]
    dc = [k * c[k] for k in range(1, len(c))]
    for _ in range(4):
        fx = _horner(c, x)
        dfx = _horner(dc, x)
        if dfx == 0:
            break
        nx = x - fx / dfx
        if not fa <= nx <= fb:
            break
        x = nx
    return x


def _horner(c: Sequence[float], x: float) -> float:
    acc = 0.0
    for v in reversed(c):
        acc = acc * x + v
    return acc
