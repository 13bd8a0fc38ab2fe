"""Classical quadrature operators as probability measures on [-1, 1]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from . import measure as M
from . import ordering
from .errors import UnknownRule
from .measure import SignedMeasure
from .ordering import DEFAULT_TOL, OrderingVerdict

REFERENCE = (-1.0, 1.0)


def _atoms(nodes, weights) -> SignedMeasure:
    return M.atomic(REFERENCE, nodes, weights)


def _catalogue() -> Dict[str, SignedMeasure]:
    r2, r5 = math.sqrt(2) / 2, math.sqrt(5) / 5
    g2, g3 = 1 / math.sqrt(3), math.sqrt(3 / 5)
    return {
        "midpoint": _atoms([0.0], [1.0]),
        "trapezoid": _atoms([-1.0, 1.0], [0.5, 0.5]),
        "simpson": _atoms([-1.0, 0.0, 1.0], [1 / 6, 4 / 6, 1 / 6]),
        "gauss2": _atoms([-g2, g2], [0.5, 0.5]),
        "gauss3": _atoms([-g3, 0.0, g3], [5 / 18, 8 / 18, 5 / 18]),
        "chebyshev3": _atoms([-r2, 0.0, r2], [1 / 3, 1 / 3, 1 / 3]),
        "lobatto4": _atoms([-1.0, -r5, r5, 1.0], [1 / 12, 5 / 12, 5 / 12, 1 / 12]),
        "uniform": M.uniform(*REFERENCE),
    }


_RULES = _catalogue()
NAMES = tuple(_RULES)


@dataclass(frozen=True)
class QuadratureRule:
    name: str
    measure: SignedMeasure
    exactness: int


def exactness_degree(mu: SignedMeasure, max_degree: int = 30, tol: float = 1e-12) -> int:
    """Largest ``d`` such that ``mu`` integrates ``x**0 .. x**d`` like ``dx / 2`` on [-1, 1]."""
    ref = _RULES["uniform"]
    d = -1
    for k in range(max_degree + 1):
        if abs(M.moment(mu, k) - M.moment(ref, k)) > tol:
            break
        d = k
    return d


def builtin(name: str) -> QuadratureRule:
    try:
        mu = _RULES[name]
    except KeyError:
        raise UnknownRule(f"unknown rule {name!r}; choose from {', '.join(NAMES)}") from None
    return QuadratureRule(name, mu, exactness_degree(mu))


RuleLike = Union[str, QuadratureRule]


def _as_rule(rule: RuleLike) -> QuadratureRule:
    return builtin(rule) if isinstance(rule, str) else rule


def rescale(rule: RuleLike, a: float, b: float) -> SignedMeasure:
    """Move a reference rule from [-1, 1] to ``[a, b]``."""
    if not a < b:
        raise ValueError("rescale needs a < b")
    return M.pushforward_affine(_as_rule(rule).measure, (b - a) / 2, (a + b) / 2)


@dataclass(frozen=True)
class Comparison:
    rule_a: str
    rule_b: str
    n: int
    interval: Tuple[float, float]
    verdict: OrderingVerdict
    crossing: OrderingVerdict

    def to_dict(self) -> dict:
        return {
            "rules": [self.rule_a, self.rule_b],
            "interval": list(self.interval),
            "global": self.verdict.to_dict(),
            "crossing": self.crossing.to_dict(),
        }


def compare(
    rule_a: RuleLike,
    rule_b: RuleLike,
    n: int,
    tol: float = DEFAULT_TOL,
    interval: Optional[Tuple[float, float]] = None,
) -> Comparison:
    """Is ``A(f) <= B(f)`` for every n-convex ``f``? Runs both exact engines."""
    ra, rb = _as_rule(rule_a), _as_rule(rule_b)
    if interval is None:
        mu_a, mu_b, interval = ra.measure, rb.measure, REFERENCE
    else:
        mu_a, mu_b = rescale(ra, *interval), rescale(rb, *interval)
    return Comparison(
        ra.name,
        rb.name,
        n,
        tuple(interval),
        ordering.global_check(mu_a, mu_b, n, tol),
        ordering.crossing_decision(mu_a, mu_b, n, tol),
    )
