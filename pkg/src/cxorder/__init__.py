"""Higher-order convex ordering of signed measures and quadrature-operator inequalities."""

from .errors import (
    CxOrderError,
    DegreeOverflow,
    JumpDifferentiation,
    OrderOverflow,
    OutOfDomain,
    ParseError,
    SupportMismatch,
    UnknownRule,
    ZeroScale,
)
from .measure import (
    Atom,
    DensityPiece,
    SignedMeasure,
    cdf,
    moment,
    pushforward_affine,
    total_mass,
    total_variation,
    truncated_moment,
)
from .ordering import (
    HProfile,
    OrderingVerdict,
    Verdict,
    Witness,
    check_endpoint_conditions,
    crossing_decision,
    global_check,
    h_function,
    h_sequence,
    levin_steckin_check,
    ohlin_check,
    szostok_check,
)
from .piecewise_poly import PiecewisePolynomial, SignChangeCatalogue
from .quadrature import QuadratureRule, builtin, compare, rescale

__version__ = "0.1.0"
