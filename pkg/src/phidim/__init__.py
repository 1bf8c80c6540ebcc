"""phidim: finite-scale dimension estimation for measures on the line.

The package evaluates how ball-mass ratios mu(B(z,R))/mu(B(z,r)) scale over
admissible scale pairs r <= R^(1+phi(R)), for a family of gauge functions phi
and a library of exactly-representable measures, together with closed-form
reference values and exact net-interval machinery for finite-type systems.
"""

from .dimfunc import ScaleFunction, DomainError, validate_scale_function, geometric_grid
from .enclosure import Enclosure, EmptyBallError, PrecisionError

__version__ = "0.1.0"

__all__ = [
    "ScaleFunction",
    "DomainError",
    "validate_scale_function",
    "geometric_grid",
    "Enclosure",
    "EmptyBallError",
    "PrecisionError",
    "__version__",
]
