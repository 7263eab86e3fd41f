"""Logarithmic capacity and Green's function of aligned real segments.

The set E is a union of g+1 disjoint real segments.  Capacity and the
Green's function are assembled from Riemann theta functions of the
associated hyperelliptic curve w^2 = prod (x - e_j).
"""

from .errors import SegcapError
from .segments import AffineMap, SegmentSystem, genus, new_segment_system, normalize
from .quadrature import QuadratureConfig
from .periods import JacobianPoint, PeriodData, compute_periods
from .characteristics import IntChar
from .capacity import CapacityResult, capacity, green_function

__all__ = [
    "AffineMap",
    "CapacityResult",
    "IntChar",
    "JacobianPoint",
    "PeriodData",
    "QuadratureConfig",
    "SegcapError",
    "SegmentSystem",
    "capacity",
    "compute_periods",
    "genus",
    "green_function",
    "new_segment_system",
    "normalize",
]

__version__ = "0.1.0"
