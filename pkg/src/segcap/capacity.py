"""Green's function, hyperelliptic projection and capacity from theta functions.

With u the Abel-Jacobi map, u_inf the image of infinity on the upper sheet,
c an odd characteristic of K + u(D) for a divisor D of g-1 interior branch
points and xi = c + [0; 1...1]:

    G(x) = | log | theta[c](u + u_inf) / theta[c](u - u_inf) | |

    x(u) = theta[c](u)^2 / (theta[c](u + u_inf) theta[c](u - u_inf))
           * theta[xi](u_inf)^2 / theta[xi](0)^2

    Cap  = | theta[c](u_inf) theta[xi](u_inf) / (theta[c](2 u_inf) theta[xi](0)) |^2

in coordinates where E spans [0, 1]; the capacity then scales with the
length of the original set.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .characteristics import IntChar, default_divisor, divisor_char, xi_char
from .errors import GreenError
from .periods import (JacobianPoint, PeriodData, abel_jacobi_from_infinity, abel_jacobi_point, compute_periods,
                      far_field_radius, reduce_mod_lattice)
from .quadrature import QuadratureConfig
from .segments import AffineMap, SegmentSystem, normalize
from .theta import DEFAULT_TOL, theta_char, theta_char_odd

TINY = 1e-300


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    genus: int
    char_used: IntChar | None = None
    divisor_indices: tuple[int, ...] = ()
    diagnostics: dict[str, float] = field(default_factory=dict)
    scale: float = 1.0

    def recomputed(self) -> float:
        """Capacity rebuilt from the stored theta magnitudes."""
        if not self.diagnostics:
            return self.capacity
        d = self.diagnostics
        ratio = (d["theta_c_uinf"] * d["theta_xi_uinf"]) / (d["theta_c_2uinf"] * d["theta_xi_0"])
        return self.scale * ratio * ratio


def _u(value) -> np.ndarray:
    return np.asarray(value.value if isinstance(value, JacobianPoint) else value, dtype=complex)


def green_function(pd: PeriodData, c: IntChar, x: complex, tol: float = DEFAULT_TOL) -> float:
    """Green's function of the normalized set at ``x`` (normalized coordinates)."""
    x = complex(x)
    if x.imag < 0:
        x = x.conjugate()
    e = pd.base_system.array
    if x.imag == 0 and np.any(e == x.real):
        return 0.0
    uinf = pd.u_infinity
    ch = c.as_real()
    tm = pd.theta_matrix
    if abs(x) >= far_field_radius(pd):
        # u - u_inf is small: take it from the path at infinity and avoid
        # the cancellation of the odd theta series near its zero
        d = abel_jacobi_from_infinity(pd, x)
        num = theta_char(ch, 2.0 * uinf + d, tm, tol)
        den = theta_char_odd(ch, d, tm, tol)
    else:
        u = abel_jacobi_point(pd, x).value
        num = theta_char(ch, u + uinf, tm, tol)
        den = theta_char(ch, u - uinf, tm, tol)
    if abs(den) < TINY or abs(num) < TINY:
        raise GreenError("THETA_ZERO_IN_GREEN",
                         f"theta vanishes at x={x!r}; path and characteristic are inconsistent")
    return abs(math.log(abs(num) / abs(den)))


def x_of_point(pd: PeriodData, c: IntChar, u, tol: float = DEFAULT_TOL) -> complex:
    """Coordinate x (normalized) of the upper-sheet point with Abel-Jacobi image ``u``."""
    u = _u(u)
    uinf = pd.u_infinity
    tm = pd.theta_matrix
    ch = c.as_real()
    xi = xi_char(c).as_real()
    den = theta_char(ch, u + uinf, tm, tol) * theta_char(ch, u - uinf, tm, tol)
    norm = theta_char(xi, np.zeros_like(u), tm, tol)
    if abs(den) < TINY or abs(norm) < TINY:
        raise GreenError("THETA_ZERO_IN_PROJECTION", "denominator vanishes (point at infinity?)")
    return complex(theta_char(ch, u, tm, tol) ** 2 / den * theta_char(xi, uinf, tm, tol) ** 2 / norm ** 2)


def capacity_normalized(pd: PeriodData, c: IntChar, tol: float = DEFAULT_TOL) -> tuple[float, dict[str, float]]:
    """Capacity of the normalized set and the four theta moduli it is built from."""
    tm = pd.theta_matrix
    g = pd.genus
    uinf = reduce_mod_lattice(pd.u_infinity, pd).value
    u2 = reduce_mod_lattice(2.0 * pd.u_infinity, pd).value
    ch = c.as_real()
    xi = xi_char(c).as_real()
    diag = {
        "theta_c_uinf": abs(theta_char(ch, uinf, tm, tol)),
        "theta_xi_uinf": abs(theta_char(xi, uinf, tm, tol)),
        "theta_c_2uinf": abs(theta_char(ch, u2, tm, tol)),
        "theta_xi_0": abs(theta_char(xi, np.zeros(g), tm, tol)),
    }
    if diag["theta_c_2uinf"] < TINY or diag["theta_xi_0"] < TINY:
        raise GreenError("THETA_ZERO_IN_CAPACITY", "a denominator theta value vanishes")
    ratio = (diag["theta_c_uinf"] * diag["theta_xi_uinf"]) / (diag["theta_c_2uinf"] * diag["theta_xi_0"])
    return ratio * ratio, diag


class SegmentProblem:
    """A segment system prepared once for repeated Green's function evaluation.

    Holds the normalizing map, the period data (genus >= 1) and the divisor
    characteristic.  All public methods take and return original coordinates.
    """

    def __init__(self, E: SegmentSystem, cfg: QuadratureConfig | None = None,
                 divisor: Iterable[int] | None = None, theta_tol: float = DEFAULT_TOL):
        self.E = E
        self.cfg = cfg or QuadratureConfig()
        self.theta_tol = theta_tol
        self.normalized, self.to_original = normalize(E)
        self.from_original: AffineMap = self.to_original.inverse()
        self.genus = E.genus
        if self.genus == 0:
            self.pd = None
            self.char = None
            self.divisor = ()
        else:
            self.divisor = default_divisor(self.genus) if divisor is None else tuple(int(s) for s in divisor)
            self.char = divisor_char(self.genus, self.divisor)
            self.pd = compute_periods(self.normalized, self.cfg)

    def with_divisor(self, divisor: Iterable[int]) -> SegmentProblem:
        """Same system and periods, different divisor characteristic."""
        other = copy.copy(self)
        other.divisor = tuple(int(s) for s in divisor)
        other.char = divisor_char(self.genus, other.divisor)
        return other

    def capacity(self) -> CapacityResult:
        scale = abs(self.to_original.scale)
        if self.genus == 0:
            return CapacityResult(capacity=scale / 4.0, genus=0, scale=scale)
        cap, diag = capacity_normalized(self.pd, self.char, self.theta_tol)
        return CapacityResult(capacity=scale * cap, genus=self.genus, char_used=self.char,
                              divisor_indices=self.divisor, diagnostics=diag, scale=scale)

    def green(self, x: complex) -> float:
        t = self.from_original(complex(x))
        if self.genus == 0:
            return _green_interval(t)
        return green_function(self.pd, self.char, t, self.theta_tol)

    def green_many(self, xs: Iterable[complex]) -> np.ndarray:
        return np.array([self.green(x) for x in xs])

    def x_of_point(self, u) -> complex:
        if self.genus == 0:
            raise GreenError("GENUS_ZERO_NO_PERIODS", "no Jacobian for a single segment")
        return self.to_original(x_of_point(self.pd, self.char, u, self.theta_tol))


def _green_interval(t: complex) -> float:
    """Green's function of [0, 1] at t."""
    y = 2.0 * complex(t) - 1.0
    r = y + np.sqrt(y - 1.0) * np.sqrt(y + 1.0)
    a = abs(r)
    return abs(math.log(a)) if a > 0 else 0.0


def capacity(E: SegmentSystem, cfg: QuadratureConfig | None = None,
             indices: Iterable[int] | None = None, theta_tol: float = DEFAULT_TOL) -> CapacityResult:
    """Logarithmic capacity of E.

    ``indices`` selects the g-1 branch points of the divisor (default
    {2, ..., g}); any admissible choice gives the same value.
    """
    return SegmentProblem(E, cfg, indices, theta_tol).capacity()


def green(E: SegmentSystem, x: complex, cfg: QuadratureConfig | None = None,
          indices: Iterable[int] | None = None, theta_tol: float = DEFAULT_TOL) -> float:
    """Green's function of the complement of E with pole at infinity, original coordinates."""
    return SegmentProblem(E, cfg, indices, theta_tol).green(x)
