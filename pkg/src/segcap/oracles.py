"""Independent ground truth: polynomial preimages and a Leja-point estimator.

If T = c x^n + ... and E = T^{-1}[-1, 1] is a union of real segments, then

    G_E(x) = log |T(x) + sqrt(T(x)^2 - 1)| / n,    Cap(E) = (2|c|)^{-1/n},

with the root chosen so that the modulus is at least one.  The Chebyshev
sets E_n = T_{2n}^{-1}[0, 1] are preimages of [-1, 1] under 2 T_{2n} - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .errors import OracleError
from .segments import SegmentSystem, new_segment_system


@dataclass(frozen=True)
class PolynomialOracle:
    """Real polynomial T, coefficients in ascending order."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coef = tuple(float(c) for c in self.coefficients)
        while len(coef) > 1 and coef[-1] == 0.0:
            coef = coef[:-1]
        if len(coef) < 2 or coef[-1] == 0.0:
            raise OracleError("ZERO_LEADING_COEFFICIENT", "need a polynomial of degree >= 1")
        object.__setattr__(self, "coefficients", coef)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> float:
        return self.coefficients[-1]

    @property
    def poly(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def __call__(self, x):
        return self.poly(x)

    def preimage(self) -> SegmentSystem:
        """T^{-1}[-1, 1] as a segment system, from the real roots of T^2 - 1."""
        p = self.poly
        roots = np.concatenate([(p - 1).roots(), (p + 1).roots()])
        # a touching extremum is a double root, which root finding splits by ~sqrt(eps)
        if np.max(np.abs(roots.imag)) > 1e-6:
            raise OracleError("PREIMAGE_NOT_REAL", "T^2 - 1 has non-real roots")
        r = np.sort(roots.real)
        keep = [r[0]]
        for x in r[1:]:
            if abs(x - keep[-1]) < 1e-6:
                keep.pop()
            else:
                keep.append(x)
        return new_segment_system(keep)


def chebyshev_preimage_set(n: int) -> SegmentSystem:
    """E_n = T_{2n}^{-1}[0, 1]: n + 1 segments in [-1, 1].

    Endpoints are +-1 and +-cos(k pi / (4n)) for odd k < 2n.
    """
    if n < 1:
        raise OracleError("BAD_DEGREE", "n must be >= 1")
    k = np.arange(1, 2 * n, 2)
    c = np.cos(k * np.pi / (4 * n))
    pts = np.sort(np.concatenate([[-1.0, 1.0], c, -c]))
    E = new_segment_system(pts)
    T = Chebyshev.basis(2 * n)
    vals = T(E.array)
    if np.max(np.minimum(np.abs(vals), np.abs(vals - 1.0))) > 1e-12:
        raise OracleError("BAD_PREIMAGE", "endpoint is not a preimage of 0 or 1")
    mids = np.array([0.5 * (a + b) for a, b in E.segments])
    if np.any((T(mids) < 0) | (T(mids) > 1)):
        raise OracleError("BAD_PREIMAGE", "segment midpoint maps outside [0, 1]")
    return E


def chebyshev_oracle(n: int) -> PolynomialOracle:
    """S = 2 T_{2n} - 1, with S^{-1}[-1, 1] = E_n."""
    S = 2.0 * Chebyshev.basis(2 * n).convert(kind=Polynomial) - 1.0
    return PolynomialOracle(tuple(S.coef))


def chebyshev_capacity(n: int, half_width: float = 1.0) -> float:
    """Capacity of E_n scaled to [-half_width, half_width]: half_width * 2^{-1 - 1/(2n)}."""
    return half_width * 2.0 ** (-1.0 - 1.0 / (2 * n))


def polynomial_preimage_capacity(p: PolynomialOracle) -> float:
    return (2.0 * abs(p.leading)) ** (-1.0 / p.degree)


def polynomial_preimage_green(p: PolynomialOracle, x: complex) -> float:
    t = complex(p(complex(x)))
    s = np.sqrt(t * t - 1.0)
    r = max(abs(t + s), abs(t - s))
    return float(np.log(r) / p.degree) if r > 1.0 else 0.0


def leja_grid(E: SegmentSystem, per_segment: int = 2000) -> np.ndarray:
    """Chebyshev-distributed candidate nodes on each segment, endpoints included."""
    th = np.linspace(0.0, np.pi, per_segment)
    parts = [0.5 * (a + b) - 0.5 * (b - a) * np.cos(th) for a, b in E.segments]
    return np.unique(np.concatenate(parts))


def leja_points(E: SegmentSystem, N: int, per_segment: int = 2000) -> np.ndarray:
    """N greedy Leja points from the grid, starting at the point of largest modulus."""
    z = leja_grid(E, per_segment)
    if N > len(z):
        raise OracleError("GRID_TOO_SMALL", f"N={N} exceeds the {len(z)} candidate nodes")
    if N < 2:
        raise OracleError("BAD_POINT_COUNT", "need N >= 2")
    chosen = np.zeros(N, dtype=int)
    chosen[0] = int(np.argmax(np.abs(z)))
    logprod = np.zeros(len(z))
    taken = np.zeros(len(z), dtype=bool)
    for k in range(1, N):
        j = chosen[k - 1]
        taken[j] = True
        with np.errstate(divide="ignore"):
            logprod += np.log(np.abs(z - z[j]))
        logprod[taken] = -np.inf
        chosen[k] = int(np.argmax(logprod))
    return z[chosen]


def transfinite_diameter_estimate(E: SegmentSystem, N: int, per_segment: int = 2000) -> float:
    """d_N = (prod_{i<j} |z_i - z_j|)^{2/(N(N-1))} over N Leja points."""
    p = leja_points(E, N, per_segment)
    i, j = np.triu_indices(N, 1)
    return float(np.exp(2.0 * np.sum(np.log(np.abs(p[i] - p[j]))) / (N * (N - 1))))


def random_segment_system(n_segments: int, rng: np.random.Generator,
                          lo: float = -1.0, hi: float = 1.0, min_gap: float = 0.02) -> SegmentSystem:
    """Random system whose endpoints are at least ``min_gap`` x (hi - lo) apart."""
    n = 2 * n_segments
    while True:
        pts = np.sort(rng.uniform(lo, hi, n))
        if np.min(np.diff(pts)) >= min_gap * (hi - lo):
            return new_segment_system(pts)


def sample_points(E: SegmentSystem, n_real: int, n_complex: int,
                  rng: np.random.Generator) -> list[complex]:
    """Quasi-random evaluation points: real ones off E, and upper half-plane ones."""
    e = E.array
    lo, hi = e[0], e[-1]
    d = hi - lo
    out: list[complex] = []
    while len(out) < n_real:
        x = float(rng.uniform(lo - 2 * d, hi + 2 * d))
        if not E.contains(x, atol=1e-3 * d):
            out.append(complex(x))
    for _ in range(n_complex):
        out.append(complex(rng.uniform(lo - d, hi + d), rng.uniform(0.01 * d, 2 * d)))
    return out

