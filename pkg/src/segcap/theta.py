"""Riemann theta functions by truncated lattice summation.

The series is summed over integer vectors near the saddle of the term
modulus, inside the box of half-width R given by :func:`truncation_radius`
and the matching ellipsoid of the quadratic form Im Pi.  Every omitted term
is then below ``tol / 10**g`` relative to the largest term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ThetaError

DEFAULT_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class ThetaMatrix:
    """A Riemann matrix together with the factorizations the engine reuses."""

    Pi: np.ndarray

    def __post_init__(self):
        Pi = np.asarray(self.Pi, dtype=complex)
        if Pi.ndim != 2 or Pi.shape[0] != Pi.shape[1]:
            raise ThetaError("BAD_PERIOD_MATRIX", "period matrix must be square")
        object.__setattr__(self, "Pi", Pi)
        if self.lambda_min <= 0:
            raise ThetaError("NOT_POSITIVE_DEFINITE",
                             f"Im Pi is not positive definite (lambda_min={self.lambda_min:.3g})")

    @property
    def genus(self) -> int:
        return self.Pi.shape[0]

    @cached_property
    def imag(self) -> np.ndarray:
        im = self.Pi.imag
        return 0.5 * (im + im.T)

    @cached_property
    def lambda_min(self) -> float:
        return float(np.linalg.eigvalsh(self.imag)[0])

    @cached_property
    def imag_inv(self) -> np.ndarray:
        return np.linalg.inv(self.imag)

    @cached_property
    def chol_upper(self) -> np.ndarray:
        """Upper-triangular T with Im Pi = T^t T."""
        return np.linalg.cholesky(self.imag).T


@dataclass(frozen=True)
class Characteristic:
    """Real characteristic [eps, eps'] of the point (eps' + Pi eps) / 2.

    Half-periods have entries in {0, 1}.
    """

    eps: tuple[float, ...]
    eps_prime: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(float(x) for x in self.eps))
        object.__setattr__(self, "eps_prime", tuple(float(x) for x in self.eps_prime))
        if len(self.eps) != len(self.eps_prime):
            raise ThetaError("BAD_CHARACTERISTIC", "eps and eps_prime differ in length")

    @classmethod
    def zero(cls, g: int) -> Characteristic:
        return cls((0.0,) * g, (0.0,) * g)


def as_theta_matrix(Pi) -> ThetaMatrix:
    if isinstance(Pi, ThetaMatrix):
        return Pi
    tm = getattr(Pi, "theta_matrix", None)
    if isinstance(tm, ThetaMatrix):
        return tm
    return ThetaMatrix(np.asarray(Pi, dtype=complex))


def truncation_radius(Pi, offset_norm: float = 0.0, tol: float = DEFAULT_TOL,
                      safety: float | None = None) -> int:
    """Box half-width for the theta series at absolute tolerance ``tol``.

    R = ceil(sqrt(ln(C/tol) / (pi lambda_min))) + 2 + ceil(offset_norm),
    with C = 10**g unless ``safety`` overrides it.
    """
    tm = as_theta_matrix(Pi)
    if not tol > 0:
        raise ThetaError("BAD_TOLERANCE", "tol must be positive")
    c = 10.0 ** tm.genus if safety is None else safety
    base = math.ceil(math.sqrt(max(math.log(c / tol), 0.0) / (math.pi * tm.lambda_min)))
    return base + 2 + math.ceil(offset_norm)


def _lattice_points(tm: ThetaMatrix, center: np.ndarray, R: int, rho2: float) -> np.ndarray:
    """Integer n with |n - round(center)|_inf <= R and |T (n - center)|^2 <= rho2.

    Enumerated coordinate by coordinate from the last one, using the
    triangular factor; returned in lexicographic order.
    """
    g = tm.genus
    T = tm.chol_upper
    base = np.round(center)
    lo, hi = base - R, base + R
    pts = np.zeros((1, 0))
    partial = np.zeros(1)  # sum of squares of already fixed rows
    for i in range(g - 1, -1, -1):
        # row i of T (n - c) depends on coordinates i..g-1; pts holds i+1..g-1
        shift = (pts - center[i + 1:]) @ T[i, i + 1:] if pts.shape[1] else np.zeros(len(pts))
        room = np.sqrt(np.maximum(rho2 - partial, 0.0)) / T[i, i]
        mid = center[i] - shift / T[i, i]
        a = np.maximum(np.ceil(mid - room), lo[i]).astype(np.int64)
        b = np.minimum(np.floor(mid + room), hi[i]).astype(np.int64)
        counts = np.maximum(b - a + 1, 0)
        if counts.sum() == 0:
            return np.zeros((0, g))
        rep = np.repeat(np.arange(len(pts)), counts)
        offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        ni = (np.repeat(a, counts) + offs).astype(float)
        row = T[i, i] * (ni - center[i]) + shift[rep]
        partial = partial[rep] + row * row
        pts = np.column_stack([ni, pts[rep]])
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def _series(u, tm: ThetaMatrix, a: np.ndarray, b: np.ndarray, tol: float,
            radius_extra: int = 0) -> tuple[complex, float]:
    """sum_m exp(2 pi i (m+a).(u+b) + pi i (m+a).Pi.(m+a)); also the largest term modulus."""
    u = np.asarray(u, dtype=complex)
    g = tm.genus
    if u.shape != (g,):
        raise ThetaError("BAD_ARGUMENT", f"expected a {g}-vector, got shape {u.shape}")
    # term modulus peaks at m + a = -Im(Pi)^{-1} Im u
    center = -tm.imag_inv @ u.imag - a
    offset = float(np.linalg.norm(center - np.round(center)))
    R = truncation_radius(tm, offset, tol) + radius_extra
    rho2 = tm.lambda_min * (R - math.ceil(offset)) ** 2
    n = _lattice_points(tm, center, R, rho2) + a
    v = u + b
    phase = 2j * np.pi * (n @ v) + 1j * np.pi * np.einsum("ki,ij,kj->k", n, tm.Pi, n)
    terms = np.exp(phase)
    top = float(np.max(np.abs(terms))) if len(terms) else 0.0
    total = np.sum(terms.astype(np.clongdouble))
    return complex(total), top


def theta(u, Pi, tol: float = DEFAULT_TOL, extra_radius: int = 0) -> complex:
    """Riemann theta function theta(u, Pi).

    ``extra_radius`` widens the summation region beyond the certified one;
    it exists to check the truncation.
    """
    tm = as_theta_matrix(Pi)
    z = np.zeros(tm.genus)
    return _series(u, tm, z, z, tol, extra_radius)[0]


def theta_char(c: Characteristic, u, Pi, tol: float = DEFAULT_TOL, check: bool = False) -> complex:
    """Theta with characteristic: the series over m + eps/2 with u shifted by eps'/2.

    With ``check`` set, the value is also computed from the plain theta
    function at the shifted argument u + Pi eps/2 + eps'/2 and the two must
    agree to 2*tol relative to the largest series term.
    """
    tm = as_theta_matrix(Pi)
    a = np.asarray(c.eps, float) / 2.0
    b = np.asarray(c.eps_prime, float) / 2.0
    val, top = _series(u, tm, a, b, tol)
    if check:
        alt = theta_char_by_shift(c, u, tm, tol)
        if abs(val - alt) > 2.0 * tol * max(top, 1e-300):
            raise ThetaError("THETA_SELF_TEST_FAILED",
                             f"series {val!r} and shifted-argument {alt!r} values disagree")
    return val


def theta_char_odd(c: Characteristic, u, Pi, tol: float = DEFAULT_TOL) -> complex:
    """theta[c](u) for an odd half-integer characteristic, accurate for small u.

    The plain series cancels to O(u) there.  Pairing n with -n and using
    theta[c](0) = 0 gives

        theta[c](u) = -2 sum_n q(n) cos(2 pi n.b) sin^2(pi n.u) - sum_n q(n) sin(2 pi n.b) sin(2 pi n.u)

    with q(n) = exp(i pi n.Pi.n), n over Z^g + eps/2 and b = eps'/2.
    """
    tm = as_theta_matrix(Pi)
    eps = np.asarray(c.eps, float)
    epsp = np.asarray(c.eps_prime, float)
    if np.any(eps != np.round(eps)) or np.any(epsp != np.round(epsp)) or int(eps @ epsp) % 2 != 1:
        raise ThetaError("NOT_ODD_CHARACTERISTIC", "theta_char_odd needs an odd integer characteristic")
    u = np.asarray(u, dtype=complex)
    if u.shape != (tm.genus,):
        raise ThetaError("BAD_ARGUMENT", f"expected a {tm.genus}-vector, got shape {u.shape}")
    a, b = eps / 2.0, epsp / 2.0
    # term moduli are bounded by exp(-pi n.Y.n + 2 pi |n.Im u|); widen the region accordingly
    offset = float(np.linalg.norm(tm.imag_inv @ u.imag)) + 1.0
    R = truncation_radius(tm, offset, tol)
    rho2 = tm.lambda_min * (R - math.ceil(offset) + 1) ** 2
    n = _lattice_points(tm, -a, R, rho2) + a
    q = np.exp(1j * np.pi * np.einsum("ki,ij,kj->k", n, tm.Pi, n))
    nb = 2.0 * np.pi * (n @ b)
    nu = np.pi * (n @ u)
    terms = -2.0 * q * np.cos(nb) * np.sin(nu) ** 2 - q * np.sin(nb) * np.sin(2.0 * nu)
    return complex(np.sum(terms.astype(np.clongdouble)))


def theta_char_by_shift(c: Characteristic, u, Pi, tol: float = DEFAULT_TOL) -> complex:
    """exp(i pi a.Pi.a + 2 i pi a.(u + b)) theta(u + Pi a + b), a = eps/2, b = eps'/2."""
    tm = as_theta_matrix(Pi)
    a = np.asarray(c.eps, float) / 2.0
    b = np.asarray(c.eps_prime, float) / 2.0
    u = np.asarray(u, dtype=complex)
    pref = np.exp(1j * np.pi * (a @ tm.Pi @ a) + 2j * np.pi * (a @ (u + b)))
    return complex(pref * theta(u + tm.Pi @ a + b, tm, tol))


def theta_scale(u, Pi, c: Characteristic | None = None, tol: float = DEFAULT_TOL) -> float:
    """Modulus of the largest series term; the natural scale of the tolerance."""
    tm = as_theta_matrix(Pi)
    g = tm.genus
    a = np.zeros(g) if c is None else np.asarray(c.eps, float) / 2.0
    b = np.zeros(g) if c is None else np.asarray(c.eps_prime, float) / 2.0
    return _series(u, tm, a, b, tol)[1]
