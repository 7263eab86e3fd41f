"""Periods and Abel-Jacobi map of the curve w^2 = prod_j (x - e_j).

Branch convention: on the closed upper half-plane ``w`` is the product of
principal square roots of ``x - e_j``.  Real arguments mean the limit from
above (the upper rim).  With this choice ``w`` is real on the gaps and
outside E and purely imaginary on the segments, so the gap integrals of
``x^k dx / w`` are real and the segment integrals imaginary.

All integrals are done in normalized coordinates (e_1 = 0, e_{2g+2} = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import PeriodError
from .quadrature import QuadratureConfig, integrate
from .segments import SegmentSystem
from .theta import ThetaMatrix

SINGULAR_COND = 1e13


def sqrt_branch_w(x, E: SegmentSystem | np.ndarray):
    """Evaluate ``w(x) = prod_j sqrt(x - e_j)`` with principal roots.

    ``x`` (scalar or array) must satisfy Im x >= 0; for real ``x`` the
    upper-rim value is returned.  At a branch point the result is 0.
    """
    e = E.array if isinstance(E, SegmentSystem) else np.asarray(E, dtype=float)
    return _w_partial(np.asarray(x, dtype=complex), e, ())


def _w_partial(x: np.ndarray, e: np.ndarray, skip) -> np.ndarray:
    # imag + 0.0 turns -0.0 into +0.0 so that real arguments land on the upper rim
    z = x.real + 1j * (x.imag + 0.0)
    out = np.ones_like(z)
    for j, ej in enumerate(e):
        if j in skip:
            continue
        out = out * np.sqrt(z - ej)
    return out


def _powers(x: np.ndarray, g: int) -> np.ndarray:
    """Columns x^0 .. x^{g-1}, shape (len(x), g)."""
    return x[:, None] ** np.arange(g)[None, :]


class _Curve:
    """Raw integrals of the basis x^k dx / w, k = 0..g-1, on a normalized system."""

    def __init__(self, e: np.ndarray, cfg: QuadratureConfig):
        self.e = e
        self.g = len(e) // 2 - 1
        self.cfg = cfg

    def interval(self, i: int, theta_hi: float = np.pi) -> np.ndarray:
        """Integral from e[i] to the point m - r cos(theta_hi) inside [e[i], e[i+1]].

        x = m - r cos(t) absorbs both inverse square roots:
        dx / sqrt((x - a)(b - x)) = dt, and sqrt(x - b) = i sqrt(b - x) on the upper rim.
        """
        a, b = self.e[i], self.e[i + 1]
        m, r = 0.5 * (a + b), 0.5 * (b - a)

        def f(t):
            x = (m - r * np.cos(t)).astype(complex)
            return _powers(x, self.g) / (1j * _w_partial(x, self.e, (i, i + 1)))[:, None]

        return integrate(f, 0.0, theta_hi, self.cfg, what=f"interval [{a:g}, {b:g}]")

    def right_near(self, x_end: float) -> np.ndarray:
        """Integral from the rightmost endpoint to x_end, via x = e_N + t^2."""
        eN = self.e[-1]
        last = len(self.e) - 1

        def f(t):
            x = (eN + t * t).astype(complex)
            return 2.0 * _powers(x, self.g) / _w_partial(x, self.e, (last,))[:, None]

        return integrate(f, 0.0, np.sqrt(x_end - eN), self.cfg, what="right tail")

    def right_far(self, x_start: float) -> np.ndarray:
        """Integral from x_start > e_N to +infinity, via x = 1/s."""

        def f(s):
            x = (1.0 / s).astype(complex)
            return _powers(x, self.g) * (x * x / _w_partial(x, self.e, ()))[:, None]

        return integrate(f, 0.0, 1.0 / x_start, self.cfg, what="far field")

    def left_near(self, x_start: float) -> np.ndarray:
        """Integral from x_start < e_1 to e_1, via x = e_1 - t^2 (sqrt(x - e_1) = i t)."""
        e1 = self.e[0]

        def f(t):
            x = (e1 - t * t).astype(complex)
            return 2.0 * _powers(x, self.g) / (1j * _w_partial(x, self.e, (0,)))[:, None]

        return integrate(f, 0.0, np.sqrt(e1 - x_start), self.cfg, what="left tail")

    def left_far(self, x_end: float) -> np.ndarray:
        """Integral from -infinity to x_end < 0, via x = 1/s."""

        def f(s):
            x = (1.0 / s).astype(complex)
            return _powers(x, self.g) * (x * x / _w_partial(x, self.e, ()))[:, None]

        return integrate(f, 1.0 / x_end, 0.0, self.cfg, what="far field")

    def from_infinity(self, z: complex) -> np.ndarray:
        """Integral from infinity (upper sheet) to z along the ray, x = z / tau.

        On the closed upper half-plane w = x^(g+1) prod sqrt(1 - e_j / x), so
        x^k dx / w = -z^(k-g) tau^(g-1-k) dtau / prod sqrt(1 - e_j tau / z),
        which is smooth on [0, 1] once |z| > 2 max |e_j|.
        """
        z = complex(z.real, z.imag + 0.0)
        k = np.arange(self.g)

        def f(tau):
            p = np.ones_like(tau, dtype=complex)
            for ej in self.e:
                p = p * np.sqrt(1.0 - ej * tau / z)
            return -(z ** (k - self.g))[None, :] * tau[:, None] ** (self.g - 1 - k)[None, :] / p[:, None]

        return integrate(f, 0.0, 1.0, self.cfg, what=f"path from infinity to {z!r}")

    def from_branch_point(self, s: int, z: complex) -> np.ndarray:
        """Straight path e[s] -> z in the open upper half-plane, x = e_s + (z - e_s) tau^2."""
        es = self.e[s]
        dz = complex(z) - es
        sq = np.sqrt(dz)

        def f(tau):
            x = es + dz * tau * tau
            return 2.0 * sq * _powers(x, self.g) / _w_partial(x, self.e, (s,))[:, None]

        return integrate(f, 0.0, 1.0, self.cfg, what=f"path to {complex(z)!r}")


@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """A point of C^g / (Z^g + Pi Z^g).

    When ``reduced`` is set, ``value = original - m_prime - Pi @ m``.
    """

    value: np.ndarray
    reduced: bool = False
    m: np.ndarray | None = None
    m_prime: np.ndarray | None = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.value, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PeriodData:
    """Everything the theta formulas need about one normalized segment system."""

    Pi: np.ndarray
    norm_matrix: np.ndarray
    u_infinity: np.ndarray
    base_system: SegmentSystem
    cfg: QuadratureConfig = field(repr=False)
    gap_matrix: np.ndarray = field(repr=False)
    segment_integrals: np.ndarray = field(repr=False)
    branch_images: np.ndarray = field(repr=False)
    u_minus_infinity: np.ndarray = field(repr=False)
    im_pi_inv: np.ndarray = field(repr=False)
    lambda_min: float = field(repr=False)

    @property
    def genus(self) -> int:
        return self.Pi.shape[0]

    @cached_property
    def theta_matrix(self) -> ThetaMatrix:
        return ThetaMatrix(self.Pi)

    @property
    def _curve(self) -> _Curve:
        return _Curve(self.base_system.array, self.cfg)


def compute_periods(E: SegmentSystem, cfg: QuadratureConfig | None = None) -> PeriodData:
    """Normalized differentials, period matrix and image of infinity for E.

    ``E`` must be normalized (first endpoint 0, last 1) and of genus >= 1.
    The differentials are du = C (dx, x dx, ..., x^{g-1} dx) / w with C the
    inverse of the doubled gap-integral matrix, so that twice the integral
    over each gap returns a unit vector.  The b-periods are cumulative
    doubled segment integrals, oriented right to left so that Im Pi > 0.
    """
    cfg = cfg or QuadratureConfig()
    if E.genus < 1:
        raise PeriodError("GENUS_ZERO_NO_PERIODS", "a single segment has no periods")
    if E.endpoints[0] != 0.0 or E.endpoints[-1] != 1.0:
        raise PeriodError("NOT_NORMALIZED", "compute_periods expects e_1 = 0 and e_{2g+2} = 1")
    e = E.array
    g = E.genus
    curve = _Curve(e, cfg)

    raw = np.array([curve.interval(i) for i in range(2 * g + 1)])  # (2g+1, g)
    gap_matrix = 2.0 * raw[1::2].T  # [power k, gap j]
    if np.linalg.cond(gap_matrix) > SINGULAR_COND:
        raise PeriodError("SINGULAR_PERIODS", "gap-period matrix is numerically singular")
    C = np.linalg.inv(gap_matrix)

    J = raw @ C.T  # du integrated over each interval, (2g+1, g)
    branch_images = np.vstack([np.zeros(g, complex), np.cumsum(J, axis=0)])
    segs = -2.0 * J[0::2]  # (g+1, g), right-to-left orientation
    Pi = np.cumsum(segs[:g], axis=0).T

    X = cfg.far_field_split * e[-1]
    u_inf = branch_images[-1] + C @ (curve.right_near(X) + curve.right_far(X))
    XL = e[0] - (cfg.far_field_split - 1.0) * (e[-1] - e[0])
    u_minf = -(C @ (curve.left_near(XL) + curve.left_far(XL)))

    im = Pi.imag
    eig = np.linalg.eigvalsh(0.5 * (im + im.T))
    if eig[0] <= 0:
        raise PeriodError("PERIOD_MATRIX_NOT_POSITIVE",
                          f"Im Pi is not positive definite (lambda_min={eig[0]:.3g})")
    return PeriodData(
        Pi=Pi,
        norm_matrix=C,
        u_infinity=u_inf,
        base_system=E,
        cfg=cfg,
        gap_matrix=gap_matrix,
        segment_integrals=segs,
        branch_images=branch_images,
        u_minus_infinity=u_minf,
        im_pi_inv=np.linalg.inv(im),
        lambda_min=float(eig[0]),
    )


def reduce_mod_lattice(u, pd: PeriodData) -> JacobianPoint:
    """Reduce ``u`` to the fundamental domain of Z^g + Pi Z^g.

    Both the real parts and the Im Pi-coordinates of the imaginary part end
    up in [-1/2, 1/2).  The integer vectors subtracted are reported.
    """
    u = np.asarray(u.value if isinstance(u, JacobianPoint) else u, dtype=complex)
    m = np.floor(pd.im_pi_inv @ u.imag + 0.5)
    v = u - pd.Pi @ m
    mp = np.floor(v.real + 0.5)
    v = v - mp
    return JacobianPoint(v, True, m.astype(int), mp.astype(int))


def abel_jacobi_branch_point(pd: PeriodData, s: int) -> JacobianPoint:
    """Image of the branch point P_s (1-based) by upper-rim integration from e_1."""
    n = len(pd.base_system)
    if not 1 <= s <= n:
        raise PeriodError("BAD_BRANCH_INDEX", f"branch index must be in 1..{n}, got {s}")
    return reduce_mod_lattice(pd.branch_images[s - 1], pd)


def abel_jacobi_raw(pd: PeriodData, x: complex) -> np.ndarray:
    """Unreduced integral of du from e_1 to x (Im x >= 0), normalized coordinates."""
    x = complex(x)
    if x.imag < 0:
        raise PeriodError("LOWER_HALF_PLANE", "abel_jacobi_point needs Im x >= 0; conjugate first")
    e = pd.base_system.array
    C = pd.norm_matrix
    curve = pd._curve
    if abs(x) >= far_field_radius(pd):
        return pd.u_infinity + abel_jacobi_from_infinity(pd, x)
    if x.imag > 0:
        # start from the nearest branch point: the straight path then keeps
        # clear of every other branch point
        s = int(np.argmin(np.abs(e - x.real)))
        return pd.branch_images[s] + C @ curve.from_branch_point(s, x)
    t = x.real
    hit = np.flatnonzero(e == t)
    if hit.size:
        return pd.branch_images[hit[0]].copy()
    if e[0] < t < e[-1]:
        i = int(np.searchsorted(e, t, side="right")) - 1
        m, r = 0.5 * (e[i] + e[i + 1]), 0.5 * (e[i + 1] - e[i])
        th = float(np.arccos(np.clip((m - t) / r, -1.0, 1.0)))
        return pd.branch_images[i] + C @ curve.interval(i, th)
    cfg = pd.cfg
    if t > e[-1]:
        X = cfg.far_field_split * e[-1]
        if t <= X:
            return pd.branch_images[-1] + C @ curve.right_near(t)
        return pd.u_infinity - C @ curve.right_far(t)
    XL = e[0] - (cfg.far_field_split - 1.0) * (e[-1] - e[0])
    if t >= XL:
        return -(C @ curve.left_near(t))
    return pd.u_minus_infinity + C @ curve.left_far(t)


def far_field_radius(pd: PeriodData) -> float:
    """|x| beyond which :func:`abel_jacobi_from_infinity` applies (normalized coordinates)."""
    return pd.cfg.far_field_split * float(np.max(np.abs(pd.base_system.array)))


def abel_jacobi_from_infinity(pd: PeriodData, x: complex) -> np.ndarray:
    """u(x) - u_infinity, integrated from infinity, for |x| >= far_field_radius.

    Subtracting u_infinity from u(x) loses about |x| eps in relative
    accuracy of the difference; this path keeps it to full precision.
    Agrees with ``abel_jacobi_raw(pd, x) - pd.u_infinity`` up to a lattice vector.
    """
    x = complex(x)
    if x.imag < 0:
        raise PeriodError("LOWER_HALF_PLANE", "abel_jacobi_from_infinity needs Im x >= 0")
    if abs(x) < far_field_radius(pd):
        raise PeriodError("NOT_FAR_FIELD", f"|x|={abs(x):g} is inside the far-field radius")
    return pd.norm_matrix @ pd._curve.from_infinity(x)


def abel_jacobi_point(pd: PeriodData, x: complex) -> JacobianPoint:
    """Abel-Jacobi image u(x) on the upper sheet, reduced mod the lattice."""
    return reduce_mod_lattice(abel_jacobi_raw(pd, x), pd)


def gap_periods(pd: PeriodData) -> np.ndarray:
    """Recompute twice the gap integrals of du; returns [gap j, differential s].

    Independent of ``gap_matrix`` apart from sharing the quadrature kernel;
    should return the identity.
    """
    curve = pd._curve
    g = pd.genus
    return np.array([2.0 * pd.norm_matrix @ curve.interval(2 * j + 1) for j in range(g)])
