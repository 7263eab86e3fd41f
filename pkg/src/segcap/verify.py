"""Self-check battery: the theta pipeline against analytic and tabulated values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .capacity import SegmentProblem, x_of_point
from .characteristics import branch_char, divisor_char, point_to_char, valid_divisors
from .errors import SegcapError
from .oracles import (chebyshev_oracle, chebyshev_preimage_set, polynomial_preimage_capacity,
                      polynomial_preimage_green, sample_points)
from .periods import abel_jacobi_branch_point, reduce_mod_lattice
from .quadrature import QuadratureConfig
from .theta import DEFAULT_TOL, Characteristic, theta, theta_char, theta_char_by_shift

# Reference values for the Chebyshev sets E_n (n = 2, 3, 4):
# imaginary part of the period matrix and the image of infinity.
REFERENCE_IM_PI = {
    2: [[0.60355339059327, 0.10355339059327],
        [0.10355339059327, 0.60355339059327]],
    3: [[0.6220084679281, 0.1666666666666, 0.0446581987385],
        [0.1666666666667, 0.8333333333333, 0.1666666666667],
        [0.0446581987385, 0.1666666666667, 0.6220084679281]],
    4: [[0.628417436515, 0.187075720333, 0.083522329739, 0.024864045922],
        [0.187075720333, 0.899015486588, 0.295462095995, 0.083522329739],
        [0.083522329739, 0.295462095995, 0.899015486588, 0.187075720333],
        [0.024864045922, 0.083522329739, 0.187075720333, 0.628417436515]],
}
REFERENCE_U_INFINITY = {
    2: [0.37499999999998, 0.12499999999992],
    3: [0.4166666666666, 0.2499999999999, 0.0833333333333],
    4: [0.437499999999, 0.312499999999, 0.187499999999, 0.062499999999],
}

CAPACITY_TOL = 1e-10
PERIOD_TOL = 1e-9
REAL_PART_TOL = 1e-10
U_INF_TOL = 1e-9
GREEN_TOL = 1e-8
DIVISOR_TOL = 1e-10
SNAP_TOL = 1e-7
ROUND_TRIP_TOL = 1e-8
THETA_PROPERTY_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    observed: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<44s} observed={self.observed:.3e}  tol={self.tolerance:.1e}  {self.detail}"


def _check(name, observed, tol, detail="") -> Check:
    observed = float(observed)
    return Check(name, observed, tol, bool(np.isfinite(observed) and observed < tol), detail)


def _divisor_for(g: int, override: tuple[int, ...] | None) -> tuple[int, ...] | None:
    if override is not None and len(override) == g - 1:
        return override
    return None


def chebyshev_checks(n: int, cfg: QuadratureConfig | None = None, theta_tol: float = DEFAULT_TOL,
                     divisor: tuple[int, ...] | None = None, seed: int = 20150101) -> list[Check]:
    """All checks for the Chebyshev set E_n."""
    out: list[Check] = []
    E = chebyshev_preimage_set(n)
    oracle = chebyshev_oracle(n)
    try:
        prob = SegmentProblem(E, cfg, _divisor_for(n, divisor), theta_tol)
    except SegcapError as exc:
        return [Check(f"E_{n} setup", float("inf"), 0.0, False, exc.code)]
    pd = prob.pd
    g = pd.genus

    cap = prob.capacity().capacity
    exact = polynomial_preimage_capacity(oracle)
    out.append(_check(f"E_{n} capacity vs (2|c|)^(-1/deg)", abs(cap - exact), CAPACITY_TOL,
                      f"cap={cap:.15f}"))

    if n in REFERENCE_IM_PI:
        ref = np.array(REFERENCE_IM_PI[n])
        out.append(_check(f"E_{n} Im Pi vs reference table", np.max(np.abs(pd.Pi.imag - ref)), PERIOD_TOL))
        out.append(_check(f"E_{n} max |Re Pi|", np.max(np.abs(pd.Pi.real)), REAL_PART_TOL))
        uinf = reduce_mod_lattice(pd.u_infinity, pd).value
        uref = np.array(REFERENCE_U_INFINITY[n])
        out.append(_check(f"E_{n} u_infinity vs reference", np.max(np.abs(uinf - uref)), U_INF_TOL))

    rng = np.random.default_rng(seed + n)
    pts = sample_points(E, 10, 10, rng)
    gerr = max(abs(prob.green(x) - polynomial_preimage_green(oracle, x)) for x in pts)
    out.append(_check(f"E_{n} Green vs polynomial oracle (20 pts)", gerr, GREEN_TOL))

    bad = 0
    for s in range(1, 2 * g + 3):
        try:
            got = point_to_char(abel_jacobi_branch_point(pd, s), pd, SNAP_TOL)
        except SegcapError:
            bad += 1
            continue
        bad += got != branch_char(g, s)
    out.append(_check(f"E_{n} branch-point characteristics", bad, 0.5, f"{bad} mismatches"))

    caps = []
    for I in valid_divisors(g):
        caps.append(prob.with_divisor(I).capacity().capacity)
    spread = (max(caps) - min(caps)) / cap
    out.append(_check(f"E_{n} divisor independence ({len(caps)} sets)", spread, DIVISOR_TOL))

    rt = max(abs(round_trip_x(prob, s) - E.endpoints[s - 1]) for s in range(1, 2 * g + 3))
    out.append(_check(f"E_{n} projection round trip", rt, ROUND_TRIP_TOL))
    return out


def round_trip_x(prob: SegmentProblem, s: int) -> complex:
    """x recovered from u(P_s), with a divisor that avoids P_s (there the formula is 0/0)."""
    g = prob.genus
    I = prob.divisor
    if s in I:
        I = next(J for J in valid_divisors(g) if s not in J)
    t = x_of_point(prob.pd, divisor_char(g, I), prob.pd.branch_images[s - 1], prob.theta_tol)
    return prob.to_original(t)


def theta_checks(Pi, rng: np.random.Generator, cases: int = 100,
                 tol: float = DEFAULT_TOL) -> list[Check]:
    """Evenness, quasi-periodicity, odd constants, parity and the two evaluation paths."""
    from itertools import product

    Pi = np.asarray(Pi)
    g = Pi.shape[0]
    ev = qp = path = par = 0.0
    for _ in range(cases):
        u = rng.uniform(-0.5, 0.5, g) + Pi.imag @ rng.uniform(-0.5, 0.5, g) * 1j
        t0 = theta(u, Pi, tol)
        ev = max(ev, abs(t0 - theta(-u, Pi, tol)) / max(abs(t0), 1.0))
        m = rng.integers(-2, 3, g)
        mp = rng.integers(-2, 3, g)
        lhs = theta(u + mp + Pi @ m, Pi, tol)
        rhs = np.exp(-1j * np.pi * (m @ Pi @ m) - 2j * np.pi * (m @ u)) * t0
        qp = max(qp, abs(lhs - rhs) / max(abs(rhs), 1.0))
        c = Characteristic(tuple(rng.integers(0, 2, g)), tuple(rng.integers(0, 2, g)))
        a = theta_char(c, u, Pi, tol)
        b = theta_char_by_shift(c, u, Pi, tol)
        path = max(path, abs(a - b) / max(abs(a), 1.0))
        sign = (-1) ** int(np.dot(c.eps, c.eps_prime) % 2)
        par = max(par, abs(a - sign * theta_char(c, -u, Pi, tol)) / max(abs(a), 1.0))
    odd = 0.0
    for bits in product((0, 1), repeat=2 * g):
        eps, epsp = bits[:g], bits[g:]
        if sum(x * y for x, y in zip(eps, epsp)) % 2:
            odd = max(odd, abs(theta_char(Characteristic(eps, epsp), np.zeros(g), Pi, tol)))
    return [
        _check(f"theta g={g} evenness", ev, THETA_PROPERTY_TOL),
        _check(f"theta g={g} quasi-periodicity", qp, THETA_PROPERTY_TOL),
        _check(f"theta g={g} odd theta constants vanish", odd, THETA_PROPERTY_TOL),
        _check(f"theta g={g} parity law", par, THETA_PROPERTY_TOL),
        _check(f"theta g={g} series vs shifted argument", path, THETA_PROPERTY_TOL),
    ]


def run_battery(ns: Iterable[int] = (2, 3, 4), cfg: QuadratureConfig | None = None,
                theta_tol: float = DEFAULT_TOL, divisor: tuple[int, ...] | None = None,
                cases: int = 100, seed: int = 20150101) -> list[Check]:
    checks: list[Check] = []
    for n in ns:
        checks.extend(chebyshev_checks(n, cfg, theta_tol, divisor, seed))
    rng = np.random.default_rng(seed)
    prob = SegmentProblem(chebyshev_preimage_set(2), cfg, None, theta_tol)
    checks.extend(theta_checks(prob.pd.Pi, rng, cases, theta_tol))
    return checks
