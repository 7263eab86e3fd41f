"""Binary theta characteristics and their mod-2 calculus.

A characteristic is stored as two binary g-vectors ``eps`` and
``eps_prime``; it stands for the half-period (eps' + Pi eps) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CharacteristicError
from .periods import JacobianPoint, PeriodData, reduce_mod_lattice
from .theta import Characteristic

EVEN, ODD = "even", "odd"


@dataclass(frozen=True)
class IntChar:
    eps: tuple[int, ...]
    eps_prime: tuple[int, ...]

    def __post_init__(self):
        eps = tuple(int(x) % 2 for x in self.eps)
        epsp = tuple(int(x) % 2 for x in self.eps_prime)
        if len(eps) != len(epsp):
            raise CharacteristicError("BAD_CHARACTERISTIC", "eps and eps_prime differ in length")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "eps_prime", epsp)

    @property
    def genus(self) -> int:
        return len(self.eps)

    @classmethod
    def zero(cls, g: int) -> IntChar:
        return cls((0,) * g, (0,) * g)

    def __add__(self, other: IntChar) -> IntChar:
        return add_mod2(self, other)

    def as_real(self) -> Characteristic:
        return Characteristic(self.eps, self.eps_prime)

    def __str__(self):
        return "[{}; {}]".format("".join(map(str, self.eps)), "".join(map(str, self.eps_prime)))


def _check_genus(g: int):
    if g < 1:
        raise CharacteristicError("BAD_GENUS", f"genus must be >= 1, got {g}")


def branch_char(g: int, s: int) -> IntChar:
    """Characteristic of the Abel-Jacobi image of the branch point P_s (1-based).

    P_1 -> 0, P_{2k} -> (Pi_k + E_1 + ... + E_{k-1}) / 2,
    P_{2k+1} -> (Pi_k + E_1 + ... + E_k) / 2, P_{2g+2} -> (E_1 + ... + E_g) / 2.
    """
    _check_genus(g)
    if not 1 <= s <= 2 * g + 2:
        raise CharacteristicError("BAD_BRANCH_INDEX", f"branch index must be in 1..{2 * g + 2}, got {s}")
    eps = [0] * g
    epsp = [0] * g
    if s == 1:
        pass
    elif s == 2 * g + 2:
        epsp = [1] * g
    else:
        k = s // 2
        eps[k - 1] = 1
        for j in range(k - 1 if s % 2 == 0 else k):
            epsp[j] = 1
    return IntChar(tuple(eps), tuple(epsp))


def riemann_constants_char(g: int) -> IntChar:
    """Characteristic of the vector of Riemann constants (base point P_1).

    eps is all ones; eps' alternates 1, 0, 1, ... read from position g leftwards.
    """
    _check_genus(g)
    return IntChar((1,) * g, tuple(int((g - j) % 2 == 0) for j in range(1, g + 1)))


def add_mod2(a: IntChar, b: IntChar) -> IntChar:
    if a.genus != b.genus:
        raise CharacteristicError("GENUS_MISMATCH", "characteristics of different genus")
    return IntChar(tuple(x ^ y for x, y in zip(a.eps, b.eps)),
                   tuple(x ^ y for x, y in zip(a.eps_prime, b.eps_prime)))


def parity(c: IntChar) -> str:
    return ODD if sum(x * y for x, y in zip(c.eps, c.eps_prime)) % 2 else EVEN


def default_divisor(g: int) -> tuple[int, ...]:
    """The g-1 smallest admissible branch indices, {2, ..., g}."""
    return tuple(range(2, g + 1))


def valid_divisors(g: int) -> list[tuple[int, ...]]:
    """All admissible index sets: (g-1)-subsets of {2, ..., 2g+1}."""
    from itertools import combinations

    return list(combinations(range(2, 2 * g + 2), g - 1))


def divisor_char(g: int, indices: Iterable[int] | None = None) -> IntChar:
    """Characteristic of K + u(P_{s1} + ... + P_{s(g-1)}).

    The indices must be g-1 distinct values from {2, ..., 2g+1}; the result
    is checked to be odd.
    """
    _check_genus(g)
    idx = default_divisor(g) if indices is None else tuple(int(s) for s in indices)
    if len(idx) != g - 1:
        raise CharacteristicError("BAD_DIVISOR", f"expected {g - 1} branch indices, got {len(idx)}")
    if len(set(idx)) != len(idx):
        raise CharacteristicError("BAD_DIVISOR", "branch indices must be distinct")
    for s in idx:
        if not 2 <= s <= 2 * g + 1:
            raise CharacteristicError("BAD_DIVISOR",
                                      f"branch index {s} not in 2..{2 * g + 1} (first and last are excluded)")
    c = riemann_constants_char(g)
    for s in idx:
        c = c + branch_char(g, s)
    if parity(c) != ODD:
        raise CharacteristicError("EVEN_CHARACTERISTIC", f"divisor characteristic {c} is even")
    return c


def xi_char(c: IntChar) -> IntChar:
    """Partner characteristic: eps unchanged, eps' complemented."""
    return IntChar(c.eps, tuple(1 - x for x in c.eps_prime))


def char_to_point(c: IntChar | Characteristic, pd: PeriodData) -> JacobianPoint:
    """(eps' + Pi eps) / 2, reduced."""
    eps = np.asarray(c.eps, float)
    epsp = np.asarray(c.eps_prime, float)
    return reduce_mod_lattice((epsp + pd.Pi @ eps) / 2.0, pd)


def point_to_char(u, pd: PeriodData, snap_tol: float | None = 1e-7) -> IntChar | Characteristic:
    """Read (eps, eps') off a point u = (eps' + Pi eps) / 2.

    With ``snap_tol`` set the entries are snapped to integers mod 2 and an
    :class:`IntChar` is returned; a point that is not a half-period to that
    tolerance raises ``NOT_A_HALF_PERIOD``.  With ``snap_tol=None`` the real
    characteristic is returned.
    """
    v = np.asarray(u.value if isinstance(u, JacobianPoint) else u, dtype=complex)
    eps = pd.im_pi_inv @ (2.0 * v).imag
    epsp = (2.0 * v).real - pd.Pi.real @ eps
    if snap_tol is None:
        return Characteristic(tuple(eps), tuple(epsp))
    ri, rp = np.round(eps), np.round(epsp)
    err = max(np.max(np.abs(eps - ri)), np.max(np.abs(epsp - rp)))
    if err > snap_tol:
        raise CharacteristicError("NOT_A_HALF_PERIOD", f"point is {err:.3g} away from a half-period")
    return IntChar(tuple(int(x) for x in ri), tuple(int(x) for x in rp))
