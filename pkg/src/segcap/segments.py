"""Segment systems E = [e1, e2] U [e3, e4] U ... U [e_{2g+1}, e_{2g+2}]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SegmentError

DEFAULT_MIN_SEPARATION = 1e-12


@dataclass(frozen=True)
class AffineMap:
    """The map x -> scale * x + shift."""

    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.scale == 0 or not np.isfinite(self.scale) or not np.isfinite(self.shift):
            raise SegmentError("BAD_AFFINE_MAP", f"invalid affine map {self.scale!r}, {self.shift!r}")

    def __call__(self, x):
        return self.scale * x + self.shift

    def inverse(self) -> AffineMap:
        return AffineMap(1.0 / self.scale, -self.shift / self.scale)

    def compose(self, inner: AffineMap) -> AffineMap:
        """Return ``self o inner``."""
        return AffineMap(self.scale * inner.scale, self.scale * inner.shift + self.shift)

    def is_identity(self) -> bool:
        return self.scale == 1.0 and self.shift == 0.0


@dataclass(frozen=True, eq=False)
class SegmentSystem:
    """Validated, immutable endpoint list.  Build with :func:`new_segment_system`."""

    endpoints: tuple[float, ...]

    @property
    def genus(self) -> int:
        return len(self.endpoints) // 2 - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.endpoints, dtype=float)

    @property
    def diameter(self) -> float:
        return self.endpoints[-1] - self.endpoints[0]

    @property
    def segments(self) -> list[tuple[float, float]]:
        e = self.endpoints
        return [(e[2 * j], e[2 * j + 1]) for j in range(len(e) // 2)]

    @property
    def gaps(self) -> list[tuple[float, float]]:
        e = self.endpoints
        return [(e[2 * j + 1], e[2 * j + 2]) for j in range(len(e) // 2 - 1)]

    def contains(self, x: float, atol: float = 0.0) -> bool:
        """True when the real number ``x`` lies on one of the segments."""
        return any(a - atol <= x <= b + atol for a, b in self.segments)

    def mapped(self, m: AffineMap) -> SegmentSystem:
        pts = [m(x) for x in self.endpoints]
        if m.scale < 0:
            pts = pts[::-1]
        return new_segment_system(pts)

    def __eq__(self, other):
        return isinstance(other, SegmentSystem) and self.endpoints == other.endpoints

    def __hash__(self):
        return hash(self.endpoints)

    def __len__(self):
        return len(self.endpoints)


def new_segment_system(endpoints: Sequence[float],
                       min_separation: float = DEFAULT_MIN_SEPARATION) -> SegmentSystem:
    """Validate ``endpoints`` and wrap them in a :class:`SegmentSystem`.

    The input must already be strictly increasing; it is never sorted here.
    ``min_separation`` is relative to the diameter of the set.
    """
    try:
        pts = [float(x) for x in endpoints]
    except (TypeError, ValueError) as exc:
        raise SegmentError("NON_NUMERIC_ENDPOINT", str(exc)) from None
    if not pts:
        raise SegmentError("EMPTY_ENDPOINTS", "no endpoints given")
    if len(pts) % 2:
        raise SegmentError("ODD_ENDPOINT_COUNT", f"expected an even number of endpoints, got {len(pts)}")
    if not all(np.isfinite(pts)):
        raise SegmentError("NON_FINITE_ENDPOINT", "endpoints must be finite")
    diffs = np.diff(pts)
    if np.any(diffs <= 0):
        k = int(np.argmax(diffs <= 0))
        raise SegmentError("NOT_INCREASING",
                           f"endpoints must be strictly increasing: e[{k}]={pts[k]!r}, e[{k + 1}]={pts[k + 1]!r}")
    diam = pts[-1] - pts[0]
    if np.min(diffs) < min_separation * diam:
        k = int(np.argmin(diffs))
        raise SegmentError("SEPARATION_TOO_SMALL",
                           f"endpoints {pts[k]!r} and {pts[k + 1]!r} are closer than "
                           f"{min_separation:g} x diameter")
    return SegmentSystem(tuple(pts))


def genus(E: SegmentSystem) -> int:
    return E.genus


def normalize(E: SegmentSystem) -> tuple[SegmentSystem, AffineMap]:
    """Map E affinely onto a system with first endpoint 0 and last endpoint 1.

    The returned map sends normalized coordinates back to the original ones.
    """
    e = E.array
    a = e[-1] - e[0]
    b = e[0]
    t = (e - b) / a
    t[0], t[-1] = 0.0, 1.0
    return SegmentSystem(tuple(float(x) for x in t)), AffineMap(float(a), float(b))
