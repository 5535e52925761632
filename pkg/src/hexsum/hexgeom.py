"""Homogeneous coordinates on the plane t1 + t2 + t3 = 0.

The Cartesian picture and the homogeneous one are related by

    t1 = -x2/2 + sqrt(3) x1/2,   t2 = x2,   t3 = -x2/2 - sqrt(3) x1/2,

so that x . y = (2/3) s . t and the regular hexagon becomes max |t_i| <= 1.
Measure constants (the Jacobian of this map) are owned by :mod:`hexsum.oracle`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SQRT3 = math.sqrt(3.0)
SUM_TOL = 1e-12
BOUNDARY_BAND = 1e-12


@dataclass(frozen=True)
class HexPoint:
    """A point of the plane t1 + t2 + t3 = 0.

    The three-value constructor validates the sum-zero constraint;
    :meth:`from_pair` is the canonical constructor and sets t3 = -t1 - t2.
    """

    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        for name in ("t1", "t2", "t3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        scale = max(1.0, abs(self.t1) + abs(self.t2) + abs(self.t3))
        if abs(self.t1 + self.t2 + self.t3) > SUM_TOL * scale:
            raise ValueError(
                f"coordinates do not sum to zero: {self.t1!r} + {self.t2!r} + {self.t3!r}"
            )

    @classmethod
    def from_pair(cls, t1: float, t2: float) -> "HexPoint":
        return cls(t1, t2, -float(t1) - float(t2))

    @classmethod
    def origin(cls) -> "HexPoint":
        return cls(0.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t1, self.t2, self.t3)

    def diffs(self) -> tuple[float, float, float]:
        """Pairwise differences (t1 - t2, t2 - t3, t3 - t1)."""
        return (self.t1 - self.t2, self.t2 - self.t3, self.t3 - self.t1)

    def scaled(self, factor: float) -> "HexPoint":
        f = float(factor)
        return HexPoint(self.t1 * f, self.t2 * f, -(self.t1 * f) - (self.t2 * f))

    def __neg__(self) -> "HexPoint":
        return HexPoint(-self.t1, -self.t2, -self.t3)

    def __add__(self, other: "HexPoint") -> "HexPoint":
        return HexPoint.from_pair(self.t1 + other.t1, self.t2 + other.t2)

    def __sub__(self, other: "HexPoint") -> "HexPoint":
        return HexPoint.from_pair(self.t1 - other.t1, self.t2 - other.t2)

    def __mul__(self, factor: float) -> "HexPoint":
        return self.scaled(factor)

    __rmul__ = __mul__

    def dot(self, other: "HexPoint") -> float:
        return self.t1 * other.t1 + self.t2 * other.t2 + self.t3 * other.t3


@dataclass(frozen=True)
class CartesianPoint:
    x1: float
    x2: float

    def __post_init__(self):
        for name in ("x1", "x2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)


def hex_from_cartesian(x: CartesianPoint) -> HexPoint:
    t1 = -x.x2 / 2 + SQRT3 * x.x1 / 2
    t2 = x.x2
    return HexPoint(t1, t2, -t1 - t2)


def cartesian_from_hex(t: HexPoint) -> CartesianPoint:
    # inverse of hex_from_cartesian: t1 - t3 = sqrt(3) x1
    return CartesianPoint((t.t1 - t.t3) / SQRT3, t.t2)


def hex_arrays_from_cartesian(x1, x2):
    """Vectorised :func:`hex_from_cartesian`; returns (t1, t2, t3) arrays."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    t1 = -x2 / 2 + SQRT3 * x1 / 2
    t2 = x2.copy()
    return t1, t2, -t1 - t2


def hexnorm(t: HexPoint) -> float:
    return max(abs(t.t1), abs(t.t2), abs(t.t3))


def in_cartesian_hexagon(x: CartesianPoint) -> bool:
    """Membership in the closed Cartesian hexagon |x2| <= 1, |sqrt(3)/2 x1 +- x2/2| <= 1."""
    h = SQRT3 / 2 * x.x1
    return abs(x.x2) <= 1 and abs(h + x.x2 / 2) <= 1 and abs(h - x.x2 / 2) <= 1


class Side(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"

    @property
    def symbol(self) -> str:
        return {"inside": "-", "outside": "+", "boundary": "0"}[self.value]


@dataclass(frozen=True)
class RegionLabel:
    """Sign pattern of (|t1-t2|, |t2-t3|, |t3-t1|) against a threshold.

    ``name`` follows the E--- / E--+ / E-++ / E+++ notation, with ``0`` marking
    a difference inside the boundary band.
    """

    pattern: tuple[Side, Side, Side]

    @property
    def name(self) -> str:
        return "E" + "".join(s.symbol for s in self.pattern)

    @property
    def on_boundary(self) -> bool:
        return Side.BOUNDARY in self.pattern

    @property
    def outside_count(self) -> int:
        return sum(s is Side.OUTSIDE for s in self.pattern)

    def __str__(self) -> str:
        return self.name


def region_classify(t: HexPoint, threshold: float = 1.0) -> RegionLabel:
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold!r}")
    sides = []
    for d in t.diffs():
        gap = abs(d) - threshold
        if abs(gap) <= BOUNDARY_BAND:
            sides.append(Side.BOUNDARY)
        elif gap < 0:
            sides.append(Side.INSIDE)
        else:
            sides.append(Side.OUTSIDE)
    return RegionLabel(tuple(sides))


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in Cartesian coordinates or in the (t1, t2) chart.

    ``system`` is ``"cartesian"`` (axes x1, x2) or ``"hexplane"`` (axes t1, t2,
    with t3 = -t1 - t2).  Points are enumerated row-major: the second axis is
    the slow index, the first axis the fast one.
    """

    system: str
    center: tuple[float, float]
    half_widths: tuple[float, float]
    resolution: tuple[int, int]

    def __post_init__(self):
        if self.system not in ("cartesian", "hexplane"):
            raise ValueError(f"unknown coordinate system {self.system!r}")
        if len(self.center) != 2 or len(self.half_widths) != 2 or len(self.resolution) != 2:
            raise ValueError("center, half_widths and resolution need two entries each")
        if not all(math.isfinite(c) for c in self.center):
            raise ValueError("grid center must be finite")
        if not all(h > 0 and math.isfinite(h) for h in self.half_widths):
            raise ValueError(f"half-widths must be positive, got {self.half_widths}")
        if not all(int(n) == n and n >= 2 for n in self.resolution):
            raise ValueError(f"resolution must be integers >= 2, got {self.resolution}")

    @classmethod
    def square(cls, lo: float, hi: float, n: int, system: str = "cartesian") -> "GridSpec":
        """The ``lo:hi:n`` grid applied to both axes."""
        if not hi > lo:
            raise ValueError(f"empty range {lo}:{hi}")
        c = (lo + hi) / 2
        h = (hi - lo) / 2
        return cls(system, (c, c), (h, h), (int(n), int(n)))

    @property
    def size(self) -> int:
        return self.resolution[0] * self.resolution[1]

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(
            np.linspace(c - h, c + h, n)
            for c, h, n in zip(self.center, self.half_widths, self.resolution)
        )

    def arrays(self):
        """Flattened (x1, x2, t1, t2, t3) arrays in grid order."""
        u, v = self.axes()
        uu, vv = np.meshgrid(u, v)  # rows follow the second axis
        uu, vv = uu.ravel(), vv.ravel()
        if self.system == "cartesian":
            t1, t2, t3 = hex_arrays_from_cartesian(uu, vv)
            return uu, vv, t1, t2, t3
        t1, t2 = uu, vv
        t3 = -t1 - t2
        return (t1 - t3) / SQRT3, t2.copy(), t1, t2, t3


def hex_grid(spec: GridSpec) -> list[HexPoint]:
    _, _, t1, t2, _ = spec.arrays()
    return [HexPoint.from_pair(a, b) for a, b in zip(t1.tolist(), t2.tolist())]

