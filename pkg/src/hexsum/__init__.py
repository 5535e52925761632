"""Fourier summability kernels on the regular hexagon, in homogeneous coordinates.

Points live on the plane t1 + t2 + t3 = 0; the hexagonal norm is max |t_i|.
Every closed-form kernel here has a brute-force quadrature counterpart in
:mod:`hexsum.oracle`.
"""

from hexsum.exceptions import (
    BoundaryBandError,
    ConsistencyError,
    DegenerateKnotsError,
    HexsumError,
    QuadratureError,
)
from hexsum.hexgeom import CartesianPoint, GridSpec, HexPoint, RegionLabel

__version__ = "0.1.0"

__all__ = [
    "BoundaryBandError",
    "CartesianPoint",
    "ConsistencyError",
    "DegenerateKnotsError",
    "GridSpec",
    "HexPoint",
    "HexsumError",
    "QuadratureError",
    "RegionLabel",
    "__version__",
]
