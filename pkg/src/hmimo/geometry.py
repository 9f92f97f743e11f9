"""Planar array geometry and propagating wavenumber lattices.

All lengths are measured in carrier wavelengths, so the free-space
wavenumber is 2*pi everywhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SurfaceGeometry:
    """Uniform N_H x N_V grid of elements on an L_x x L_y rectangular aperture.

    Element n (0-based, row-major) sits at
    (i * L_x / N_H, j * L_y / N_V, z_offset) with i = n % N_H, j = n // N_H.
    Spacing below half a wavelength (N_H > 2 L_x) is what makes the surface
    "dense"; nothing here enforces it.
    """

    L_x: float
    L_y: float
    N_H: int
    N_V: int
    z_offset: float = 0.0

    def __post_init__(self):
        if not (self.L_x > 0 and self.L_y > 0):
            raise ValueError("aperture side lengths must be positive")
        if self.N_H < 1 or self.N_V < 1:
            raise ValueError("element counts must be at least 1")
        if self.z_offset < 0:
            raise ValueError("surface distance z_offset must be nonnegative")

    @property
    def n_antennas(self) -> int:
        return self.N_H * self.N_V

    @property
    def delta_x(self) -> float:
        return self.L_x / self.N_H

    @property
    def delta_y(self) -> float:
        return self.L_y / self.N_V


@dataclass(frozen=True)
class WavenumberLattice:
    """Integer harmonics (m_x, m_y) with (m_x/L_x)^2 + (m_y/L_y)^2 <= 1.

    Points are stored in lexicographic order (m_x, then m_y).  The closed
    inequality keeps boundary harmonics, so the count can exceed the
    floor(pi L_x L_y) area estimate by a few.
    """

    L_x: float
    L_y: float
    points: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def m(self) -> np.ndarray:
        """Harmonic indices as an (n, 2) integer array."""
        return np.asarray(self.points, dtype=np.int64).reshape(-1, 2)


def antenna_positions(geom: SurfaceGeometry) -> np.ndarray:
    """Element coordinates as an (N, 3) array, row-major over the grid.

    x covers [0, L_x - delta_x], y covers [0, L_y - delta_y], z is constant.
    """
    n = np.arange(geom.n_antennas)
    i = n % geom.N_H
    j = n // geom.N_H
    out = np.empty((geom.n_antennas, 3))
    out[:, 0] = i * geom.delta_x
    out[:, 1] = j * geom.delta_y
    out[:, 2] = geom.z_offset
    return out


def build_lattice(L_x: float, L_y: float) -> WavenumberLattice:
    """Enumerate the propagating harmonics for an L_x x L_y aperture.

    Membership is decided with exact rational arithmetic (floats convert
    exactly to Fraction), so harmonics that land exactly on the ellipse
    boundary are always included, never lost to rounding.
    """
    if not (L_x > 0 and L_y > 0):
        raise ValueError("aperture side lengths must be positive")
    fx2 = Fraction(L_x) ** 2
    fy2 = Fraction(L_y) ** 2
    bound = fx2 * fy2
    mx_max = math.floor(L_x)
    my_max = math.floor(L_y)
    pts = []
    for mx in range(-mx_max, mx_max + 1):
        row_budget = bound - mx * mx * fy2
        for my in range(-my_max, my_max + 1):
            if my * my * fx2 <= row_budget:
                pts.append((mx, my))
    return WavenumberLattice(float(L_x), float(L_y), tuple(pts))


def dof_approx(L_x: float, L_y: float) -> int:
    """Area-law estimate floor(pi L_x L_y) of the number of harmonics.

    Reporting/diagnostic value only; it can differ from the exact lattice
    count by a few (lattice points in a disk do not follow the area exactly),
    so channel construction should use len(build_lattice(L_x, L_y)).
    """
    if not (L_x > 0 and L_y > 0):
        raise ValueError("aperture side lengths must be positive")
    return math.floor(math.pi * L_x * L_y)


def check_nyquist(n_antennas: int, n_harmonics: int) -> bool:
    """True when a surface with n_antennas elements can carry n_harmonics modes."""
    if n_antennas < 1 or n_harmonics < 1:
        raise ValueError("counts must be positive")
    return n_antennas >= n_harmonics


def grid_shape(n_antennas: int) -> tuple[int, int]:
    """Divisor pair (N_H, N_V), N_H <= N_V, closest to a square grid."""
    if n_antennas < 1:
        raise ValueError("counts must be positive")
    for d in range(int(math.isqrt(n_antennas)), 0, -1):
        if n_antennas % d == 0:
            return d, n_antennas // d
    raise AssertionError("unreachable")
