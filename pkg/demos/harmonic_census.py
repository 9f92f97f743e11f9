"""How many plane-wave modes a square surface supports, and what grid syncs to them.

Walks the surface side from half a wavelength to several, printing the exact
harmonic count next to the closed-form estimate and the smallest element
grid that keeps the sampled basis orthonormal.
"""

import numpy as np

from hmimo import (SurfaceGeometry, build_lattice, check_nyquist, dof_approx,
                   fourier_basis, grid_shape)


def main():
    print("side L   harmonics n   floor(pi L^2)   minimal resolving grid")
    for L in (0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 7.0):
        lat = build_lattice(L, L)
        est = dof_approx(L, L)
        side = 2 * int(L) + 1
        print("%6.1f   %11d   %13d   %d x %d" % (L, len(lat), est, side, side))

    print()
    L = 2.0
    lat = build_lattice(L, L)
    print("surface %gx%g carries %d harmonics; element grids vs orthonormality:"
          % (L, L, len(lat)))
    for n in (3, 4, 5, 6, 8):
        geom = SurfaceGeometry(L, L, n, n)
        U = fourier_basis(geom, lat).matrix
        gap = float(np.abs(U.conj().T @ U - np.eye(len(lat))).max())
        enough = check_nyquist(geom.n_antennas, len(lat))
        print("  %d x %d  (N=%2d, N >= n: %-5s)   max |U^H U - I| = %.2e"
              % (n, n, geom.n_antennas, enough, gap))

    print()
    print("grid_shape picks near-square layouts for a requested element count:")
    for N in (12, 13, 16, 78, 80):
        h, v = grid_shape(N)
        print("  N=%3d -> %d x %d" % (N, h, v))


if __name__ == "__main__":
    main()
