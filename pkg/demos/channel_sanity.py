"""Empirical channel statistics against the variance profile that generated them.

Draws a few thousand channels for a two-user setup with isotropic
scattering and compares sample moments with what the profile promises:
per-entry variance, total energy, and the match between the angular draw
and its antenna-space image.
"""

import numpy as np

from hmimo import (SurfaceGeometry, build_lattice, fourier_basis,
                   isotropic_variances, angular_stream, sample_channel)

TRIALS = 4000
SEED = 42


def main():
    lat_s = build_lattice(2, 2)
    lat_r = build_lattice(1, 1)
    prof = isotropic_variances(lat_s, lat_r, K=2)
    N_s, N_r = 36, 16

    print("transmit harmonics %d, receive %d, users %d" %
          (prof.n_s, prof.n_r, prof.K))
    print("profile mass: transmit %.6f, receive per user %.6f" %
          (prof.sigma2_s.sum(), prof.sigma2_r[0].sum()))

    acc2 = np.zeros((prof.K * prof.n_r, prof.n_s))
    energy = 0.0
    for ha in angular_stream(prof, N_s, N_r, seed=SEED, trials=TRIALS):
        acc2 += np.abs(ha) ** 2
        energy += np.linalg.norm(ha) ** 2
    var_hat = acc2 / TRIALS
    var_ref = N_s * N_r * prof.sigma2_r.reshape(-1, 1) * prof.sigma2_s
    print("\nper-entry variance over %d draws:" % TRIALS)
    print("  worst relative gap %.3f%%" %
          (100 * np.abs(var_hat / var_ref - 1).max()))
    print("  total energy %.2f vs expected %.2f" %
          (energy / TRIALS, N_s * N_r * prof.cross_sum))

    # the antenna-space image is the angular draw in a different basis, so
    # its Frobenius norm must carry over exactly on resolving grids
    bs = fourier_basis(SurfaceGeometry(2, 2, 6, 6), lat_s)
    users = tuple(fourier_basis(SurfaceGeometry(1, 1, 4, 4, z_offset=2.0 + k), lat_r)
                  for k in range(2))
    real = sample_channel(prof, bs, users, seed=SEED)
    print("\none realization, %d x %d antenna channel per user:" %
          (real.N_r, real.N_s))
    for k in range(real.K):
        fa = np.linalg.norm(real.H_a[k * real.n_r:(k + 1) * real.n_r])
        fs = np.linalg.norm(real.H[k * real.N_r:(k + 1) * real.N_r])
        print("  user %d: |H_a|_F = %.6f, |H|_F = %.6f" % (k + 1, fa, fs))


if __name__ == "__main__":
    main()
