"""Sampled plane-wave channel model: bases, angular variances, realizations.

The channel between two dense surfaces is represented in a finite angular
(wavenumber) domain.  A realization is drawn as an independent complex
Gaussian matrix H_a in that domain and mapped to antenna space through the
per-surface Fourier basis matrices.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.integrate import quad

from .geometry import TWO_PI, SurfaceGeometry, WavenumberLattice, antenna_positions


@dataclass(frozen=True)
class FourierBasis:
    """Sampled Fourier basis of a surface, one column per lattice harmonic.

    Column order matches ``lattice.points``.  Entry (n, m) is
    exp(j(2 pi m_x x_n / L_x + 2 pi m_y y_n / L_y + gamma z_n)) / sqrt(N)
    with gamma = sqrt((2 pi)^2 - k_x^2 - k_y^2) >= 0 on the lattice.

    The columns are exactly orthonormal (U^H U = I) iff the element grid
    resolves every harmonic separation, i.e. N_H > 2*floor(L_x) and
    N_V > 2*floor(L_y).  Coarser grids alias distinct harmonics onto the
    same sampled column; in particular no grid with N < n can be
    semi-unitary, so rate computations treat orthonormality as a property
    of the model rather than of the sampled matrix.
    """

    matrix: np.ndarray
    geom: SurfaceGeometry
    lattice: WavenumberLattice

    @property
    def n_antennas(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_harmonics(self) -> int:
        return self.matrix.shape[1]


def fourier_basis(geom: SurfaceGeometry, lattice: WavenumberLattice) -> FourierBasis:
    """Build the N x n sampled basis for a surface and its lattice."""
    if (geom.L_x, geom.L_y) != (lattice.L_x, lattice.L_y):
        raise ValueError(
            "geometry sides (%g, %g) do not match lattice sides (%g, %g)"
            % (geom.L_x, geom.L_y, lattice.L_x, lattice.L_y)
        )
    pos = antenna_positions(geom)
    m = lattice.m
    kx = TWO_PI * m[:, 0] / geom.L_x
    ky = TWO_PI * m[:, 1] / geom.L_y
    # lattice membership guarantees the radicand is >= 0; clip rounding dust
    gamma = np.sqrt(np.clip(TWO_PI**2 - kx**2 - ky**2, 0.0, None))
    phase = np.outer(pos[:, 0], kx) + np.outer(pos[:, 1], ky) + np.outer(pos[:, 2], gamma)
    mat = np.exp(1j * phase) / math.sqrt(geom.n_antennas)
    mat.setflags(write=False)
    return FourierBasis(matrix=mat, geom=geom, lattice=lattice)


@dataclass(frozen=True)
class VarianceProfile:
    """Per-harmonic channel gains: sigma2_s per transmit harmonic, and a
    (K, n_r) block of receive gains, one row per user.

    Entries are nonnegative and each side carries some power.  Arrays are
    read-only so profiles can be shared freely between threads.
    """

    sigma2_s: np.ndarray
    sigma2_r: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma2_s, dtype=float).reshape(-1)
        r = np.atleast_2d(np.asarray(self.sigma2_r, dtype=float))
        if s.size == 0 or r.size == 0:
            raise ValueError("profile sides must be nonempty")
        if not (np.isfinite(s).all() and np.isfinite(r).all()):
            raise ValueError("profile entries must be finite")
        if (s < 0).any() or (r < 0).any():
            raise ValueError("variances must be nonnegative")
        if s.sum() <= 0 or any(r[k].sum() <= 0 for k in range(r.shape[0])):
            raise ValueError("each side needs at least one positive entry")
        s.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "sigma2_s", s)
        object.__setattr__(self, "sigma2_r", r)

    @property
    def n_s(self) -> int:
        return self.sigma2_s.shape[0]

    @property
    def n_r(self) -> int:
        return self.sigma2_r.shape[1]

    @property
    def K(self) -> int:
        return self.sigma2_r.shape[0]

    @property
    def sum_s(self) -> float:
        return float(self.sigma2_s.sum())

    @property
    def sum_s4(self) -> float:
        """Sum of squared transmit variances."""
        return float((self.sigma2_s**2).sum())

    @property
    def sum_r(self) -> float:
        """Receive variances summed over all users and harmonics."""
        return float(self.sigma2_r.sum())

    @property
    def cross_sum(self) -> float:
        """sum_k sum_i sum_t sigma2_r[k,i] * sigma2_s[t]; factors by separability."""
        return self.sum_r * self.sum_s

    @property
    def mean_s(self) -> float:
        return self.sum_s / self.n_s

    @property
    def mean_r(self) -> float:
        return self.sum_r / self.n_r


def uniform_variances(n_s: int, n_r: int, K: int) -> VarianceProfile:
    """Flat profile, each side normalized to unit total per user/side."""
    if n_s < 1 or n_r < 1 or K < 1:
        raise ValueError("dimensions must be positive")
    return VarianceProfile(
        sigma2_s=np.full(n_s, 1.0 / n_s),
        sigma2_r=np.full((K, n_r), 1.0 / n_r),
    )


def _cell_integral(mx: int, my: int, L_x: float, L_y: float) -> float:
    """Integral of 1/sqrt((2 pi)^2 - |k|^2) over this harmonic's cell.

    The cell is centered on the harmonic, [2 pi (m - 1/2)/L, 2 pi (m + 1/2)/L]
    per axis, clipped to the open propagation disk |k| < 2 pi.  The inner
    (k_y) integral is an arcsine difference, leaving one well-behaved 1-D
    adaptive quadrature.
    """
    x0 = TWO_PI * (mx - 0.5) / L_x
    x1 = TWO_PI * (mx + 0.5) / L_x
    y0 = TWO_PI * (my - 0.5) / L_y
    y1 = TWO_PI * (my + 0.5) / L_y
    lo = max(x0, -TWO_PI)
    hi = min(x1, TWO_PI)
    if lo >= hi:
        return 0.0

    def inner(kx: float) -> float:
        c2 = TWO_PI**2 - kx * kx
        if c2 <= 0.0:
            return 0.0
        c = math.sqrt(c2)
        a = min(max(y0, -c), c)
        b = min(max(y1, -c), c)
        if b <= a:
            return 0.0
        return math.asin(b / c) - math.asin(a / c)

    # kinks where the disk boundary crosses the cell's y-edges
    pts = []
    for y in (y0, y1):
        rem = TWO_PI**2 - y * y
        if rem > 0:
            kx = math.sqrt(rem)
            for cand in (-kx, kx):
                if lo < cand < hi:
                    pts.append(cand)
    val, _ = quad(inner, lo, hi, points=sorted(set(pts)) or None,
                  epsabs=1e-10, epsrel=1e-10, limit=200)
    return max(val, 0.0)


def isotropic_variances(
    lattice_s: WavenumberLattice,
    lattice_r: WavenumberLattice,
    K: int,
    normalize: bool = True,
) -> VarianceProfile:
    """Angular variances for isotropic scattering on both sides.

    Each harmonic integrates the spectral density 1/sqrt((2 pi)^2 - |k|^2)
    over its own cell; every lattice harmonic gets a strictly positive
    value.  With ``normalize`` each side is scaled to unit total, which
    makes p_u / sigma2_w the single SNR knob; the raw integrals (totals on
    the order of (2 pi)^2 per side) are what physical-scale runs use.
    All K users share the receive profile.
    """
    if K < 1:
        raise ValueError("K must be positive")
    sig_s = np.array([_cell_integral(mx, my, lattice_s.L_x, lattice_s.L_y)
                      for mx, my in lattice_s.points])
    sig_r = np.array([_cell_integral(mx, my, lattice_r.L_x, lattice_r.L_y)
                      for mx, my in lattice_r.points])
    if normalize:
        sig_s = sig_s / sig_s.sum()
        sig_r = sig_r / sig_r.sum()
    return VarianceProfile(sigma2_s=sig_s, sigma2_r=np.tile(sig_r, (K, 1)))


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the multiuser channel.

    ``H_a`` stacks the K user blocks (each n_r x n_s) in the angular domain.
    The antenna-space channel ``H`` ((K N_r) x N_s) is assembled lazily as
    U_r^k H_a^k U_s^H per user block.
    """

    H_a: np.ndarray
    bs_basis: FourierBasis
    user_bases: tuple[FourierBasis, ...]
    seed: object = field(repr=False, default=None)

    @property
    def K(self) -> int:
        return len(self.user_bases)

    @property
    def n_s(self) -> int:
        return self.H_a.shape[1]

    @property
    def n_r(self) -> int:
        return self.H_a.shape[0] // self.K

    @property
    def N_s(self) -> int:
        return self.bs_basis.n_antennas

    @property
    def N_r(self) -> int:
        return self.user_bases[0].n_antennas

    @cached_property
    def H(self) -> np.ndarray:
        us_h = self.bs_basis.matrix.conj().T
        n_r = self.n_r
        blocks = [
            self.user_bases[k].matrix @ self.H_a[k * n_r:(k + 1) * n_r, :] @ us_h
            for k in range(self.K)
        ]
        out = np.vstack(blocks)
        out.setflags(write=False)
        return out


def _draw_angular(profile: VarianceProfile, N_s: int, N_r: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Stacked (K n_r) x n_s draw with entry variance N_r N_s sigma2_r sigma2_s."""
    K, n_r, n_s = profile.K, profile.n_r, profile.n_s
    scale = np.sqrt(
        0.5 * N_r * N_s * profile.sigma2_r.reshape(K * n_r, 1) * profile.sigma2_s
    )
    z = rng.standard_normal((K * n_r, n_s)) + 1j * rng.standard_normal((K * n_r, n_s))
    return scale * z


def sample_channel(
    profile: VarianceProfile,
    bs_basis: FourierBasis,
    user_bases: Sequence[FourierBasis],
    seed,
) -> ChannelRealization:
    """Draw one realization.  Identical seed means identical realization.

    ``seed`` is anything numpy's default_rng accepts (int or list of ints).
    """
    user_bases = tuple(user_bases)
    if len(user_bases) != profile.K:
        raise ValueError("need one receive basis per user")
    if any(b.n_harmonics != profile.n_r for b in user_bases):
        raise ValueError("receive basis harmonic count does not match profile")
    if bs_basis.n_harmonics != profile.n_s:
        raise ValueError("transmit basis harmonic count does not match profile")
    if len({b.n_antennas for b in user_bases}) != 1:
        raise ValueError("all users must have the same element count")
    rng = np.random.default_rng(seed)
    H_a = _draw_angular(profile, bs_basis.n_antennas, user_bases[0].n_antennas, rng)
    H_a.setflags(write=False)
    return ChannelRealization(H_a=H_a, bs_basis=bs_basis,
                              user_bases=user_bases, seed=seed)


def channel_stream(
    profile: VarianceProfile,
    bs_basis: FourierBasis,
    user_bases: Sequence[FourierBasis],
    seed: int,
    trials: int,
) -> Iterator[ChannelRealization]:
    """Yield ``trials`` independent realizations.

    Trial t uses generator seed [seed, t], so any trial can be regenerated
    (or distributed) independently of the others.
    """
    for t in range(trials):
        yield sample_channel(profile, bs_basis, user_bases, seed=[seed, t])


def angular_stream(
    profile: VarianceProfile, N_s: int, N_r: int, seed: int, trials: int
) -> Iterator[np.ndarray]:
    """Yield angular draws only (no bases needed), seeded like channel_stream.

    For the same (profile, seed, trial) the matrix equals the H_a of the
    corresponding ChannelRealization bit for bit.
    """
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        yield _draw_angular(profile, N_s, N_r, rng)


# ---------------------------------------------------------------------------
# CSV exchange format: side (s|r), user_k, index_i, m_x, m_y, sigma2
# user_k is 0 on 's' rows and 1..K on 'r' rows; index_i is the 1-based
# position of the harmonic in its side's lattice ordering.

_CSV_HEADER = ["side", "user_k", "index_i", "m_x", "m_y", "sigma2"]


def export_variance_csv(
    path,
    profile: VarianceProfile,
    lattice_s: WavenumberLattice,
    lattice_r: WavenumberLattice,
) -> None:
    if len(lattice_s) != profile.n_s or len(lattice_r) != profile.n_r:
        raise ValueError("lattice sizes do not match profile")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_CSV_HEADER)
        for i, (mx, my) in enumerate(lattice_s.points):
            w.writerow(["s", 0, i + 1, mx, my, repr(float(profile.sigma2_s[i]))])
        for k in range(profile.K):
            for i, (mx, my) in enumerate(lattice_r.points):
                w.writerow(["r", k + 1, i + 1, mx, my,
                            repr(float(profile.sigma2_r[k, i]))])


def import_variance_csv(
    path,
    lattice_s: WavenumberLattice,
    lattice_r: WavenumberLattice,
) -> VarianceProfile:
    """Read a profile back, checking each row against the expected lattice."""
    rows_s: dict[int, float] = {}
    rows_r: dict[tuple[int, int], float] = {}
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd, None)
        if header != _CSV_HEADER:
            raise ValueError("unexpected header %r" % (header,))
        for ln, row in enumerate(rd, start=2):
            if not row:
                continue
            try:
                side, user_k, index_i, mx, my, sig = row
                user_k, index_i = int(user_k), int(index_i)
                mx, my, sig = int(mx), int(my), float(sig)
            except (ValueError, TypeError) as exc:
                raise ValueError("line %d: malformed row %r" % (ln, row)) from exc
            if sig < 0:
                raise ValueError("line %d: negative variance" % ln)
            if side == "s":
                lat = lattice_s
                if not (1 <= index_i <= len(lat)):
                    raise ValueError("line %d: index out of range" % ln)
                if lat.points[index_i - 1] != (mx, my):
                    raise ValueError("line %d: harmonic (%d,%d) is not entry %d "
                                     "of the transmit lattice" % (ln, mx, my, index_i))
                if index_i in rows_s:
                    raise ValueError("line %d: duplicate entry" % ln)
                rows_s[index_i] = sig
            elif side == "r":
                lat = lattice_r
                if not (1 <= index_i <= len(lat)):
                    raise ValueError("line %d: index out of range" % ln)
                if lat.points[index_i - 1] != (mx, my):
                    raise ValueError("line %d: harmonic (%d,%d) is not entry %d "
                                     "of the receive lattice" % (ln, mx, my, index_i))
                if user_k < 1:
                    raise ValueError("line %d: user_k must be >= 1 on r rows" % ln)
                if (user_k, index_i) in rows_r:
                    raise ValueError("line %d: duplicate entry" % ln)
                rows_r[(user_k, index_i)] = sig
            else:
                raise ValueError("line %d: side must be 's' or 'r'" % ln)
    if len(rows_s) != len(lattice_s):
        raise ValueError("transmit side incomplete: %d of %d rows"
                         % (len(rows_s), len(lattice_s)))
    users = sorted({k for k, _ in rows_r})
    if not users or users != list(range(1, users[-1] + 1)):
        raise ValueError("receive users must be numbered 1..K without gaps")
    K = users[-1]
    if len(rows_r) != K * len(lattice_r):
        raise ValueError("receive side incomplete")
    sig_s = np.array([rows_s[i + 1] for i in range(len(lattice_s))])
    sig_r = np.array([[rows_r[(k + 1, i + 1)] for i in range(len(lattice_r))]
                      for k in range(K)])
    return VarianceProfile(sigma2_s=sig_s, sigma2_r=sig_r)
