"""Uplink rates under maximum-ratio transmission on the downlink model.

Two evaluation paths for the same per-stream SINR: a closed form driven
only by the variance profile and the element counts, and a Monte-Carlo
estimator driven by sampled realizations.  Both treat the angular bases as
orthonormal (the model property; see FourierBasis notes), so beam inner
products reduce to angular-domain inner products.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import ChannelRealization, VarianceProfile, angular_stream

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkConfig:
    """Transmit power, noise level and Monte-Carlo budget for one link study.

    p_u and sigma2_w are in the same (arbitrary) power unit; only their
    ratio moves the SINR when profiles are normalized.  Rates come out in
    bit/s/Hz unless ``nats`` is set.
    """

    p_u: float
    K: int
    sigma2_w: float = 1.0
    trials: int = 1000
    nats: bool = False

    def __post_init__(self):
        if not self.p_u > 0:
            raise ValueError("p_u must be positive")
        if not self.sigma2_w > 0:
            raise ValueError("sigma2_w must be positive")
        if self.K < 1:
            raise ValueError("K must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass(frozen=True)
class RateResult:
    """Per-stream SINRs and rates plus their sum, tagged with the method."""

    sinr: np.ndarray
    per_stream: np.ndarray
    sum_rate: float
    method: str
    trials_used: int | None = None

    def __post_init__(self):
        if self.sinr.shape != self.per_stream.shape:
            raise ValueError("shape mismatch")


def snr_to_pu(snr_db: float, sigma2_w: float = 1.0) -> float:
    """Transmit power giving the requested SNR = 10 log10(p_u / sigma2_w)."""
    return sigma2_w * 10.0 ** (snr_db / 10.0)


def mrt_alpha_sq(profile: VarianceProfile, N_s: int, N_r: int) -> float:
    """Power normalization of the MRT precoder.

    alpha^2 = 1 / (N_r N_s sum_k sum_i sum_t sigma2_r sigma2_s); its inverse
    is the expected total channel energy E[tr(H_a H_a^H)].
    """
    if N_s < 1 or N_r < 1:
        raise ValueError("element counts must be positive")
    cross = profile.cross_sum
    if cross <= 0:
        raise ValueError("profile carries no power")
    return 1.0 / (N_r * N_s * cross)


def rate_constants(
    profile: VarianceProfile, p_u: float, sigma2_w: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """Stream constants (a, b, c) with SINR = a / (b/(N_r N_s) + c).

    a[k,i] = sigma2_r[k,i] * (sum_t sigma2_s)^2
    b[k,i] = sigma2_w * cross_sum / (sigma2_r[k,i] * p_u)   (inf if the
             stream variance is zero; such streams carry no rate)
    c      = (sum over users and harmonics of sigma2_r) * sum_t sigma2_s^2
    """
    a = profile.sigma2_r * profile.sum_s**2
    with np.errstate(divide="ignore"):
        b = sigma2_w * profile.cross_sum / (profile.sigma2_r * p_u)
    c = profile.sum_r * profile.sum_s4
    return a, b, float(c)


def closed_form_rate(
    profile: VarianceProfile, cfg: LinkConfig, N_s: int, N_r: int
) -> RateResult:
    """Deterministic per-stream rates from the variance profile alone.

    Warns (but still evaluates) when an element count is below its side's
    harmonic count, since the model's orthonormality premise degrades there.
    """
    if cfg.K != profile.K:
        raise ValueError("cfg.K does not match profile")
    if N_s < profile.n_s or N_r < profile.n_r:
        warnings.warn(
            "element counts (%d, %d) below harmonic counts (%d, %d)"
            % (N_s, N_r, profile.n_s, profile.n_r),
            stacklevel=2,
        )
    a, b, c = rate_constants(profile, cfg.p_u, cfg.sigma2_w)
    nn = float(N_s) * float(N_r)
    with np.errstate(invalid="ignore"):
        sinr = np.where(profile.sigma2_r > 0.0, a / (b / nn + c), 0.0)
    per = np.log1p(sinr) / (1.0 if cfg.nats else LN2)
    return RateResult(sinr=sinr, per_stream=per, sum_rate=float(per.sum()),
                      method="th")


def _moment_sinr(
    ha_iter: Iterable[np.ndarray],
    cfg: LinkConfig,
    profile: VarianceProfile,
    N_s: int,
    N_r: int,
) -> RateResult:
    """Shared moment accumulator over angular draws.

    Serial, trial-ordered accumulation: rerunning the same stream gives the
    same floating-point result bit for bit regardless of outer parallelism.
    """
    sum_diag = None
    count = 0
    for h in ha_iter:
        g = h @ h.conj().T
        d = np.diagonal(g).real
        if sum_diag is None:
            sum_diag = np.zeros(g.shape[0])
            sum_diag2 = np.zeros(g.shape[0])
            sum_abs2 = np.zeros(g.shape)
        sum_diag += d
        sum_diag2 += d * d
        sum_abs2 += (g * g.conj()).real
        count += 1
    if count < 2:
        raise ValueError("need at least 2 realizations for moment estimates")
    S = sum_diag.shape[0]
    K, n_r = profile.K, profile.n_r
    if S != K * n_r:
        raise ValueError("realizations do not match the profile's stream count")

    mean_diag = sum_diag / count
    var_diag = sum_diag2 / count - mean_diag**2
    mean_abs2 = sum_abs2 / count
    np.fill_diagonal(mean_abs2, 0.0)  # interference excludes the stream itself
    interf = mean_abs2.sum(axis=1)

    a2 = mrt_alpha_sq(profile, N_s, N_r)
    sig = cfg.p_u * a2 * mean_diag**2
    den = cfg.sigma2_w + cfg.p_u * a2 * (var_diag + interf)
    sinr = (sig / den).reshape(K, n_r)
    per = np.log1p(sinr) / (1.0 if cfg.nats else LN2)
    return RateResult(sinr=sinr, per_stream=per, sum_rate=float(per.sum()),
                      method="mc", trials_used=count)


def mc_sinr(
    realizations: Iterable[ChannelRealization],
    cfg: LinkConfig,
    profile: VarianceProfile,
) -> RateResult:
    """Monte-Carlo per-stream SINRs from a stream of realizations.

    Signal, beam-gain variance and interference moments are all estimated
    from the same draws (common random numbers), then assembled into the
    use-and-forget SINR estimator.
    """
    it = iter(realizations)
    try:
        first = next(it)
    except StopIteration:
        raise ValueError("empty realization stream") from None

    def chain():
        yield first.H_a
        for r in it:
            yield r.H_a

    return _moment_sinr(chain(), cfg, profile, first.N_s, first.N_r)


def monte_carlo_rate(
    profile: VarianceProfile,
    cfg: LinkConfig,
    N_s: int,
    N_r: int,
    seed: int,
) -> RateResult:
    """Self-contained MC rate: draws cfg.trials angular realizations itself."""
    if cfg.trials < 2:
        raise ValueError("need at least 2 trials")
    return _moment_sinr(
        angular_stream(profile, N_s, N_r, seed, cfg.trials), cfg, profile, N_s, N_r
    )


def sum_rate(result: RateResult) -> float:
    return float(result.per_stream.sum())


RATE_CSV_HEADER = ["snr_db", "L_s", "L_r", "N_s", "N_r", "K", "method", "sum_rate"]


def export_rate_csv(path, rows: Iterable[dict]) -> None:
    """Write sweep rows with the published schema, stable float formatting."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RATE_CSV_HEADER)
        for r in rows:
            w.writerow([
                repr(float(r["snr_db"])), repr(float(r["L_s"])), repr(float(r["L_r"])),
                int(r["N_s"]), int(r["N_r"]), int(r["K"]),
                str(r["method"]), repr(float(r["sum_rate"])),
            ])
