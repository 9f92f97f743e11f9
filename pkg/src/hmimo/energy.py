"""Transceiver power model and energy efficiency.

Total consumption is affine in the element counts: every element (transmit
side plus K receive surfaces) costs P_1 = L_d P_d + P_v / Q, and a fixed
P_2 = (K + 1) P_f + p_u / zeta covers the per-terminal overhead and the
radiated power after amplifier losses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .link import RateResult

# Default circuit constants (watts): per-element DAC/filter chain product
# P_d*L_d = 5e-6, per-element phase-shift/bias share P_v/Q = 5e-4, fixed
# per-terminal electronics P_f = 5, unit amplifier efficiency.
DEFAULT_P_D = 5e-6
DEFAULT_L_D = 1.0
DEFAULT_P_V = 5e-4
DEFAULT_Q = 1.0
DEFAULT_P_F = 5.0
DEFAULT_ZETA = 1.0


@dataclass(frozen=True)
class PowerModel:
    """Circuit/amplifier constants for one deployment of K users."""

    K: int
    p_u: float
    P_d: float = DEFAULT_P_D
    L_d: float = DEFAULT_L_D
    P_v: float = DEFAULT_P_V
    Q: float = DEFAULT_Q
    P_f: float = DEFAULT_P_F
    zeta: float = DEFAULT_ZETA

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be at least 1")
        if not self.p_u > 0:
            raise ValueError("p_u must be positive")
        if not self.Q > 0:
            raise ValueError("Q must be positive")
        if not 0 < self.zeta <= 1:
            raise ValueError("amplifier efficiency zeta must lie in (0, 1]")
        if min(self.P_d, self.L_d, self.P_v, self.P_f) < 0:
            raise ValueError("power constants must be nonnegative")

    @property
    def P_1(self) -> float:
        """Per-element consumption."""
        return self.L_d * self.P_d + self.P_v / self.Q

    @property
    def P_2(self) -> float:
        """Count-independent consumption."""
        return (self.K + 1) * self.P_f + self.p_u / self.zeta


def total_power(model: PowerModel, N_s, N_r):
    """(N_s + K N_r) P_1 + P_2, broadcastable over element-count arrays."""
    return (np.asarray(N_s) + model.K * np.asarray(N_r)) * model.P_1 + model.P_2


def energy_efficiency(rate, model: PowerModel, N_s, N_r):
    """Sum rate divided by total consumed power.

    ``rate`` is a RateResult or a plain sum-rate number; units follow the
    rate's units (per Hz), giving bit/Hz/J by default.
    """
    value = rate.sum_rate if isinstance(rate, RateResult) else float(rate)
    return value / total_power(model, N_s, N_r)
