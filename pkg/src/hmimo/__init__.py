"""Rate and energy-efficiency studies for dense planar antenna surfaces.

The model: two square apertures (base station and K single-surface users)
exchange data through a small set of propagating plane-wave harmonics.
`geometry` enumerates those harmonics, `channel` builds Fourier bases and
per-harmonic variance profiles and samples random couplings, `link` turns
them into match-filter rates (closed form and Monte-Carlo), `energy` prices
the hardware, and `optimizer` finds the antenna counts that maximize rate
per watt. `cli` wraps the sweeps behind a reproducible command line.
"""

__version__ = "0.1.0"

from .geometry import (SurfaceGeometry, WavenumberLattice, antenna_positions,
                       build_lattice, check_nyquist, dof_approx, grid_shape)
from .channel import (ChannelRealization, FourierBasis, VarianceProfile,
                      angular_stream, channel_stream, export_variance_csv,
                      fourier_basis, import_variance_csv, isotropic_variances,
                      sample_channel, uniform_variances)
from .link import (LinkConfig, RateResult, closed_form_rate,
                   export_rate_csv, mc_sinr, monte_carlo_rate,
                   mrt_alpha_sq, rate_constants, snr_to_pu, sum_rate)
from .energy import PowerModel, energy_efficiency, total_power
from .optimizer import (EEProblem, NumericalError, OptimumResult,
                        build_problem, ee_objective, grid_scan_oracle,
                        kkt_residuals, optimize, optimize_ns,
                        solve_stationary, to_report)

__all__ = [
    "SurfaceGeometry", "WavenumberLattice", "antenna_positions",
    "build_lattice", "check_nyquist", "dof_approx", "grid_shape",
    "ChannelRealization", "FourierBasis", "VarianceProfile",
    "angular_stream", "channel_stream", "export_variance_csv",
    "fourier_basis", "import_variance_csv", "isotropic_variances",
    "sample_channel", "uniform_variances",
    "LinkConfig", "RateResult", "closed_form_rate", "export_rate_csv",
    "mc_sinr", "monte_carlo_rate", "mrt_alpha_sq", "rate_constants",
    "snr_to_pu", "sum_rate",
    "PowerModel", "energy_efficiency", "total_power",
    "EEProblem", "NumericalError", "OptimumResult", "build_problem",
    "ee_objective", "grid_scan_oracle", "kkt_residuals", "optimize",
    "optimize_ns", "solve_stationary", "to_report",
]
