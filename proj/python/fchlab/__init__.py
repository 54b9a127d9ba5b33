"""Numerics for m_t + 2 u_x m + u m_x = 0 with m = (1 - d_xx)^a u on a periodic grid.

Arrays are 1-D float64 samples at x_j = j L / N; pass the period L alongside.
"""

from ._fchlab import (
    ConfigError,
    NonFiniteError,
    QuadratureError,
    SnapshotError,
    besov_norm,
    characteristics,
    config_help,
    dealias,
    derivative,
    format_snapshot,
    green_kernel,
    grid_x,
    helmholtz_apply,
    helmholtz_invert,
    interpolate,
    kernel_convolve,
    kernel_derivative_sup,
    lp_blocks,
    paraproduct,
    parse_snapshot,
    picard,
    preset_initial_momentum,
    preset_names,
    probe,
    remainder,
    rhs,
    run_preset,
    simulate,
    source_term,
)

__all__ = [name for name in dir() if not name.startswith("_")]
