"""Quench dynamics of RT-symmetric non-Hermitian spin chains.

Detects spectral exceptional points purely from time evolution: the
Loschmidt echo after a field quench decays qualitatively differently on
the two sides of the symmetry-breaking transition, and time-averaged
rate functions develop a kink at the exceptional point.  Momentum-space
closed forms cover the free chains at thousands of sites; exact
diagonalization covers the interacting ones.
"""

from .analysis import (
    AveragingWindow,
    EPEstimate,
    SweepResult,
    detect_ep,
    eta_steady,
    eta_transient,
    rate_from_echo,
    sweep,
)
from .echo import EchoSeries
from .errors import (
    BrokenPhaseError,
    DefectiveSpectrumError,
    DegenerateModeError,
    DimensionLimitError,
    EigensolverError,
    ParameterError,
)
from .exact import (
    ground_state,
    loschmidt_echo,
    prepare_quench,
    spectrum_reality,
)
from .linalg import (
    Metric,
    Spectrum,
    biortho_metric,
    eig_complex,
    evolve,
    matexp_reference,
    metric_inner,
)
from .models import (
    MAX_SITES,
    Model,
    ModelParams,
    analytic_ep,
    build_hamiltonian,
    rt_symmetry_residual,
)
from .momentum import (
    ModeQuench,
    iatxy_block,
    iatxy_grid,
    iatxy_mode_echo,
    ixy_block,
    ixy_dispersion,
    ixy_grid,
    ixy_mode_echo,
    mode_quench,
    rate_function,
)

__version__ = "0.1.0"

__all__ = [
    "AveragingWindow", "EPEstimate", "SweepResult", "detect_ep",
    "eta_steady", "eta_transient", "rate_from_echo", "sweep",
    "EchoSeries",
    "BrokenPhaseError", "DefectiveSpectrumError", "DegenerateModeError",
    "DimensionLimitError", "EigensolverError", "ParameterError",
    "ground_state", "loschmidt_echo", "prepare_quench", "spectrum_reality",
    "Metric", "Spectrum", "biortho_metric", "eig_complex", "evolve",
    "matexp_reference", "metric_inner",
    "MAX_SITES", "Model", "ModelParams", "analytic_ep", "build_hamiltonian",
    "rt_symmetry_residual",
    "ModeQuench", "iatxy_block", "iatxy_grid", "iatxy_mode_echo", "ixy_block",
    "ixy_dispersion", "ixy_grid", "ixy_mode_echo", "mode_quench",
    "rate_function",
    "__version__",
]
