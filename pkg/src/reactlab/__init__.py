"""reactlab: linear and transient instability analysis for the MOMOS
reaction-diffusion-chemotaxis model, with a finite-difference simulator."""

__version__ = "0.1.0"

from .dispersion import (
    DispersionPoint,
    ReactivityCase,
    ReactivityReport,
    TuringSummary,
    classify_reactivity,
    critical_beta,
    dispersion_point,
    eigen,
    h_values,
    jk,
    non_normality,
    select_k2,
    turing_summary,
)
from .errors import BlowUpError, DegenerateMatrixError, ParameterError
from .model import (
    DensityLaw,
    Equilibrium,
    ModelParams,
    equilibrium,
    hermitian_part,
    j0_reactivity,
    jacobian0,
    kinetic_stability,
    numerical_abscissa,
)
from .pde import FieldGrid, SimConfig, SimResult, Verdict, heterogeneity, initialize, run, step
from .scanner import Region, ScanConfig, ScanRow, classify_point, scan
from .transient import (
    EnvelopeSeries,
    EnvelopeSummary,
    amplification_envelope,
    chi_estimate,
    kreiss_constant,
    matrix_exponential,
    pseudo_abscissa,
    rho,
    spectral_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
