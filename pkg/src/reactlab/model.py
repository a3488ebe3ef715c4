"""MOMOS kinetics: parameters, positive equilibrium, kinetic Jacobian.

The two-compartment model couples microbial biomass u and soil organic
matter v through

    du/dt = -k1*u - q*u**2 + k2*v
    dv/dt =  k1*u - k2*v + c

plus diffusion and a chemotactic flux handled elsewhere.  All matrices in
this package are plain 2x2 float numpy arrays.
"""

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import ParameterError


class DensityLaw(Enum):
    """Density dependence of the chemoattraction; only the linear law
    l(u) = u is currently supported."""

    LINEAR = "linear"

    def __call__(self, u):
        if u < 0:
            raise ParameterError(f"density law evaluated at negative u={u}")
        return float(u)


@dataclass(frozen=True)
class ModelParams:
    """Kinetic and transport constants of the MOMOS system."""

    D_u: float = 0.6     # biomass diffusion
    D_v: float = 0.6     # organic-matter diffusion
    beta: float = 0.806  # chemotactic sensitivity
    k1: float = 0.4      # microbial mortality rate
    k2: float = 0.6      # carbon degradation rate
    q: float = 0.0433    # metabolic quotient
    c: float = 0.8       # carbon input
    ell: DensityLaw = field(default=DensityLaw.LINEAR)

    def __post_init__(self):
        for name in ("D_u", "D_v", "k1", "k2", "q", "c"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be strictly positive, got {value}")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ParameterError(f"beta must be nonnegative, got {self.beta}")

    def with_(self, **kwargs):
        return replace(self, **kwargs)

    def kinetics(self, u, v):
        """Reaction terms (f, g); accepts scalars or arrays."""
        f = -self.k1 * u - self.q * u * u + self.k2 * v
        g = self.k1 * u - self.k2 * v + self.c
        return f, g


@dataclass(frozen=True)
class Equilibrium:
    """Positive spatially homogeneous steady state."""

    u0: float
    v0: float


def equilibrium(params: ModelParams) -> Equilibrium:
    """Unique positive equilibrium: u0 = sqrt(c/q), v0 = u0*(q*u0 + k1)/k2."""
    u0 = np.sqrt(params.c / params.q)
    v0 = (params.k1 / params.k2) * u0 + params.c / params.k2
    return Equilibrium(float(u0), float(v0))


def jacobian0(params: ModelParams) -> np.ndarray:
    """Kinetic Jacobian at the positive equilibrium."""
    sqcq = np.sqrt(params.c * params.q)
    return np.array(
        [
            [-params.k1 - 2.0 * sqcq, params.k2],
            [params.k1, -params.k2],
        ]
    )


def kinetic_stability(J0: np.ndarray) -> bool:
    """Stability of the kinetics alone: negative trace and positive
    determinant.  Holds for every valid MOMOS parameter set, since
    det(J0) = 2*k2*sqrt(c*q) > 0 and tr(J0) = -2*sqrt(c*q) - k1 - k2 < 0.
    """
    tr = J0[0, 0] + J0[1, 1]
    det = J0[0, 0] * J0[1, 1] - J0[0, 1] * J0[1, 0]
    return bool(tr < 0 and det > 0)


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def numerical_abscissa(M: np.ndarray) -> float:
    """Largest eigenvalue of the Hermitian part; the initial growth rate
    of ||exp(M t)|| at t -> 0+."""
    H = hermitian_part(M)
    mid = 0.5 * (H[0, 0] + H[1, 1])
    rad = np.hypot(0.5 * (H[0, 0] - H[1, 1]), H[0, 1])
    return float(mid + rad)


def j0_reactivity(J0: np.ndarray) -> bool:
    """Whether the kinetic Jacobian is reactive, i.e. perturbations grow
    initially even though the equilibrium is asymptotically stable.

    Requires a negative trace; then reactivity is equivalent to
    f_u*g_v - (f_v + g_u)**2 / 4 < 0 (the Hermitian part has a positive
    eigenvalue).
    """
    tr = J0[0, 0] + J0[1, 1]
    if not tr < 0:
        raise ParameterError(f"j0_reactivity requires trace < 0, got {tr}")
    fu, fv = J0[0]
    gu, gv = J0[1]
    return bool(fu * gv - 0.25 * (fv + gu) ** 2 < 0)
