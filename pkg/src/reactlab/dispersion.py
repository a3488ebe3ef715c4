"""Per-wavenumber linear operator and its stability/reactivity structure.

For each squared wavenumber k2 the linearized dynamics are governed by
J_k = J0 - k2*L where L carries diffusion and the chemotactic coupling.
Everything here reduces to signs and roots of two quadratics in k2:
h (the determinant of J_k, asymptotic stability) and h_tilde (the
determinant of the Hermitian part, reactivity).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegenerateMatrixError, ParameterError
from .model import (
    ModelParams,
    equilibrium,
    hermitian_part,
    j0_reactivity,
    jacobian0,
    kinetic_stability,
    numerical_abscissa,
)

# |disc| below this multiple of ||J_k||^2 is treated as a defective matrix
DEGENERACY_RTOL = 1e-12


def _coefficients(params: ModelParams):
    """Jacobian entries and the chemotactic coupling s = beta*l(u0)."""
    J0 = jacobian0(params)
    u0 = equilibrium(params).u0
    s = params.beta * params.ell(u0)
    return J0, s


def jk(params: ModelParams, k2: float) -> np.ndarray:
    """Linear operator at squared wavenumber k2."""
    if k2 < 0:
        raise ParameterError(f"k2 must be nonnegative, got {k2}")
    J0, s = _coefficients(params)
    return np.array(
        [
            [J0[0, 0] - k2 * params.D_u, J0[0, 1] + k2 * s],
            [J0[1, 0], J0[1, 1] - k2 * params.D_v],
        ]
    )


def _h_poly(params: ModelParams):
    """Coefficients (a, b, c) of h(k2) = a*k2^2 - b*k2 + c."""
    J0, s = _coefficients(params)
    fu, fv = J0[0]
    gu, gv = J0[1]
    a = params.D_u * params.D_v
    b = params.D_u * gv + params.D_v * fu + gu * s
    c = fu * gv - fv * gu
    return a, b, c


def _h_tilde_poly(params: ModelParams):
    """Coefficients (a, b, c) of h_tilde(k2) = a*k2^2 - b*k2 + c."""
    J0, s = _coefficients(params)
    fu, fv = J0[0]
    gu, gv = J0[1]
    a = params.D_u * params.D_v - 0.25 * s * s
    b = params.D_u * gv + params.D_v * fu + 0.5 * (fv + gu) * s
    c = fu * gv - 0.25 * (fv + gu) ** 2
    return a, b, c


def h_values(params: ModelParams, k2: float):
    """(h, h_tilde) at k2; h = det(J_k) and h_tilde = det(H(J_k))."""
    if k2 < 0:
        raise ParameterError(f"k2 must be nonnegative, got {k2}")
    a, b, c = _h_poly(params)
    h = (a * k2 - b) * k2 + c
    at, bt, ct = _h_tilde_poly(params)
    h_tilde = (at * k2 - bt) * k2 + ct
    return float(h), float(h_tilde)


def _quadratic_roots(a, b, c):
    """Real roots of a*x^2 + b*x + c = 0, sign-aware against cancellation.

    Returns a sorted tuple, or None when the discriminant is negative.
    """
    if a == 0.0:
        if b == 0.0:
            return None
        r = -c / b
        far = math.inf if b < 0 else -math.inf
        return (min(r, far), max(r, far))
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    qq = -0.5 * (b + math.copysign(sq, b))
    if qq == 0.0:
        r1 = r2 = -b / (2.0 * a)
    else:
        r1 = qq / a
        r2 = c / qq
    return (min(r1, r2), max(r1, r2))


def eigen(Jk: np.ndarray):
    """Eigen-decomposition of a real 2x2, eigenvalues sorted by real part.

    Returns (lambda_plus, lambda_minus, v_plus, v_minus) with unit-norm
    eigenvectors; complex eigenvalues come back as a conjugate pair.
    """
    a11, a12 = Jk[0]
    a21, a22 = Jk[1]
    tr = a11 + a22
    det = a11 * a22 - a12 * a21
    disc = tr * tr - 4.0 * det
    scale = max(np.abs(Jk).max() ** 2, 1e-300)
    if abs(disc) < DEGENERACY_RTOL * scale:
        raise DegenerateMatrixError(
            f"coincident eigenvalues (disc={disc:.3e}); eigenvectors undefined"
        )
    if disc > 0:
        sq = math.sqrt(disc)
        qq = -0.5 * (-tr + math.copysign(sq, -tr))
        r1 = qq
        r2 = det / qq if qq != 0.0 else 0.5 * tr
        lp, lm = (r1, r2) if r1 > r2 else (r2, r1)
        lp, lm = complex(lp), complex(lm)
    else:
        im = 0.5 * math.sqrt(-disc)
        lp = complex(0.5 * tr, im)
        lm = complex(0.5 * tr, -im)

    def vec(lam):
        cand1 = np.array([a12, lam - a11])
        cand2 = np.array([lam - a22, a21])
        v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        return v / np.linalg.norm(v)

    return lp, lm, vec(lp), vec(lm)


def non_normality(params: ModelParams, k2: float) -> float:
    """Eigenvector alignment measure delta(k2) in (0, 1].

    delta = |<v_plus_perp, v_minus>| for unit eigenvectors; 1 means the
    operator is normal, values near 0 mean nearly parallel eigenvectors
    and strong transient amplification.
    """
    J0, s = _coefficients(params)
    fu, fv = J0[0]
    gu, gv = J0[1]
    dd = fu - gv + k2 * (params.D_v - params.D_u)
    ee = fv + k2 * s
    num = abs(dd * dd + 4.0 * gu * ee)
    den = dd * dd + (gu + ee) ** 2
    if den == 0.0:
        raise DegenerateMatrixError("non-normality undefined: zero denominator")
    delta = math.sqrt(num / den)
    if delta == 0.0:
        raise DegenerateMatrixError("operator is defective (delta = 0)")
    return delta


@dataclass(frozen=True)
class DispersionPoint:
    k2: float
    h: float
    h_tilde: float
    lambda_plus: complex
    lambda_minus: complex
    delta: float
    unstable: bool
    reactive: bool


def dispersion_point(params: ModelParams, k2: float) -> DispersionPoint:
    h, h_tilde = h_values(params, k2)
    Jk = jk(params, k2)
    lp, lm, _, _ = eigen(Jk)
    delta = non_normality(params, k2)
    return DispersionPoint(
        k2=float(k2),
        h=h,
        h_tilde=h_tilde,
        lambda_plus=lp,
        lambda_minus=lm,
        delta=delta,
        unstable=h < 0.0,
        reactive=numerical_abscissa(Jk) > 0.0,
    )


@dataclass(frozen=True)
class TuringSummary:
    beta_c: float
    discriminant: float
    band_lo: Optional[float]
    band_hi: Optional[float]

    @property
    def band(self):
        return None if self.band_lo is None else (self.band_lo, self.band_hi)


def critical_beta(params: ModelParams) -> float:
    """Chemotactic sensitivity above which the stable kinetics are driven
    unstable by transport (the bifurcation curve in the (q, beta) plane)."""
    sqcq = math.sqrt(params.c * params.q)
    return (
        math.sqrt(params.q)
        / (params.k1 * math.sqrt(params.c))
        * (
            params.D_u * params.k2
            + params.D_v * params.k1
            + 2.0 * params.D_v * sqcq
            + math.sqrt(8.0 * params.D_u * params.D_v * params.k2 * sqcq)
        )
    )


def turing_summary(params: ModelParams) -> TuringSummary:
    """Critical beta, discriminant of h, and the unstable band when present."""
    if not kinetic_stability(jacobian0(params)):
        raise ParameterError("turing_summary requires stable kinetics")
    a, b, c = _h_poly(params)
    disc = b * b - 4.0 * a * c
    band_lo = band_hi = None
    if disc > 0.0 and b > 0.0:
        roots = _quadratic_roots(a, -b, c)
        band_lo, band_hi = roots
    return TuringSummary(
        beta_c=critical_beta(params),
        discriminant=float(disc),
        band_lo=band_lo,
        band_hi=band_hi,
    )


class ReactivityCase(Enum):
    CASE1 = "Case1"            # strong chemotaxis: |beta*l(u0)| > 2*sqrt(Du*Dv)
    CASE2 = "Case2"            # moderate chemotaxis, kinetics reactive
    CASE3 = "Case3"            # weak chemotaxis, finely balanced transport
    NOT_REACTIVE = "NotReactive"


@dataclass(frozen=True)
class ReactivityReport:
    case_id: ReactivityCase
    reactive_set: tuple          # up to two (lo, hi) intervals in k2, hi may be inf
    k_tilde_m: Optional[float]
    k_tilde_p: Optional[float]
    A: float
    A1: float
    A2: float
    A3: float

    def is_reactive_at(self, k2: float) -> bool:
        return any(lo < k2 < hi for lo, hi in self.reactive_set)


def classify_reactivity(params: ModelParams) -> ReactivityReport:
    """Three-case reactivity classification of J_k over all k2 > 0.

    The reactive set is exactly {k2 > 0 : h_tilde(k2) < 0}, assembled from
    the roots of the quadratic h_tilde.
    """
    J0, s = _coefficients(params)
    if not kinetic_stability(J0):
        raise ParameterError("classify_reactivity requires stable kinetics")
    fu, fv = J0[0]
    gu, gv = J0[1]
    A = params.D_u * gv + params.D_v * fu
    A1 = math.sqrt(params.D_u * params.D_v)
    A2 = math.sqrt(fu * gv - fv * gu)
    A3 = abs(fv - gu)

    at, bt, ct = _h_tilde_poly(params)
    roots = _quadratic_roots(at, -bt, ct)
    if roots is None:
        km = kp = None
    elif at < 0:
        # leading coefficient negative: the -sqrt(disc) root is the larger
        km, kp = roots[1], roots[0]
    else:
        km, kp = roots

    j0_react = j0_reactivity(J0)

    if abs(s) > 2.0 * A1:
        case = ReactivityCase.CASE1
        if roots is None:
            reactive = ((0.0, math.inf),)
        else:
            lo = min(max(0.0, km), max(0.0, kp))
            hi = max(max(0.0, km), max(0.0, kp))
            intervals = []
            if lo > 0.0:
                intervals.append((0.0, lo))
            intervals.append((hi, math.inf))
            reactive = tuple(intervals)
    elif j0_react:
        case = ReactivityCase.CASE2
        # ct < 0 guarantees one positive root; with at >= 0 it is kp
        reactive = ((0.0, kp if kp is not None else math.inf),)
    else:
        # Case 3 needs a positive discriminant and a negatively-signed but
        # not-too-negative transport balance A
        ok = (
            roots is not None
            and A < 0.0
            and math.sqrt(max(A1 * A1 - 0.25 * s * s, 0.0))
            * math.sqrt(max(4.0 * A2 * A2 - A3 * A3, 0.0))
            - 0.5 * (fv + gu) * s
            < A
        )
        if ok and km is not None and kp > max(km, 0.0):
            case = ReactivityCase.CASE3
            reactive = ((max(km, 0.0), kp),)
        else:
            case = ReactivityCase.NOT_REACTIVE
            reactive = ()

    return ReactivityReport(
        case_id=case,
        reactive_set=reactive,
        k_tilde_m=km,
        k_tilde_p=kp,
        A=A,
        A1=A1,
        A2=A2,
        A3=A3,
    )


def k_vertex(params: ModelParams) -> float:
    """Vertex of the parabola h(k2): the k2 where h is smallest."""
    a, b, c = _h_poly(params)
    return b / (2.0 * a)


def select_k2(params: ModelParams) -> Optional[float]:
    """Wavenumber selection for the transient analysis.

    Picks, within the reactive set, the k2 where h(k2) is closest to zero
    (longest return time).  Returns None when no reactive wavenumber
    exists.  Tie |k_min - kp| == |k_min - km| resolves to kp.
    """
    report = classify_reactivity(params)
    if report.case_id is ReactivityCase.NOT_REACTIVE:
        return None
    kmin = k_vertex(params)
    km, kp = report.k_tilde_m, report.k_tilde_p

    if report.case_id is ReactivityCase.CASE1:
        if km is None:  # negative discriminant: reactive everywhere
            return max(0.0, kmin)
        if kp > 0.0 and km > 0.0:
            lo, hi = min(kp, km), max(kp, km)
            if lo <= kmin <= hi:
                return kp if abs(kmin - kp) <= abs(kmin - km) else km
            return max(0.0, kmin)
        if kp < 0.0 and km > 0.0:
            return max(kmin, km)
        return max(0.0, kmin)
    if report.case_id is ReactivityCase.CASE2:
        return max(0.0, min(kmin, kp if kp is not None else math.inf))
    # Case 3
    return min(max(km, kp), max(kmin, km))
