"""Transient amplification of stable 2x2 operators.

rho(t) = ||exp(M t)|| in the spectral norm, its analytic estimate chi(t)
built from the eigenvalues and the non-normality measure, the
epsilon-pseudospectral abscissa, and the Kreiss constant.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateMatrixError, ParameterError
from .model import numerical_abscissa

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value of a real 2x2, closed form."""
    a, b = M[0]
    c, d = M[1]
    s1 = math.hypot(a - d, b + c)
    s2 = math.hypot(a + d, b - c)
    return 0.5 * (s1 + s2)


def _eig2(M):
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        sq = math.sqrt(disc)
        return complex(0.5 * (tr + sq)), complex(0.5 * (tr - sq))
    im = 0.5 * math.sqrt(-disc)
    return complex(0.5 * tr, im), complex(0.5 * tr, -im)


def _expm_closed(M: np.ndarray, t: float) -> np.ndarray:
    """exp(M t) from the 2x2 spectral decomposition.

    With m = tr/2 and N = M - m*I (traceless, N^2 = (m^2 - det)*I):
    exp(Mt) = e^{mt} (cosh(wt) I + sinh(wt)/w N), w^2 = m^2 - det,
    with cosh/sinh turning into cos/sin when w^2 < 0.
    """
    m = 0.5 * (M[0, 0] + M[1, 1])
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    w2 = m * m - det
    N = M - m * np.eye(2)
    if w2 > 0:
        # overflow-safe: work with the eigen-exponentials themselves
        w = math.sqrt(w2)
        e_plus = math.exp((m + w) * t)
        e_minus = math.exp((m - w) * t)
        ch = 0.5 * (e_plus + e_minus)
        sh = 0.5 * (e_plus - e_minus) / w
    elif w2 < 0:
        omega = math.sqrt(-w2)
        emt = math.exp(m * t)
        ch = emt * math.cos(omega * t)
        sh = emt * math.sin(omega * t) / omega
    else:
        emt = math.exp(m * t)
        ch, sh = emt, emt * t
    return ch * np.eye(2) + sh * N


# degree-6 diagonal Pade coefficients of exp
_PADE6 = [1.0, 1 / 2, 5 / 44, 1 / 66, 1 / 792, 1 / 15840, 1 / 665280]


def _expm_pade6(M: np.ndarray, t: float) -> np.ndarray:
    """exp(M t) by scaling-and-squaring with a [6/6] Pade approximant."""
    A = M * t
    nrm = spectral_norm(A)
    s = max(0, int(math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0)
    A = A / (2.0**s)
    A2 = A @ A
    U = _PADE6[1] * np.eye(2) + _PADE6[3] * A2 + _PADE6[5] * A2 @ A2
    U = A @ U
    V = _PADE6[0] * np.eye(2) + _PADE6[2] * A2 + _PADE6[4] * A2 @ A2
    V = V + _PADE6[6] * A2 @ A2 @ A2
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def matrix_exponential(M: np.ndarray, t: float) -> np.ndarray:
    """exp(M t); closed form away from the defective regime, Pade
    scaling-and-squaring near it."""
    if t < 0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = tr * tr - 4.0 * det
    scale = max(np.abs(M).max() ** 2, 1e-300)
    if abs(disc) >= 1e-8 * scale:
        return _expm_closed(M, t)
    return _expm_pade6(M, t)


def rho(M: np.ndarray, t) -> float:
    """Amplification envelope ||exp(M t)|| (vectorized over t)."""
    if np.ndim(t) == 0:
        return spectral_norm(matrix_exponential(M, float(t)))
    return np.array([spectral_norm(matrix_exponential(M, float(ti))) for ti in t])


def chi_estimate(lambda_plus, lambda_minus, delta: float):
    """Closed-form estimate (chi_star, t_star) of the envelope peak.

    Real branch (lambda_- < lambda_+ < 0):
        chi* = delta^-1 (l-/l+)^(l+/S) (1 - l+/l-),  t* = ln(l-/l+)/S,
    with S = l+ - l-.  Complex branch: t* = arctan(-Im/Re)/Im and chi* is
    the envelope 2 delta^-1 e^{Re l t} |sin(Im l t)| at t*.
    """
    lp, lm = complex(lambda_plus), complex(lambda_minus)
    # normal operators give delta = 1 up to roundoff; absorb the overshoot
    if 1.0 < delta <= 1.0 + 1e-12:
        delta = 1.0
    if not (0.0 < delta <= 1.0):
        raise ParameterError(f"delta must be in (0, 1], got {delta}")
    if lp.real >= 0.0:
        raise ParameterError("chi_estimate requires a stable operator")
    if lp == lm or lp == 0:
        raise DegenerateMatrixError("chi estimate undefined for coincident eigenvalues")
    if abs(lp.imag) < 1e-300:  # real pair
        lp_r, lm_r = lp.real, lm.real
        sigma = lp_r - lm_r
        ratio = lm_r / lp_r
        t_star = math.log(ratio) / sigma
        chi_star = (ratio ** (lp_r / sigma)) * (1.0 - lp_r / lm_r) / delta
        return chi_star, t_star
    im = abs(lp.imag)
    re = lp.real
    t_star = math.atan(-im / re) / im
    chi_star = 2.0 / delta * math.exp(re * t_star) * abs(math.sin(im * t_star))
    return chi_star, t_star


def chi_curve(lambda_plus, lambda_minus, delta: float, times) -> np.ndarray:
    """chi(t) sampled on `times` (analytic approximation of rho(t))."""
    lp, lm = complex(lambda_plus), complex(lambda_minus)
    times = np.asarray(times, dtype=float)
    if abs(lp.imag) < 1e-300:
        return (np.exp(lp.real * times) - np.exp(lm.real * times)) / delta
    im, re = abs(lp.imag), lp.real
    return np.exp(re * times) * ((1.0 - np.exp(-2.0 * delta * im * times)) / delta + 1.0)


def _eigvec_condition(M) -> float:
    """2-norm condition number of the eigenvector matrix."""
    lp, lm = _eig2(M)
    V = np.empty((2, 2), dtype=complex)
    for j, lam in enumerate((lp, lm)):
        cand1 = np.array([M[0, 1], lam - M[0, 0]])
        cand2 = np.array([lam - M[1, 1], M[1, 0]])
        v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        V[:, j] = v / np.linalg.norm(v)
    s = np.linalg.svd(V, compute_uv=False)
    return float(s[0] / s[-1])


def _golden_max(f, lo, hi, rtol):
    """Golden-section maximization on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > rtol * max(abs(a), abs(b), 1e-300):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class EnvelopeSeries:
    times: np.ndarray
    values: np.ndarray       # rho(t)
    chi_values: np.ndarray


@dataclass(frozen=True)
class EnvelopeSummary:
    max_rho: float
    t_at_max: float
    return_time: Optional[float]
    chi_star: float
    t_star: float
    kreiss: float
    truncated: bool = False


def amplification_envelope(
    M: np.ndarray,
    t_max: Optional[float] = None,
    n: int = 256,
    delta: Optional[float] = None,
    with_kreiss: bool = True,
):
    """Sample rho(t) = ||exp(Mt)|| and locate its peak and return time.

    The grid is log-spaced near zero and linear after; the peak is refined
    by golden section and the return time (first t past the peak with
    rho(t) <= 1) by bisection.  `delta` may be passed to avoid recomputing
    the non-normality measure; otherwise it is derived from eigenvectors.
    """
    if n < 64:
        raise ParameterError(f"n must be at least 64, got {n}")
    lp, lm = _eig2(M)
    if lp.real >= 0.0:
        raise ParameterError("envelope unbounded: operator is not stable")
    if t_max is None:
        t_max = 10.0 / abs(lp.real)
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max}")

    if delta is None:
        if lp == lm:
            raise DegenerateMatrixError("defective operator")
        vs = []
        for lam in (lp, lm):
            cand1 = np.array([M[0, 1], lam - M[0, 0]])
            cand2 = np.array([lam - M[1, 1], M[1, 0]])
            v = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
            vs.append(v / np.linalg.norm(v))
        perp = np.array([-np.conj(vs[0][1]), np.conj(vs[0][0])])
        delta = float(abs(perp @ vs[1]))

    t_log_hi = min(1.0, 0.5 * t_max)
    grid = np.concatenate(
        [
            [0.0],
            np.geomspace(1e-4 * t_log_hi, t_log_hi, 64),
            np.linspace(t_log_hi, t_max, max(n - 64, 64))[1:],
        ]
    )
    vals = rho(M, grid)

    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if hi > lo:
        t_at_max, max_rho = _golden_max(lambda t: rho(M, t), lo, hi, 1e-4)
    else:
        t_at_max, max_rho = grid[i], vals[i]
    if max_rho < 1.0:  # rho(0) = 1 exactly
        t_at_max, max_rho = 0.0, 1.0

    truncated = False
    return_time = None
    if max_rho > 1.0 + 1e-12:
        if rho(M, t_max) > 1.0:
            truncated = True
        else:
            a, b = t_at_max, t_max
            # bisection on rho(t) - 1
            while (b - a) > 1e-4 * max(b, 1e-300):
                mid = 0.5 * (a + b)
                if rho(M, mid) > 1.0:
                    a = mid
                else:
                    b = mid
            return_time = 0.5 * (a + b)

    chi_star, t_star = chi_estimate(lp, lm, delta)
    kreiss = kreiss_constant(M) if with_kreiss else float("nan")

    series = EnvelopeSeries(
        times=grid, values=np.asarray(vals), chi_values=chi_curve(lp, lm, delta, grid)
    )
    summary = EnvelopeSummary(
        max_rho=float(max_rho),
        t_at_max=float(t_at_max),
        return_time=return_time,
        chi_star=float(chi_star),
        t_star=float(t_star),
        kreiss=kreiss,
        truncated=truncated,
    )
    return series, summary


def _smin_line(M: np.ndarray, x: float, ys: np.ndarray) -> np.ndarray:
    """Smallest singular value of (x + i y) I - M for each y (vectorized)."""
    a, b = M[0]
    c, d = M[1]
    z11 = (x - a) + 1j * ys
    z22 = (x - d) + 1j * ys
    fro2 = np.abs(z11) ** 2 + np.abs(z22) ** 2 + b * b + c * c
    det = np.abs(z11 * z22 - b * c)
    smax2 = 0.5 * (fro2 + np.sqrt(np.maximum(fro2 * fro2 - 4.0 * det * det, 0.0)))
    smax = np.sqrt(smax2)
    return np.where(smax > 0, det / np.maximum(smax, 1e-300), 0.0)


def _min_smin(M: np.ndarray, x: float, y_max: float) -> float:
    """min over y of s_min((x+iy)I - M) by iterative grid zooming.

    For a real M the pseudospectrum is symmetric in y, so y >= 0 suffices;
    three zoom rounds resolve the (locally quadratic) minimum far below
    the bisection tolerance on x.
    """
    lo, hi = 0.0, y_max
    best = math.inf
    for _ in range(3):
        ys = np.linspace(lo, hi, 129)
        vals = _smin_line(M, x, ys)
        i = int(np.argmin(vals))
        best = min(best, float(vals[i]))
        lo = ys[max(i - 2, 0)]
        hi = ys[min(i + 2, len(ys) - 1)]
    return best


def pseudo_abscissa(M: np.ndarray, epsilon: float) -> float:
    """epsilon-pseudospectral abscissa: max{Re z : s_min(zI - M) <= epsilon}.

    Bisection on the real part; for each real part the resolvent norm is
    maximized over the imaginary axis.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    lp, _ = _eig2(M)
    if lp.real >= 0:
        raise ParameterError("pseudo_abscissa requires a stable operator")
    y_max = spectral_norm(M) + 10.0 * epsilon
    x_lo = lp.real                      # s_min vanishes at the eigenvalue
    x_hi = numerical_abscissa(M) + epsilon + 1e-9
    # s_min(zI - M) >= Re z - numerical_abscissa, so g(x_hi) > epsilon
    while (x_hi - x_lo) > 1e-7:
        x = 0.5 * (x_lo + x_hi)
        if _min_smin(M, x, y_max) <= epsilon:
            x_lo = x
        else:
            x_hi = x
    return 0.5 * (x_lo + x_hi)


def kreiss_constant(M: np.ndarray, eps_lo: float = 1e-6, eps_hi: float = 1.0) -> float:
    """Kreiss constant estimate: sup over epsilon of alpha_eps / epsilon.

    Coarse scan over log epsilon followed by golden-section refinement.
    Clamped below by 1 (rho(0) = 1 for every operator)."""
    lp, _ = _eig2(M)
    if lp.real >= 0:
        raise ParameterError("kreiss_constant requires a stable operator")

    def ratio(log_eps):
        eps = math.exp(log_eps)
        return pseudo_abscissa(M, eps) / eps

    us = np.linspace(math.log(eps_lo), math.log(eps_hi), 13)
    vals = [ratio(u) for u in us]
    i = int(np.argmax(vals))
    lo = us[max(i - 1, 0)]
    hi = us[min(i + 1, len(us) - 1)]
    _, best = _golden_max(ratio, lo, hi, 1e-4)
    return max(float(best), 1.0)
