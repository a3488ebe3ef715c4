"""Sweep of the (q, beta) plane at fixed transport/kinetic constants.

Each grid point is classified as Turing-unstable, stable-reactive, or
stable-nonreactive.  Stable-reactive points get the selected wavenumber,
the amplification estimate chi_star at that wavenumber, and the
return-time proxy log(1/h(k2)).
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .dispersion import (
    ReactivityCase,
    classify_reactivity,
    eigen,
    h_values,
    jk,
    non_normality,
    select_k2,
    turing_summary,
)
from .errors import ParameterError
from .model import ModelParams
from .transient import chi_estimate

# grid points this close to beta_c are labelled unstable, deterministically
BOUNDARY_TOL = 1e-9

# empirical markers for where stable reactive patterns were observed
DEFAULT_CHI_THRESHOLD = 1.5
DEFAULT_LOG_INV_H_THRESHOLD = 4.0


class Region(Enum):
    TURING_UNSTABLE = "TuringUnstable"
    STABLE_REACTIVE = "StableReactive"
    STABLE_NONREACTIVE = "StableNonReactive"


@dataclass(frozen=True)
class ScanRow:
    q: float
    beta: float
    region: Region
    k2_selected: Optional[float]
    chi_star: Optional[float]
    log_inv_h: Optional[float]
    flag_chi: bool
    flag_h: bool


@dataclass(frozen=True)
class ScanConfig:
    q_min: float
    q_max: float
    q_steps: int
    beta_min: float
    beta_max: float
    beta_steps: int
    fixed: ModelParams = field(default_factory=ModelParams)
    spacing: str = "linear"
    chi_threshold: float = DEFAULT_CHI_THRESHOLD
    log_inv_h_threshold: float = DEFAULT_LOG_INV_H_THRESHOLD

    def __post_init__(self):
        if self.q_steps < 2 or self.beta_steps < 2:
            raise ParameterError("steps must be at least 2")
        if not (self.q_min < self.q_max and self.beta_min < self.beta_max):
            raise ParameterError("range minimum must be below maximum")
        if self.spacing not in ("linear", "log"):
            raise ParameterError(f"unknown spacing {self.spacing!r}")

    def q_grid(self):
        return _axis(self.q_min, self.q_max, self.q_steps, self.spacing)

    def beta_grid(self):
        return _axis(self.beta_min, self.beta_max, self.beta_steps, self.spacing)


def _axis(lo, hi, n, spacing):
    if spacing == "log":
        if lo <= 0:
            raise ParameterError("log spacing requires positive bounds")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def classify_point(
    q: float,
    beta: float,
    fixed: ModelParams,
    chi_threshold: float = DEFAULT_CHI_THRESHOLD,
    log_inv_h_threshold: float = DEFAULT_LOG_INV_H_THRESHOLD,
) -> ScanRow:
    """Classify one (q, beta) point and attach the transient indicators."""
    params = fixed.with_(q=q, beta=beta)
    ts = turing_summary(params)
    if beta >= ts.beta_c - BOUNDARY_TOL:
        return ScanRow(q, beta, Region.TURING_UNSTABLE, None, None, None, False, False)

    report = classify_reactivity(params)
    if report.case_id is ReactivityCase.NOT_REACTIVE:
        return ScanRow(
            q, beta, Region.STABLE_NONREACTIVE, None, None, None, False, False
        )

    k2 = select_k2(params)
    h, _ = h_values(params, k2)
    Jk = jk(params, k2)
    lp, lm, _, _ = eigen(Jk)
    delta = non_normality(params, k2)
    chi_star, _ = chi_estimate(lp, lm, delta)
    log_inv_h = math.log(1.0 / h) if h > 0 else None
    return ScanRow(
        q=q,
        beta=beta,
        region=Region.STABLE_REACTIVE,
        k2_selected=k2,
        chi_star=chi_star,
        log_inv_h=log_inv_h,
        flag_chi=chi_star > chi_threshold,
        flag_h=log_inv_h is not None and log_inv_h > log_inv_h_threshold,
    )


def _classify_args(args):
    return classify_point(*args)


def scan(config: ScanConfig, workers: Optional[int] = None) -> list[ScanRow]:
    """Row-major classification of the whole grid.

    Output is deterministic and identical for any worker count: points are
    mapped in index order and reassembled positionally.
    """
    if workers is None:
        workers = int(os.environ.get("REACTLAB_THREADS", "1"))
    points = [
        (float(q), float(b), config.fixed, config.chi_threshold, config.log_inv_h_threshold)
        for q in config.q_grid()
        for b in config.beta_grid()
    ]
    if workers <= 1:
        return [_classify_args(p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_classify_args, points, chunksize=64))


def region_counts(rows) -> dict:
    counts = {region: 0 for region in Region}
    for row in rows:
        counts[row.region] += 1
    return {region.value: n for region, n in counts.items()}
