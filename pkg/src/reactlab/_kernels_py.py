"""Pure-numpy implementations of the per-step stencil kernels.

The conservative chemotactic divergence div(l(u) grad v) is the hot spot
of the time stepper; a compiled twin lives in `_kernels.pyx`.  Face values
of the density use the arithmetic mean, gradients the central face
difference, so the discrete flux telescopes and total mass is conserved
exactly (up to roundoff) under both boundary conditions.
"""

import numpy as np

BACKEND = "python"


def chemo_div_1d(u, v, hx, periodic):
    """Divergence of (u * dv/dx) on a 1D grid; zero-flux faces for Neumann."""
    n = u.shape[0]
    flux = np.zeros(n + 1)
    uf = 0.5 * (u[:-1] + u[1:])
    flux[1:n] = uf * (v[1:] - v[:-1]) / hx
    if periodic:
        wrap = 0.5 * (u[-1] + u[0]) * (v[0] - v[-1]) / hx
        flux[0] = wrap
        flux[n] = wrap
    return (flux[1:] - flux[:-1]) / hx


def chemo_div_2d(u, v, hx, periodic):
    """Divergence of (u * grad v) on a 2D grid; zero-flux faces for Neumann."""
    n, m = u.shape
    fx = np.zeros((n + 1, m))
    fy = np.zeros((n, m + 1))
    fx[1:n, :] = 0.5 * (u[:-1, :] + u[1:, :]) * (v[1:, :] - v[:-1, :]) / hx
    fy[:, 1:m] = 0.5 * (u[:, :-1] + u[:, 1:]) * (v[:, 1:] - v[:, :-1]) / hx
    if periodic:
        wrapx = 0.5 * (u[-1, :] + u[0, :]) * (v[0, :] - v[-1, :]) / hx
        fx[0, :] = wrapx
        fx[n, :] = wrapx
        wrapy = 0.5 * (u[:, -1] + u[:, 0]) * (v[:, 0] - v[:, -1]) / hx
        fy[:, 0] = wrapy
        fy[:, m] = wrapy
    return (fx[1:, :] - fx[:-1, :]) / hx + (fy[:, 1:] - fy[:, :-1]) / hx


def reaction_terms(u, v, k1, k2, q, c):
    """MOMOS kinetics (f, g) evaluated pointwise."""
    f = -k1 * u - q * u * u + k2 * v
    g = k1 * u - k2 * v + c
    return f, g
