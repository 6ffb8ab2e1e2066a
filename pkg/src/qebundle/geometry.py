"""Reconstruction of the t-parameterization of the metric.

The s-coordinate was chosen so that ds = f dt with f = sqrt(alpha);
inverting,

    t(s) = int_0^s dr / sqrt(alpha(r)).

alpha vanishes linearly at a collapsing end (alpha ~ 2s near s = 0,
alpha ~ 2(s_* - s) near s_*), so 1/sqrt(alpha) has integrable
1/sqrt(r) singularities there. The end segments are integrated under
the substitution r = w^2 (resp. r = s_* - w^2), which removes the
singularity exactly; interior segments use fixed high-order
Gauss-Legendre panels on the smooth integrand. The result is the
metric profile in the original coordinates:

    g = dt^2 + f^2(t) theta x theta + sum_i g_i^2(t) h_i,
    f = sqrt(alpha), g_i = sqrt(beta_i), v = phi,

with potential u = -m log(v) (conventional dictionary v = e^(-u/m);
the export layer flags this convention explicitly).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import closedform as cf
from . import solver as sv
from .errors import NonPositiveAlphaError
from .spec import BundleSpec

# 12-point Gauss-Legendre nodes/weights on [-1, 1]; panel-exact for
# polynomial degree 23, far beyond what the smooth 1/sqrt(alpha)
# segments need at the default grid resolution.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


@dataclass
class MetricProfile:
    """Sampled metric functions over matched s- and t-grids.

    Arrays share one index: (s[k], t[k]) are the same point, with
    f = sqrt(alpha), g[k, i] = sqrt(beta_i), v = phi, u = -m log v.
    t[0] = 0 and total_length_l = t[-1] is the t-length of the
    interval.
    """

    s: np.ndarray
    t: np.ndarray
    f: np.ndarray
    g: np.ndarray
    v: np.ndarray
    u: np.ndarray
    total_length_l: float


def _panel(func, lo, hi):
    """Gauss-Legendre panel of func over [lo, hi]."""
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return half * float(np.sum(_GL_WEIGHTS * func(mid + half * _GL_NODES)))


def reconstruct_t(
    params: cf.SolutionParams,
    spec: BundleSpec,
    config: sv.SolverConfig = None,
    grid_size: int = 513,
) -> MetricProfile:
    """Rebuild the t-grid and metric functions on a uniform s-grid.

    Raises
    ------
    NonPositiveAlphaError
        If alpha <= 0 at an interior node (the profile was not
        certified, or params are not at a defect root).
    """
    config = config or sv.SolverConfig()
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    s_star = params.s_star
    s = np.linspace(0.0, s_star, grid_size)

    a = sv.alpha(s, params, spec, config)
    a_scale = float(np.max(np.abs(a)))
    # Endpoint alphas are zero up to solver tolerance; clamp only those.
    for k in (0, grid_size - 1):
        if a[k] < 0.0:
            if abs(a[k]) > 1e-8 * max(1.0, a_scale):
                raise NonPositiveAlphaError(
                    f"alpha({s[k]:.6g}) = {a[k]:.3e} < 0 at an endpoint beyond tolerance"
                )
            a[k] = 0.0
    interior_bad = np.where(a[1:-1] <= 0.0)[0]
    if interior_bad.size:
        k = int(interior_bad[0]) + 1
        raise NonPositiveAlphaError(f"alpha({s[k]:.6g}) = {a[k]:.3e} <= 0 at an interior node")

    def inv_f(r):
        return 1.0 / np.sqrt(sv.alpha(r, params, spec, config))

    dt = np.zeros(grid_size)
    # Left end segment [0, s_1]: r = s_1 w^2 turns the integrand into
    # 2 s_1 w / sqrt(alpha(s_1 w^2)), smooth at w = 0 since alpha ~ 2r.
    s1 = s[1]
    dt[1] = _panel(lambda w: 2.0 * s1 * w / np.sqrt(sv.alpha(s1 * w * w, params, spec, config)), 0.0, 1.0)
    for k in range(2, grid_size - 1):
        dt[k] = _panel(inv_f, s[k - 1], s[k])
    # Right end segment [s_{N-2}, s_*]: r = s_* - d w^2, d = s_* - s_{N-2}.
    d_end = s_star - s[grid_size - 2]
    dt[grid_size - 1] = _panel(
        lambda w: 2.0 * d_end * w / np.sqrt(sv.alpha(s_star - d_end * w * w, params, spec, config)),
        0.0,
        1.0,
    )
    t = np.cumsum(dt)

    beta_mat = np.column_stack([cf.beta(i, s, params, spec) for i in range(spec.r)])
    b_scale = float(np.max(np.abs(beta_mat)))
    neg = beta_mat < 0.0
    if np.any(np.abs(beta_mat[neg]) > 1e-12 * max(1.0, b_scale)):
        raise NonPositiveAlphaError("beta < 0 beyond roundoff on the grid; profile invalid")
    beta_mat[neg] = 0.0

    v = cf.phi(s, params)
    return MetricProfile(
        s=s,
        t=t,
        f=np.sqrt(a),
        g=np.sqrt(beta_mat),
        v=v,
        u=-spec.m * np.log(v),
        total_length_l=float(t[-1]),
    )
