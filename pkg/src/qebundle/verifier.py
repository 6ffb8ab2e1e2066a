"""Independent certification of a solved profile.

The ground truth is the s-coordinate system (the one the construction
actually solves):

    (I)   (1/2)a'' + (1/2)a'L' + a sum_i n_i(b_i''/b_i - (1/2)(b_i'/b_i)^2)
          + m (a phi''/phi + a'phi'/(2 phi)) = eps/2
    (II)  (1/2)a'' + (1/2)a'L' - a sum_i n_i q_i^2/(2 b_i^2)
          + m a'phi'/(2 phi) = eps/2
    (III) (1/2)a'b_i'/b_i + (1/2)a(b_i''/b_i - (b_i'/b_i)^2)
          + (1/2)a b_i' L'/b_i - p_i/b_i + q_i^2 a/(2 b_i^2)
          + (m/2) a b_i'phi'/(b_i phi) = eps/2       (one per factor)
    (IV)  phi(phi''a + phi'a'/2) + phi phi'(a'/2 + L'a)
          + (m-1)(phi')^2 a - (eps/2) phi^2 = mu     (first integral)

written with a = alpha, b_i = beta_i, L' = (log V)'. The verifier
evaluates all residuals on a Chebyshev-clustered interior grid, checks
the first integral against its constant mu = E kappa1^2, the quadratic
ansatz per factor, both endpoint quadratics, the boundary conditions
(values directly, slopes by Richardson extrapolation — the outgoing
slope -2 at s_* is emergent, never imposed), positivity, the leftover
defect, and cross-checks every analytic derivative against central
differences.

A profile is *certified* when every named check passes its tolerance.
Tolerances are tiered by the weakest numerical ingredient of each
check: algebraic identities at 1e-12, quadrature-backed residuals at
1e-8, extrapolation/finite-difference checks at 1e-6 (and 1e-4 for the
t-coordinate spot check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import closedform as cf
from . import solver as sv
from .errors import PositivityError
from .geometry import reconstruct_t
from .spec import BundleSpec, EndpointType


@dataclass(frozen=True)
class ProfileSample:
    """All profile values entering the residuals, at one s."""

    s: float
    alpha: float
    alpha_prime: float
    alpha_second: float
    beta: tuple
    beta_prime: tuple
    beta_second: tuple
    phi: float
    phi_prime: float
    V: float
    logV_prime: float
    logV_second: float


@dataclass
class ResidualReport:
    """Everything verify() measures, plus the pass/fail verdicts.

    checks maps a check name to {"value", "tol", "passed"}; certified
    is the conjunction of all passed flags.
    """

    grid: np.ndarray
    res_25: np.ndarray
    res_26: np.ndarray
    res_27: np.ndarray
    mu_samples: np.ndarray
    mu_dev: float
    ansatz_res: np.ndarray
    boundary: dict
    positivity_ok: bool
    positivity_violation: object
    fd_check: float
    checks: dict
    certified: bool


def sample_at(s: float, params: cf.SolutionParams, spec: BundleSpec, config=None) -> ProfileSample:
    """Evaluate every profile quantity at one interior point."""
    config = config or sv.SolverConfig()
    s = float(s)
    return ProfileSample(
        s=s,
        alpha=sv.alpha(s, params, spec, config),
        alpha_prime=sv.alpha_prime(s, params, spec, config),
        alpha_second=sv.alpha_second(s, params, spec, config),
        beta=tuple(cf.beta(i, s, params, spec) for i in range(spec.r)),
        beta_prime=tuple(cf.beta_prime(i, s, params, spec) for i in range(spec.r)),
        beta_second=tuple(cf.beta_second(i, s, params, spec) for i in range(spec.r)),
        phi=cf.phi(s, params),
        phi_prime=cf.phi_prime(s, params),
        V=cf.V(s, params, spec),
        logV_prime=cf.logV_prime(s, params, spec),
        logV_second=cf.logV_second(s, params, spec),
    )


def residual_25(sample: ProfileSample, spec: BundleSpec) -> float:
    """Residual of equation (I); phi'' = 0 for the linear phi."""
    ansum = 0.0
    for i, fac in enumerate(spec.factors):
        b, bp, bpp = sample.beta[i], sample.beta_prime[i], sample.beta_second[i]
        ansum += fac.n * (bpp / b - 0.5 * (bp / b) ** 2)
    return (
        0.5 * sample.alpha_second
        + 0.5 * sample.alpha_prime * sample.logV_prime
        + sample.alpha * ansum
        + spec.m * sample.alpha_prime * sample.phi_prime / (2.0 * sample.phi)
        - 0.5 * spec.epsilon
    )


def residual_26(sample: ProfileSample, spec: BundleSpec) -> float:
    """Residual of equation (II)."""
    qsum = 0.0
    for i, fac in enumerate(spec.factors):
        qsum += fac.n * fac.q**2 / (2.0 * sample.beta[i] ** 2)
    return (
        0.5 * sample.alpha_second
        + 0.5 * sample.alpha_prime * sample.logV_prime
        - sample.alpha * qsum
        + spec.m * sample.alpha_prime * sample.phi_prime / (2.0 * sample.phi)
        - 0.5 * spec.epsilon
    )


def residual_27(sample: ProfileSample, i: int, spec: BundleSpec) -> float:
    """Residual of equation (III) for factor i."""
    fac = spec.factors[i]
    b, bp, bpp = sample.beta[i], sample.beta_prime[i], sample.beta_second[i]
    return (
        0.5 * sample.alpha_prime * bp / b
        + 0.5 * sample.alpha * (bpp / b - (bp / b) ** 2)
        + 0.5 * sample.alpha * bp * sample.logV_prime / b
        - fac.p / b
        + fac.q**2 * sample.alpha / (2.0 * b * b)
        + 0.5 * spec.m * sample.alpha * bp * sample.phi_prime / (b * sample.phi)
        - 0.5 * spec.epsilon
    )


def mu_of_s(sample: ProfileSample, spec: BundleSpec) -> float:
    """LHS of the first integral (IV); constant = mu on exact solutions."""
    return (
        sample.phi * sample.phi_prime * sample.alpha_prime / 2.0
        + sample.phi
        * sample.phi_prime
        * (sample.alpha_prime / 2.0 + sample.logV_prime * sample.alpha)
        + (spec.m - 1.0) * sample.phi_prime**2 * sample.alpha
        - 0.5 * spec.epsilon * sample.phi**2
    )


def ansatz_residual(sample: ProfileSample, i: int, spec: BundleSpec) -> float:
    """b''/b - (1/2)(b'/b)^2 + q^2/(2 b^2) for factor i (identically 0)."""
    fac = spec.factors[i]
    b, bp, bpp = sample.beta[i], sample.beta_prime[i], sample.beta_second[i]
    return bpp / b - 0.5 * (bp / b) ** 2 + fac.q**2 / (2.0 * b * b)


def _ansatz_scale(sample: ProfileSample, i: int, spec: BundleSpec) -> float:
    """Magnitude of the largest term in the ansatz (all carry 1/b^2)."""
    fac = spec.factors[i]
    b, bp, bpp = sample.beta[i], sample.beta_prime[i], sample.beta_second[i]
    return max(abs(bpp / b), 0.5 * (bp / b) ** 2, fac.q**2 / (2.0 * b * b))


def chebyshev_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n Chebyshev-clustered points on (lo, hi), ascending, endpoint-free."""
    theta = np.pi * (2.0 * np.arange(n) + 1.0) / (2.0 * n)
    return lo + (hi - lo) * 0.5 * (1.0 - np.cos(theta))


# Tolerance tiers (see module docstring).
TOL_ALGEBRAIC = 1e-12
TOL_RESIDUAL = 1e-8
TOL_SLOPE = 1e-6
TOL_FD = 1e-6
TOL_ALPHA_END = 1e-10
TOL_T_SYSTEM = 1e-4


def verify(
    profile: sv.SolvedProfile,
    spec: BundleSpec,
    grid_size: int = 201,
    delta_frac: float = 1e-3,
    config: sv.SolverConfig = None,
) -> ResidualReport:
    """Certify a solved profile against every check it must satisfy.

    Parameters
    ----------
    profile : SolvedProfile
        Output of solver.solve (or deserialized equivalent).
    grid_size : int
        Number of Chebyshev-clustered interior residual samples (>= 16).
    delta_frac : float
        Interior margin as a fraction of s_*; the grid spans
        [delta, s_* - delta], 0 < delta_frac < 0.1.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    if not (0.0 < delta_frac < 0.1):
        raise ValueError("delta_frac must lie in (0, 0.1)")
    config = config or sv.SolverConfig()
    params = profile.params
    s_star = params.s_star
    delta = delta_frac * s_star

    # Some beta <= 0 makes log V (hence every residual) undefined on the
    # grid: that profile cannot be measured, only rejected. alpha <= 0,
    # by contrast, is recorded in the report below.
    beta_ok, beta_violation = cf.positivity_check(params, spec)
    if not beta_ok:
        raise PositivityError(
            f"beta_{beta_violation['factor']} = {beta_violation['value']:.3e} <= 0 "
            f"at s = {beta_violation['s']:.6g}; residuals undefined",
            s=beta_violation["s"],
            factor=beta_violation["factor"],
        )

    grid = chebyshev_grid(delta, s_star - delta, grid_size)
    samples = [sample_at(s, params, spec, config) for s in grid]

    res25 = np.array([residual_25(sm, spec) for sm in samples])
    res26 = np.array([residual_26(sm, spec) for sm in samples])
    res27 = np.array([[residual_27(sm, i, spec) for i in range(spec.r)] for sm in samples])
    mu_s = np.array([mu_of_s(sm, spec) for sm in samples])
    ansatz = np.array(
        [[ansatz_residual(sm, i, spec) for i in range(spec.r)] for sm in samples]
    )
    ansatz_scaled = np.array(
        [
            [abs(ansatz[j, i]) / _ansatz_scale(sm, i, spec) for i in range(spec.r)]
            for j, sm in enumerate(samples)
        ]
    )
    mu_dev = float(np.max(np.abs(mu_s - params.mu)) / max(1.0, abs(params.mu)))

    # Boundary values and slopes. alpha(s_*) under a right blowdown is
    # the extrapolated one-sided limit (V(s_*) = 0 there).
    alpha_at_0 = sv.alpha(0.0, params, spec, config)
    alpha_at_sstar = sv.alpha(s_star, params, spec, config)
    slope0, slope_end = sv.boundary_slopes(params, spec, config)
    boundary = {
        "alpha_at_0": float(alpha_at_0),
        "alpha_at_sstar": float(alpha_at_sstar),
        "slope_at_0_minus_2": float(slope0 - 2.0),
        "slope_at_sstar_plus_2": float(slope_end + 2.0),
    }
    if spec.left is EndpointType.BLOWDOWN:
        boundary["beta_left_at_0"] = cf.beta(0, 0.0, params, spec)
        boundary["beta_left_slope_minus_1"] = cf.beta_prime(0, 0.0, params, spec) - 1.0
    if spec.right is EndpointType.BLOWDOWN:
        boundary["beta_right_at_sstar"] = cf.beta(spec.r - 1, s_star, params, spec)
        boundary["beta_right_slope_plus_1"] = cf.beta_prime(spec.r - 1, s_star, params, spec) + 1.0

    # Endpoint quadratic residuals (exact algebraic identities).
    qL = 0.5 * params.kappa0**2 + 2.0 * (spec.n_left + 1) * params.kappa0 - params.E
    xR = -(s_star + params.kappa0)
    qR = 0.5 * xR**2 + 2.0 * (spec.n_right + 1) * xR - params.E

    # Positivity of alpha on the grid (betas were vetted above).
    positivity_ok, violation = True, None
    alpha_grid = np.array([sm.alpha for sm in samples])
    if np.any(alpha_grid <= 0.0):
        bad = int(np.argmax(alpha_grid <= 0.0))
        positivity_ok = False
        violation = {"factor": None, "s": float(grid[bad]), "value": float(alpha_grid[bad])}

    # Finite-difference cross-checks at h = 1e-6 s_* on 10 interior points.
    h = 1e-6 * s_star
    fd_points = np.linspace(0.1 * s_star, 0.9 * s_star, 10)
    fd_worst = 0.0
    for s in fd_points:
        s = float(s)
        fd_a1 = (sv.alpha(s + h, params, spec, config) - sv.alpha(s - h, params, spec, config)) / (2 * h)
        fd_a2 = (
            sv.alpha_prime(s + h, params, spec, config)
            - sv.alpha_prime(s - h, params, spec, config)
        ) / (2 * h)
        fd_l1 = (
            np.log(cf.V(s + h, params, spec)) - np.log(cf.V(s - h, params, spec))
        ) / (2 * h)
        fd_l2 = (
            cf.logV_prime(s + h, params, spec) - cf.logV_prime(s - h, params, spec)
        ) / (2 * h)
        fd_worst = max(
            fd_worst,
            abs(fd_a1 - sv.alpha_prime(s, params, spec, config)),
            abs(fd_a2 - sv.alpha_second(s, params, spec, config)),
            abs(fd_l1 - cf.logV_prime(s, params, spec))
            / max(1.0, abs(cf.logV_prime(s, params, spec))),
            abs(fd_l2 - cf.logV_second(s, params, spec))
            / max(1.0, abs(cf.logV_second(s, params, spec))),
        )

    # Leftover defect, against its natural scale.
    defect = sv._integrate(params, spec, config, 0.0, s_star)
    dscale = sv.defect_scale(params, spec, config)

    alpha_max = float(np.max(np.abs(alpha_grid)))
    checks = {}

    def check(name, value, tol):
        checks[name] = {"value": float(value), "tol": float(tol), "passed": bool(abs(value) <= tol)}

    check("res25_max", np.max(np.abs(res25)), TOL_RESIDUAL)
    check("res26_max", np.max(np.abs(res26)), TOL_RESIDUAL)
    check("res27_max", np.max(np.abs(res27)), TOL_RESIDUAL)
    check("mu_dev", mu_dev, TOL_RESIDUAL)
    check("ansatz_max", np.max(ansatz_scaled), TOL_ALGEBRAIC)
    check("left_quadratic", qL, TOL_ALGEBRAIC * max(1.0, abs(params.E)))
    check("right_quadratic", qR, TOL_ALGEBRAIC * max(1.0, abs(params.E)))
    check("alpha_at_0", alpha_at_0, 0.0)
    check("alpha_at_sstar", alpha_at_sstar, TOL_ALPHA_END * max(1.0, alpha_max))
    check("slope_at_0_minus_2", boundary["slope_at_0_minus_2"], TOL_SLOPE)
    check("slope_at_sstar_plus_2", boundary["slope_at_sstar_plus_2"], TOL_SLOPE)
    check("fd_check", fd_worst, TOL_FD)
    check("defect_at_root", defect, 10.0 * config.quad_rel_tol * max(1.0, dscale))
    for name in (
        "beta_left_at_0",
        "beta_left_slope_minus_1",
        "beta_right_at_sstar",
        "beta_right_slope_plus_1",
    ):
        if name in boundary:
            check(name, boundary[name], TOL_ALGEBRAIC)
    checks["positivity"] = {
        "value": 1.0 if positivity_ok else 0.0,
        "tol": 1.0,
        "passed": positivity_ok,
    }

    return ResidualReport(
        grid=grid,
        res_25=res25,
        res_26=res26,
        res_27=res27,
        mu_samples=mu_s,
        mu_dev=mu_dev,
        ansatz_res=ansatz,
        boundary=boundary,
        positivity_ok=positivity_ok,
        positivity_violation=violation,
        fd_check=float(fd_worst),
        checks=checks,
        certified=all(c["passed"] for c in checks.values()),
    )


def verify_t_system(
    params: cf.SolutionParams,
    spec: BundleSpec,
    config: sv.SolverConfig = None,
    grid_size: int = 257,
) -> float:
    """Spot-check the t-coordinate fiber equation on the reconstruction.

    Reconstructs t(s), forms f = sqrt(alpha), g_i = sqrt(beta_i),
    v = phi, differentiates them in t by local quartic fits on the
    nonuniform grid, and returns the max residual of

        f../f + sum_i (2 n_i f. g_i./(f g_i) - n_i q_i^2 f^2/(2 g_i^4))
             + m f. v./(f v) - eps/2

    over the interior window t in [0.1 l, 0.9 l]. Finite-difference
    limited; expected below 1e-4 for certified profiles.
    """
    config = config or sv.SolverConfig()
    mp = reconstruct_t(params, spec, config, grid_size)
    lo, hi = 0.1 * mp.total_length_l, 0.9 * mp.total_length_l
    idx = np.where((mp.t >= lo) & (mp.t <= hi))[0]
    # Thin out to ~200 evaluation points; each uses a 7-sample window.
    step = max(1, len(idx) // 200)
    worst = 0.0
    for j in idx[::step]:
        if j < 3 or j > len(mp.t) - 4:
            continue
        win = slice(j - 3, j + 4)
        dt = mp.t[win] - mp.t[j]

        def fit(y):
            c = np.polynomial.polynomial.polyfit(dt, y, 4)
            return c[0], c[1], 2.0 * c[2]  # value, d/dt, d2/dt2

        f, fd, fdd = fit(mp.f[win])
        v, vd, _ = fit(mp.v[win])
        res = fdd / f + spec.m * fd * vd / (f * v) - 0.5 * spec.epsilon
        for i, fac in enumerate(spec.factors):
            g, gd, _ = fit(mp.g[win, i])
            res += 2.0 * fac.n * fd * gd / (f * g) - 0.5 * fac.n * fac.q**2 * f**2 / g**4
        worst = max(worst, abs(res))
    return worst


def dsdt_consistency(
    params: cf.SolutionParams,
    spec: BundleSpec,
    config: sv.SolverConfig = None,
    grid_size: int = 257,
) -> float:
    """Max relative deviation of the differenced ds/dt from sqrt(alpha).

    ds = f dt is the coordinate change itself, so the reconstructed
    t-grid must satisfy ds/dt = f = sqrt(alpha) wherever alpha > 0.
    """
    config = config or sv.SolverConfig()
    mp = reconstruct_t(params, spec, config, grid_size)
    lo, hi = 0.1 * mp.total_length_l, 0.9 * mp.total_length_l
    idx = np.where((mp.t >= lo) & (mp.t <= hi))[0]
    step = max(1, len(idx) // 200)
    worst = 0.0
    for j in idx[::step]:
        if j < 3 or j > len(mp.t) - 4:
            continue
        win = slice(j - 3, j + 4)
        dt = mp.t[win] - mp.t[j]
        c = np.polynomial.polynomial.polyfit(dt, mp.s[win], 4)
        dsdt = c[1]
        f = mp.f[j]
        worst = max(worst, abs(dsdt - f) / abs(f))
    return worst
