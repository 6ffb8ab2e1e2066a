"""Closed-form pieces of the quasi-Einstein profile.

After reducing to the s-coordinate (ds = f dt, alpha = f^2,
beta_i = g_i^2, phi = v), the standard ansatz

    beta_i''/beta_i - (1/2)(beta_i'/beta_i)^2 + q_i^2/(2 beta_i^2) = 0

forces phi to be linear, phi = kappa1*(s + kappa0), and every beta_i to
be the quadratic

    beta_i(s) = A_i*(s + kappa0)^2 - q_i^2/(4 A_i),

with each coefficient A_i tied to the single consistency constant

    E = (8 A_i p_i - eps q_i^2) / (8 A_i^2) = mu / kappa1^2.

Smooth closure at the two ends pins kappa0 and the interval length s_*
to roots of one endpoint quadratic each,

    (1/2) x^2 + 2 (n_end + 1) x - E = 0,

evaluated at x = kappa0 (left, large root) and x = -(s_* + kappa0)
(right, small root), where n_end is the dimension of the blown-down
factor at that end (0 for a smooth collapse of the circle fiber alone).

Everything in this module is exact arithmetic on these formulas; the
only numerics in the pipeline live in the quadrature for alpha and the
root-find over kappa0 (see solver).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeDiscriminantError, NonPositiveKappa0Error, SingularVError
from .spec import BundleSpec, EndpointType


@dataclass(frozen=True)
class QuadraticRoots:
    """Both real roots of (1/2)x^2 + 2(n+1)x - E, small <= large."""

    small: float
    large: float


@dataclass(frozen=True)
class SolutionParams:
    """All scalar data of one closed-form profile.

    kappa0 : shift of the s-coordinate, large root of the left-end
        quadratic (> 0 for usable profiles).
    kappa1 : scale of phi; free, defaults to 1. Rescaling kappa1 leaves
        the metric and all residuals invariant and scales mu by
        kappa1^2.
    E : the consistency constant shared by all factors.
    mu : the first-integral constant, mu = E * kappa1^2 exactly.
    s_star : interval length; -(s_star + kappa0) is the small root of
        the right-end quadratic.
    A : tuple of r quadratic coefficients A_i.
    """

    kappa0: float
    kappa1: float
    E: float
    mu: float
    s_star: float
    A: tuple


def endpoint_quadratic_roots(E: float, n_end: int) -> QuadraticRoots:
    """Solve the endpoint quadratic (1/2)x^2 + 2(n_end+1)x - E = 0.

    Raises
    ------
    NegativeDiscriminantError
        If 4(n_end+1)^2 + 2E < 0 (no real roots).
    """
    b = 2.0 * (n_end + 1)
    disc = b * b + 2.0 * E
    if disc < 0.0:
        raise NegativeDiscriminantError(
            f"endpoint quadratic has negative discriminant {disc} (E={E}, n_end={n_end})"
        )
    root = math.sqrt(disc)
    return QuadraticRoots(small=-b - root, large=-b + root)


def energy_from_kappa0(kappa0: float, n_left: int) -> float:
    """Invert the left-end quadratic: E = (1/2)kappa0^2 + 2(n_left+1)kappa0."""
    return 0.5 * kappa0 * kappa0 + 2.0 * (n_left + 1) * kappa0


def kappa0_and_sstar(E: float, spec: BundleSpec) -> tuple:
    """Endpoint shift and interval length for a given E.

    kappa0 is the large root of the left-end quadratic and
    s_* = -(small root of the right-end quadratic) - kappa0, i.e.
    s_* + kappa0 = 2(n_R+1) + sqrt(4(n_R+1)^2 + 2E). For an
    all-collapse configuration (n_L = n_R = 0) the two quadratics
    coincide and s_* = 4 identically, for every E > 0.

    Raises
    ------
    NonPositiveKappa0Error
        If the large left root is <= 0 (signals E <= 0).
    """
    kappa0 = endpoint_quadratic_roots(E, spec.n_left).large
    if kappa0 <= 0.0:
        raise NonPositiveKappa0Error(f"large left root {kappa0} <= 0 (E={E})")
    sigma = -endpoint_quadratic_roots(E, spec.n_right).small
    return kappa0, sigma - kappa0


def coefficients_A(
    E: float, kappa0: float, s_star: float, spec: BundleSpec, root_signs=None
) -> tuple:
    """Quadratic coefficients A_i for every factor.

    Blowdown factors are forced: A_1 = 1/(2 kappa0) at a left blowdown,
    A_r = -1/(2 (s_star + kappa0)) at a right blowdown. Every other
    factor solves 8 E A^2 - 8 p_i A + eps q_i^2 = 0, whose roots are

        A = (p_i +/- sqrt(p_i^2 - eps E q_i^2 / 2)) / (2E),

    one positive and one negative (their product is eps q_i^2/(8E) < 0
    with eps = -1).
    The NEGATIVE root is the default: it is the branch on which the
    boundary defect acquires a root for the solvable configurations
    (the positive branch keeps the defect single-signed over the whole
    default bracket). ``root_signs`` overrides the choice per factor
    with entries +1/-1; entries for blowdown factors are ignored.
    """
    if root_signs is None:
        root_signs = (-1,) * spec.r
    if len(root_signs) != spec.r:
        raise ValueError(f"root_signs needs {spec.r} entries, got {len(root_signs)}")
    eps = spec.epsilon
    sigma = s_star + kappa0
    A = []
    for i, fac in enumerate(spec.factors):
        if spec.left is EndpointType.BLOWDOWN and i == 0:
            A.append(1.0 / (2.0 * kappa0))
        elif spec.right is EndpointType.BLOWDOWN and i == spec.r - 1:
            A.append(-1.0 / (2.0 * sigma))
        else:
            disc = fac.p * fac.p - 0.5 * eps * E * fac.q * fac.q
            if disc < 0.0:
                raise NegativeDiscriminantError(
                    f"factor {i + 1}: A-quadratic discriminant {disc} < 0"
                )
            sign = 1.0 if root_signs[i] >= 0 else -1.0
            A.append((fac.p + sign * math.sqrt(disc)) / (2.0 * E))
    return tuple(A)


def params_from_kappa0(
    kappa0: float, spec: BundleSpec, kappa1: float = 1.0, root_signs=None
) -> SolutionParams:
    """Assemble the full parameter set from the single free scalar kappa0."""
    E = energy_from_kappa0(kappa0, spec.n_left)
    k0, s_star = kappa0_and_sstar(E, spec)
    A = coefficients_A(E, kappa0, s_star, spec, root_signs=root_signs)
    return SolutionParams(
        kappa0=kappa0, kappa1=kappa1, E=E, mu=E * kappa1 * kappa1, s_star=s_star, A=A
    )


# ---------------------------------------------------------------------------
# Profile evaluators (all accept scalar or ndarray s)
# ---------------------------------------------------------------------------


def beta(i: int, s, params: SolutionParams, spec: BundleSpec):
    """beta_i(s) = A_i (s+kappa0)^2 - q_i^2/(4 A_i)."""
    a = params.A[i]
    q = spec.factors[i].q
    x = np.asarray(s, dtype=float) + params.kappa0
    out = a * x * x - q * q / (4.0 * a)
    return float(out) if np.ndim(s) == 0 else out


def beta_prime(i: int, s, params: SolutionParams, spec: BundleSpec):
    """beta_i'(s) = 2 A_i (s+kappa0)."""
    a = params.A[i]
    x = np.asarray(s, dtype=float) + params.kappa0
    out = 2.0 * a * x
    return float(out) if np.ndim(s) == 0 else out


def beta_second(i: int, s, params: SolutionParams, spec: BundleSpec):
    """beta_i''(s) = 2 A_i."""
    a = 2.0 * params.A[i]
    return a if np.ndim(s) == 0 else np.full(np.shape(s), a)


def phi(s, params: SolutionParams):
    """phi(s) = kappa1 (s + kappa0)."""
    out = params.kappa1 * (np.asarray(s, dtype=float) + params.kappa0)
    return float(out) if np.ndim(s) == 0 else out


def phi_prime(s, params: SolutionParams):
    """phi'(s) = kappa1 (phi is linear; phi'' = 0)."""
    return params.kappa1 if np.ndim(s) == 0 else np.full(np.shape(s), params.kappa1)


def V(s, params: SolutionParams, spec: BundleSpec):
    """V(s) = prod_i beta_i(s)^(n_i); vanishes only at a blowdown end."""
    s_arr = np.asarray(s, dtype=float)
    out = np.ones_like(s_arr)
    for i, fac in enumerate(spec.factors):
        out = out * beta(i, s_arr, params, spec) ** fac.n
    return float(out) if np.ndim(s) == 0 else out


def logV_prime(s, params: SolutionParams, spec: BundleSpec):
    """(log V)'(s) = sum_i n_i beta_i'/beta_i; requires all beta_i(s) > 0."""
    s_arr = np.asarray(s, dtype=float)
    _require_positive_betas(s_arr, params, spec)
    out = np.zeros_like(s_arr)
    for i, fac in enumerate(spec.factors):
        out = out + fac.n * beta_prime(i, s_arr, params, spec) / beta(i, s_arr, params, spec)
    return float(out) if np.ndim(s) == 0 else out


def logV_second(s, params: SolutionParams, spec: BundleSpec):
    """(log V)''(s) = sum_i n_i (beta_i'' beta_i - beta_i'^2)/beta_i^2."""
    s_arr = np.asarray(s, dtype=float)
    _require_positive_betas(s_arr, params, spec)
    out = np.zeros_like(s_arr)
    for i, fac in enumerate(spec.factors):
        b = beta(i, s_arr, params, spec)
        bp = beta_prime(i, s_arr, params, spec)
        bpp = beta_second(i, s_arr, params, spec)
        out = out + fac.n * (bpp * b - bp * bp) / (b * b)
    return float(out) if np.ndim(s) == 0 else out


def _require_positive_betas(s_arr, params, spec):
    for i in range(spec.r):
        b = beta(i, s_arr, params, spec)
        if np.any(np.asarray(b) <= 0.0):
            raise SingularVError(
                f"beta_{i + 1} <= 0 at an evaluation point; log V derivatives undefined"
            )


def positivity_check(params: SolutionParams, spec: BundleSpec):
    """Exact positivity of every beta_i on (0, s_*).

    Each beta_i is A_i x^2 - c with vertex at x = 0, which lies outside
    [kappa0, kappa0 + s_*] since kappa0 > 0; beta_i is therefore
    monotone on the interval and positivity reduces to its values at
    the two ends (blowdown factors are required to vanish at their own
    end and checked on the open side only).

    Returns
    -------
    (ok, violation)
        ok is True when every factor is positive on the open interval;
        violation is None or a dict {"factor": i (1-based), "s": endpoint,
        "value": beta} for the first offender.
    """
    ends = []
    for i in range(spec.r):
        left_is_zero = spec.left is EndpointType.BLOWDOWN and i == 0
        right_is_zero = spec.right is EndpointType.BLOWDOWN and i == spec.r - 1
        if not left_is_zero:
            ends.append((i, 0.0))
        if not right_is_zero:
            ends.append((i, params.s_star))
        # The open side next to a forced zero: monotonicity makes the
        # sign there equal to the sign at the opposite end, already
        # covered above.
    for i, s_end in ends:
        val = beta(i, s_end, params, spec)
        if val <= 0.0:
            return False, {"factor": i + 1, "s": s_end, "value": val}
    return True, None
