"""Residual definitions and the certification report."""

import dataclasses

import numpy as np
import pytest

import oracles as orc
from qebundle import (
    BundleSpec,
    EndpointType,
    FactorSpec,
    PositivityError,
    SolutionParams,
    SolvedProfile,
    ansatz_residual,
    chebyshev_grid,
    mu_of_s,
    residual_25,
    residual_26,
    residual_27,
    sample_at,
    solve,
    verify,
)
from qebundle.closedform import beta, beta_prime, params_from_kappa0
from qebundle.solver import boundary_defect


# ---------------------------------------------------------------------------
# Residual algebra
# ---------------------------------------------------------------------------


def test_residuals_vanish_on_solved_profile(ref_profile, ref_spec):
    # with alpha' and alpha'' taken from the first-order form, the two
    # second-order residuals are algebraic identities: machine zero
    p = ref_profile.params
    for s in np.linspace(0.2, 3.8, 9):
        smp = sample_at(s, p, ref_spec)
        assert abs(residual_25(smp, ref_spec)) < 1e-10
        assert abs(residual_26(smp, ref_spec)) < 1e-10
        assert abs(residual_27(smp, 0, ref_spec)) < 1e-10


def test_residual_difference_is_weighted_ansatz(ref_profile, ref_spec):
    # res_I - res_II = alpha * sum_i n_i * ansatz_i exactly
    p = ref_profile.params
    for s in (0.4, 1.9, 3.3):
        smp = sample_at(s, p, ref_spec)
        diff = residual_25(smp, ref_spec) - residual_26(smp, ref_spec)
        weighted = smp.alpha * sum(
            fac.n * ansatz_residual(smp, i, ref_spec)
            for i, fac in enumerate(ref_spec.factors)
        )
        assert diff == pytest.approx(weighted, abs=1e-14)


def test_residual_25_sees_alpha_prime_perturbation(ref_profile, ref_spec):
    # the residual is affine in alpha' with slope (log V)'/2 + m/(2x);
    # a perturbation h must move it by exactly h times that slope, far
    # above the 1e-8 residual tolerance, so corrupted slopes cannot
    # certify
    p = ref_profile.params
    s, h = 3.7, 1e-3
    smp = sample_at(s, p, ref_spec)
    bumped = dataclasses.replace(smp, alpha_prime=smp.alpha_prime + h)
    shift = residual_25(bumped, ref_spec) - residual_25(smp, ref_spec)
    slope = 0.5 * smp.logV_prime + ref_spec.m * smp.phi_prime / (2.0 * smp.phi)
    assert shift == pytest.approx(h * slope, rel=1e-9)
    assert abs(shift) > 1e-5
    assert abs(residual_25(bumped, ref_spec)) > 1e-8


def test_residual_27_reduces_to_left_quadratic_at_zero(ref_profile, ref_spec):
    # at s = 0 the equation collapses to (beta'(0) - p)/beta(0) = eps/2,
    # which is the left endpoint quadratic in disguise
    p = ref_profile.params
    b0 = beta(0, 0.0, p, ref_spec)
    bp0 = beta_prime(0, 0.0, p, ref_spec)
    assert (bp0 - 3.0) / b0 == pytest.approx(-0.5, abs=1e-12)


def test_mu_samples_equal_E_kappa1_squared(ref_profile, ref_spec):
    p = ref_profile.params
    for s in (0.6, 2.0, 3.4):
        smp = sample_at(s, p, ref_spec)
        assert mu_of_s(smp, ref_spec) == pytest.approx(p.E * p.kappa1**2, rel=1e-10)


def test_mu_scales_as_kappa1_squared(ref_spec, ref_profile):
    k0 = ref_profile.params.kappa0
    p1 = params_from_kappa0(k0, ref_spec, kappa1=1.0)
    p2 = params_from_kappa0(k0, ref_spec, kappa1=2.0)
    s = 1.5
    m1 = mu_of_s(sample_at(s, p1, ref_spec), ref_spec)
    m2 = mu_of_s(sample_at(s, p2, ref_spec), ref_spec)
    assert m2 == pytest.approx(4.0 * m1, rel=1e-12)


def test_residuals_invariant_under_kappa1(ref_spec, ref_profile):
    k0 = ref_profile.params.kappa0
    p1 = params_from_kappa0(k0, ref_spec, kappa1=1.0)
    p2 = params_from_kappa0(k0, ref_spec, kappa1=5.0)
    for s in (0.8, 2.6):
        r1 = residual_25(sample_at(s, p1, ref_spec), ref_spec)
        r2 = residual_25(sample_at(s, p2, ref_spec), ref_spec)
        assert r1 == pytest.approx(r2, abs=1e-13)


def test_residuals_invariant_under_twisting_sign(ref_profile, ref_spec):
    spec_neg = BundleSpec(factors=(FactorSpec(2, 3, -1),), m=2.0)
    p = ref_profile.params
    for s in (0.9, 2.2):
        r_pos = residual_26(sample_at(s, p, ref_spec), ref_spec)
        r_neg = residual_26(sample_at(s, p, spec_neg), spec_neg)
        assert r_pos == r_neg


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------


def test_chebyshev_grid_contract():
    g = chebyshev_grid(0.1, 3.9, 33)
    assert g.shape == (33,)
    assert np.all(np.diff(g) > 0.0)
    assert g[0] >= 0.1 and g[-1] <= 3.9
    # Chebyshev points cluster toward the ends
    assert (g[1] - g[0]) < (g[17] - g[16])


# ---------------------------------------------------------------------------
# verify report
# ---------------------------------------------------------------------------


def test_reference_profile_certifies(ref_report):
    assert ref_report.certified
    assert ref_report.positivity_ok
    assert all(c["passed"] for c in ref_report.checks.values())


def test_blowdown_profile_certifies(blow_report):
    assert blow_report.certified
    # exact blowdown boundary conditions are part of the checks
    assert blow_report.checks["beta_left_at_0"]["value"] == 0.0
    assert blow_report.checks["beta_left_slope_minus_1"]["value"] == 0.0


def test_report_residual_levels(ref_report):
    assert ref_report.checks["res25_max"]["value"] < 1e-10
    assert ref_report.checks["res26_max"]["value"] < 1e-10
    assert ref_report.checks["res27_max"]["value"] < 1e-10
    assert ref_report.checks["mu_dev"]["value"] < 1e-10
    assert ref_report.checks["ansatz_max"]["value"] < 1e-12
    assert ref_report.fd_check < 1e-6


def test_report_grid_respects_margins(ref_report, ref_profile):
    s_star = ref_profile.params.s_star
    delta = 1e-3 * s_star
    assert ref_report.grid[0] >= delta
    assert ref_report.grid[-1] <= s_star - delta
    assert len(ref_report.grid) == 201


def test_report_boundary_block(ref_report):
    b = ref_report.boundary
    assert abs(b["alpha_at_0"]) == 0.0
    assert abs(b["slope_at_0_minus_2"]) < 1e-6
    assert abs(b["slope_at_sstar_plus_2"]) < 1e-6


def test_verify_rejects_bad_grid(ref_profile, ref_spec):
    with pytest.raises(ValueError):
        verify(ref_profile, ref_spec, grid_size=8)
    with pytest.raises(ValueError):
        verify(ref_profile, ref_spec, delta_frac=0.5)


def test_wrong_root_profile_fails_positivity(ref_profile, ref_spec):
    # the positive-root coefficient admits no defect root, so a profile
    # assembled from it has alpha < 0 near s_*: reported, not raised
    k0 = ref_profile.params.kappa0
    p_bad = params_from_kappa0(k0, ref_spec, root_signs=(+1,))
    prof_bad = SolvedProfile(
        params=p_bad,
        defect_at_root=boundary_defect(k0, ref_spec, root_signs=(+1,)),
        bracket_used=(1e-3, 1e3),
        all_sign_changes=(),
        roots=(k0,),
    )
    report = verify(prof_bad, ref_spec, grid_size=64)
    assert not report.certified
    assert not report.positivity_ok
    assert report.positivity_violation["value"] <= 0.0
    assert report.positivity_violation["factor"] is None  # alpha, not a beta


def test_broken_beta_raises_positivity_error(ref_profile, ref_spec):
    p = ref_profile.params
    broken = SolutionParams(
        kappa0=p.kappa0, kappa1=p.kappa1, E=p.E, mu=p.mu, s_star=p.s_star, A=(1e-4,)
    )
    prof = SolvedProfile(
        params=broken,
        defect_at_root=0.0,
        bracket_used=(1e-3, 1e3),
        all_sign_changes=(),
        roots=(),
    )
    with pytest.raises(PositivityError) as err:
        verify(prof, ref_spec, grid_size=64)
    assert err.value.factor == 1


def test_non_root_profile_fails_certification(ref_spec):
    # kappa0 off the root: closed forms are fine but the right boundary
    # condition cannot hold
    p = params_from_kappa0(5.0, ref_spec)
    prof = SolvedProfile(
        params=p,
        defect_at_root=boundary_defect(5.0, ref_spec),
        bracket_used=(1e-3, 1e3),
        all_sign_changes=(),
        roots=(5.0,),
    )
    report = verify(prof, ref_spec, grid_size=64)
    assert not report.certified
    assert not report.checks["defect_at_root"]["passed"]


def test_certified_is_conjunction_of_checks(ref_report):
    assert ref_report.certified == all(c["passed"] for c in ref_report.checks.values())
