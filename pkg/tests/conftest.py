"""Shared fixtures: the two study instances, solved and verified once."""

import pytest

from qebundle import (
    BundleSpec,
    EndpointType,
    FactorSpec,
    solve,
    verify,
)


@pytest.fixture(scope="session")
def ref_spec():
    """One factor (n, p, q) = (2, 3, 1), m = 2, both ends smooth collapses."""
    return BundleSpec(
        factors=(FactorSpec(n=2, p=3, q=1),),
        m=2.0,
        left=EndpointType.SMOOTH_COLLAPSE,
        right=EndpointType.SMOOTH_COLLAPSE,
    )


@pytest.fixture(scope="session")
def ref_profile(ref_spec):
    return solve(ref_spec)


@pytest.fixture(scope="session")
def ref_report(ref_spec, ref_profile):
    return verify(ref_profile, ref_spec, grid_size=201)


@pytest.fixture(scope="session")
def blow_spec():
    """Factors (1, 2, 1) + (1, 3, 1), m = 2, left blowdown, right collapse."""
    return BundleSpec(
        factors=(FactorSpec(n=1, p=2, q=1), FactorSpec(n=1, p=3, q=1)),
        m=2.0,
        left=EndpointType.BLOWDOWN,
        right=EndpointType.SMOOTH_COLLAPSE,
    )


@pytest.fixture(scope="session")
def blow_profile(blow_spec):
    return solve(blow_spec)


@pytest.fixture(scope="session")
def blow_report(blow_spec, blow_profile):
    return verify(blow_profile, blow_spec, grid_size=201)
