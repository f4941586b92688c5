import math

import pytest

from dispersim import materials as mat
from dispersim.casimir_polder import Polarizability
from dispersim.layers import LayerStack
from dispersim.quadrature import QuadSpec


@pytest.fixture
def tight_spec():
    return QuadSpec(rel_tol=1e-10)


@pytest.fixture
def spec():
    return QuadSpec(rel_tol=1e-8)


@pytest.fixture
def two_level_atom():
    return Polarizability.two_level(1.0, 1.0)


@pytest.fixture
def benchmark_dielectric():
    """Single-resonance permittivity used throughout the benchmark curves
    (plasma 0.75, resonance 1.03, damping 0.001, in atomic transition
    units)."""
    return mat.DrudeLorentz(
        epsilon=mat.DrudeLorentzParams(plasma=0.75, resonance=1.03,
                                       damping=0.001))


def magnetodielectric(mu_static):
    """Benchmark wall with adjustable static permeability."""
    mu_plasma = math.sqrt(mu_static - 1.0) if mu_static > 1.0 else 0.0
    return mat.DrudeLorentz(
        epsilon=mat.DrudeLorentzParams(0.75, 1.03, 0.001),
        mu=mat.DrudeLorentzParams(mu_plasma, 1.0, 0.001))


@pytest.fixture
def benchmark_magnetic():
    """Purely magnetic benchmark wall, mu(0) = 5."""
    return mat.DrudeLorentz(
        mu=mat.DrudeLorentzParams(plasma=2.0, resonance=1.0, damping=0.001))


@pytest.fixture
def mirror_stack():
    return LayerStack.half_space(mat.PerfectConductor())
