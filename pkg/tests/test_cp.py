import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dispersim import materials as mat
from dispersim.casimir_polder import (AtomScenario, Cavity, HalfSpace,
                                      IdealMirror, Magnetizability, Plate,
                                      Polarizability, cp_force, cp_potential,
                                      cp_potential_perfect_mirror,
                                      cp_retarded_halfspace_asymptote,
                                      nonretarded_asymptote,
                                      repulsion_borderline,
                                      retarded_halfspace_integral,
                                      thin_plate_asymptote,
                                      _planar_scenario, _scaled_kernel)
from dispersim.errors import RegimeWarning
from dispersim.layers import LayerStack
from dispersim.quadrature import QuadSpec, integrate_semiinf

from conftest import magnetodielectric
from oracles import trapezoid_refined

VAC = mat.Vacuum()
SPEC = QuadSpec(rel_tol=1e-9)


# ------------------------------------------------------- response models

def test_polarizability_models():
    static = Polarizability.static(2.5)
    assert static(0.0) == 2.5
    assert static(100.0) == 2.5
    two = Polarizability.two_level(2.0, 1.5)
    assert two.static_value == 1.5
    assert two(2.0) == pytest.approx(0.75)
    multi = Polarizability.multi_oscillator([(1.0, 1.0), (3.0, 0.5)])
    assert multi.static_value == 1.5
    # dipole-moment entry point: alpha(0) = 2 d^2/(3 w10)
    from_d = Polarizability.from_dipole_moment(2.0, 3.0)
    assert from_d.static_value == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Polarizability.static(-1.0)


@given(omega=st.floats(0.1, 10.0), weight=st.floats(0.0, 10.0),
       xi1=st.floats(0.0, 100.0), xi2=st.floats(0.0, 100.0))
@settings(max_examples=100, deadline=None)
def test_polarizability_monotone_nonincreasing(omega, weight, xi1, xi2):
    alpha = Polarizability.two_level(omega, weight)
    lo, hi = sorted((xi1, xi2))
    assert alpha(hi) <= alpha(lo) + 1e-12
    assert alpha(0.0) == pytest.approx(weight, rel=1e-12)


# --------------------------------------------------------- trivial zeros

def test_zero_polarizability_gives_zero():
    scn = AtomScenario(Polarizability.static(0.0), IdealMirror(), 1.0)
    assert cp_potential(scn) == 0.0
    assert cp_force(scn) == 0.0


def test_vacuum_wall_gives_zero():
    atom = Polarizability.two_level(1.0, 1.0)
    wall = HalfSpace(LayerStack.half_space(VAC))
    assert cp_potential(AtomScenario(atom, wall, 1.0), SPEC) == 0.0


# ------------------------------------------------------------ ideal mirror

def test_mirror_double_integral_matches_closed_kernel(two_level_atom):
    scn = AtomScenario(two_level_atom, IdealMirror("conductor"), 1.0)
    u2d = cp_potential(scn, QuadSpec(rel_tol=1e-9))
    u1d = cp_potential_perfect_mirror(two_level_atom, 1.0, "conductor",
                                      QuadSpec(rel_tol=1e-10))
    assert u2d == pytest.approx(u1d, rel=4e-9)


def test_mirror_retarded_asymptote(two_level_atom):
    z = 50.0
    u = cp_potential_perfect_mirror(two_level_atom, z, spec=SPEC)
    assert u == pytest.approx(-3.0 / (32.0 * math.pi ** 2 * z ** 4),
                              rel=1e-2)


def test_mirror_nonretarded_asymptote(two_level_atom):
    # Lennard-Jones form; <d^2> = 3*w10*alpha0/2 for the two-level model
    z = 1e-3
    u = cp_potential_perfect_mirror(two_level_atom, z, spec=SPEC)
    assert u == pytest.approx(-1.0 / (32.0 * math.pi * z ** 3), rel=1e-2)


def test_permeable_mirror_is_exact_negation(two_level_atom):
    for z in (0.3, 1.0, 8.0):
        attract = cp_potential_perfect_mirror(two_level_atom, z,
                                              "conductor", SPEC)
        repel = cp_potential_perfect_mirror(two_level_atom, z,
                                            "permeable", SPEC)
        assert repel == -attract
        assert repel > 0.0


def test_permeable_mirror_geometry_positive(two_level_atom):
    scn = AtomScenario(two_level_atom, IdealMirror("permeable"), 0.7)
    assert cp_potential(scn, SPEC) > 0.0


# ---------------------------------------------------------- half space

def test_halfspace_retarded_asymptote(two_level_atom, benchmark_dielectric):
    z = 50.0
    scn = AtomScenario(two_level_atom,
                       HalfSpace(LayerStack.half_space(benchmark_dielectric)),
                       z)
    u = cp_potential(scn, SPEC)
    eps0 = 1.0 + 0.75 ** 2 / 1.03 ** 2
    asym = cp_retarded_halfspace_asymptote(1.0, eps0, 1.0, z)
    assert u == pytest.approx(asym, rel=1e-2)
    assert u < 0.0


def test_halfspace_nonretarded_dielectric(two_level_atom,
                                          benchmark_dielectric):
    z = 1e-3 / 1.03
    scn = AtomScenario(two_level_atom,
                       HalfSpace(LayerStack.half_space(benchmark_dielectric)),
                       z)
    u = cp_potential(scn, SPEC)
    asym = nonretarded_asymptote(two_level_atom, benchmark_dielectric, z,
                                 "dielectric")
    assert u == pytest.approx(asym, rel=1e-2)


def test_nonretarded_dielectric_against_trapezoid_oracle(
        two_level_atom, benchmark_dielectric):
    z = 5e-4

    def integrand(xi):
        eps = mat.epsilon_imag_axis(benchmark_dielectric, xi)
        return two_level_atom(xi) * (eps - 1.0) / (eps + 1.0)

    oracle = trapezoid_refined(integrand, 1e-8, 400.0, 400000) \
        / (-16.0 * math.pi ** 2 * z ** 3)
    value = nonretarded_asymptote(two_level_atom, benchmark_dielectric, z,
                                  "dielectric")
    assert value == pytest.approx(oracle, rel=1e-6)


def test_nonretarded_magnetic(two_level_atom, benchmark_magnetic):
    z = 2.5e-4
    scn = AtomScenario(two_level_atom,
                       HalfSpace(LayerStack.half_space(benchmark_magnetic)),
                       z)
    u = cp_potential(scn, QuadSpec(rel_tol=1e-8))
    asym = nonretarded_asymptote(two_level_atom, benchmark_magnetic, z,
                                 "magnetic")
    assert u > 0.0
    assert u == pytest.approx(asym, rel=1e-2)


def test_nonretarded_huge_epsilon_approaches_lennard_jones(two_level_atom):
    # (eps-1)/(eps+1) -> 1 reproduces the ideal-conductor short-range form
    wall = mat.ConstantStatic(epsilon=1e8)
    z = 1e-3
    value = nonretarded_asymptote(two_level_atom, wall, z, "dielectric")
    assert value == pytest.approx(-1.0 / (32.0 * math.pi * z ** 3),
                                  rel=1e-6)


def test_mu_one_magnetic_asymptote_vanishes(two_level_atom):
    assert nonretarded_asymptote(two_level_atom, VAC, 0.01, "magnetic") \
        == pytest.approx(0.0, abs=1e-18)


# ------------------------------------------------- retarded borderline

def test_retarded_integral_limits():
    assert retarded_halfspace_integral(1.0, 1.0) == pytest.approx(0.0,
                                                                  abs=1e-12)
    # huge permittivity recovers the ideal-conductor coefficient: the
    # prefactor -3/(64 pi^2 z^4) times 2 gives -3/(32 pi^2 z^4)
    value = retarded_halfspace_integral(1e8, 1.0)
    assert value == pytest.approx(2.0, rel=1e-3)
    assert retarded_halfspace_integral(1.0, 5.0) < 0.0


def test_retarded_conductor_limit_coefficient(two_level_atom):
    z = 3.0
    u = cp_retarded_halfspace_asymptote(1.0, 1e9, 1.0, z)
    assert u == pytest.approx(-3.0 / (32.0 * math.pi ** 2 * z ** 4),
                              rel=1e-4)


def test_borderline_weak_and_strong_limits():
    pairs = repulsion_borderline([1.001, 1000.0], QuadSpec(rel_tol=1e-9))
    slope = (pairs[0][1] - 1.0) / 0.001
    assert slope == pytest.approx(23.0 / 7.0, rel=5e-3)
    assert pairs[1][1] / pairs[1][0] == pytest.approx(5.11, rel=0.02)


def test_borderline_epsilon_equals_mu_attractive():
    # on the diagonal the electric term wins: no crossing at mu = eps
    value = retarded_halfspace_integral(3.0, 3.0)
    assert value > 0.0


# ------------------------------------------------------------- thin plate

def test_thin_plate_bracket_values(two_level_atom):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        assert thin_plate_asymptote(two_level_atom, VAC, 1.0, 0.01) == 0.0
        value = thin_plate_asymptote(two_level_atom,
                                     mat.ConstantStatic(epsilon=2.0),
                                     1.0, 0.01)
    expected = -1.0 * 0.01 * 18.5 / (160.0 * math.pi ** 2)
    assert value == pytest.approx(expected, rel=1e-12)


def test_thin_plate_regime_warning(two_level_atom):
    with pytest.warns(RegimeWarning):
        thin_plate_asymptote(two_level_atom, mat.ConstantStatic(epsilon=2.0),
                             1.0, 0.5)


def test_thin_plate_ratio_approaches_one(two_level_atom):
    plate_mat = mat.ConstantStatic(epsilon=2.0)
    ratios = []
    for z in (5.0, 15.0, 50.0):
        full = cp_potential(AtomScenario(two_level_atom,
                                         Plate(plate_mat, 0.01), z),
                            QuadSpec(rel_tol=1e-10))
        asym = thin_plate_asymptote(two_level_atom, plate_mat, z, 0.01)
        ratios.append(full / asym)
    assert abs(ratios[-1] - 1.0) < abs(ratios[0] - 1.0)
    assert ratios[-1] == pytest.approx(1.0, rel=5e-3)


# ----------------------------------------------------------------- cavity

def test_cavity_multiple_reflection_switch(two_level_atom,
                                           benchmark_dielectric):
    stack = LayerStack.half_space(benchmark_dielectric)
    scn = AtomScenario(two_level_atom, Cavity(stack, stack, 3.0), 1.1)
    # kernel identity at machine precision
    scenario = _planar_scenario(scn)
    q = np.array([0.2, 0.9, 2.3])
    for xi in (0.3, 1.0):
        cavity_kernel = _scaled_kernel(scenario, 1.1, xi, q,
                                       multiple_reflections=False)
        left = _scaled_kernel(_planar_scenario(
            AtomScenario(two_level_atom, HalfSpace(stack), 1.1)), 1.1, xi, q)
        right = _scaled_kernel(_planar_scenario(
            AtomScenario(two_level_atom, HalfSpace(stack), 1.9)), 1.9, xi, q)
        assert np.allclose(cavity_kernel, left + right, rtol=1e-14, atol=0.0)
    # and at the integral level
    u_single_sum = (
        cp_potential(AtomScenario(two_level_atom, HalfSpace(stack), 1.1),
                     QuadSpec(rel_tol=1e-10))
        + cp_potential(AtomScenario(two_level_atom, HalfSpace(stack), 1.9),
                       QuadSpec(rel_tol=1e-10)))
    u_no_multiple = cp_potential(scn, QuadSpec(rel_tol=1e-10),
                                 multiple_reflections=False)
    assert u_no_multiple == pytest.approx(u_single_sum, rel=1e-9)
    # multiple reflections change the result
    u_full = cp_potential(scn, QuadSpec(rel_tol=1e-10))
    assert u_full != pytest.approx(u_no_multiple, rel=1e-6)


def test_symmetric_cavity_force_vanishes_at_center(two_level_atom,
                                                   benchmark_dielectric):
    stack = LayerStack.half_space(benchmark_dielectric)
    scn = AtomScenario(two_level_atom, Cavity(stack, stack, 2.0), 1.0)
    f = cp_force(scn, QuadSpec(rel_tol=1e-9))
    u = cp_potential(scn, QuadSpec(rel_tol=1e-9))
    assert abs(f) < 1e-9 * abs(u)


def test_force_matches_finite_difference(two_level_atom,
                                         benchmark_dielectric):
    stack = LayerStack.half_space(benchmark_dielectric)
    spec = QuadSpec(rel_tol=1e-10)
    for geometry, z in ((HalfSpace(stack), 0.7),
                        (IdealMirror("conductor"), 1.2)):
        f = cp_force(AtomScenario(two_level_atom, geometry, z), spec)
        h = 3e-4 * z
        up = cp_potential(AtomScenario(two_level_atom, geometry, z + h),
                          spec)
        um = cp_potential(AtomScenario(two_level_atom, geometry, z - h),
                          spec)
        assert f == pytest.approx(-(up - um) / (2.0 * h), rel=1e-6)


def test_attraction_toward_single_wall(two_level_atom, benchmark_dielectric):
    stack = LayerStack.half_space(benchmark_dielectric)
    f = cp_force(AtomScenario(two_level_atom, HalfSpace(stack), 0.5), SPEC)
    assert f < 0.0   # pulled toward the wall at z = 0


def test_dielectric_wall_always_attractive(two_level_atom,
                                           benchmark_dielectric):
    stack = LayerStack.half_space(benchmark_dielectric)
    for z in (0.05, 0.5, 5.0, 50.0):
        u = cp_potential(AtomScenario(two_level_atom, HalfSpace(stack), z),
                         QuadSpec(rel_tol=1e-8))
        assert u < 0.0


def test_barrier_with_large_static_permeability(two_level_atom):
    wall = HalfSpace(LayerStack.half_space(magnetodielectric(5.0)))
    z_grid = np.exp(np.linspace(math.log(0.2), math.log(20.0), 12))
    values = np.array([cp_potential(AtomScenario(two_level_atom, wall, z),
                                    QuadSpec(rel_tol=1e-7))
                       for z in z_grid])
    assert values.min() < 0.0
    assert values.max() > 0.0


def test_scenario_validation():
    atom = Polarizability.two_level(1.0, 1.0)
    with pytest.raises(ValueError):
        AtomScenario(atom, IdealMirror(), -1.0)
    with pytest.raises(ValueError):
        AtomScenario(atom, Cavity(LayerStack.half_space(VAC),
                                  LayerStack.half_space(VAC), 1.0), 1.5)
    with pytest.raises(ValueError):
        IdealMirror("shiny")
