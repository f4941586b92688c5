import cmath
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dispersim import materials as mat
from dispersim.dynamics import (EvolutionResult, QuasiMode,
                                TwoLevelNearHalfSpace, classify_regime,
                                evolve_strong, evolve_weak,
                                mode_coefficients, mode_frequencies,
                                offresonant_force, resonant_force,
                                solve_shift, surface_plasmon_frequency,
                                width)
from dispersim.errors import RegimeWarning
from dispersim.quadrature import QuadSpec

from oracles import shift_bracketing
from dispersim.dynamics import _shift_map

# upper-state benchmark: plasma/resonance 0.75, damping 0.01, weak dipole,
# deep nonretarded distance
DIPOLE = 3.0 * math.pi * 1.0e-7
Z_NEAR = 0.0075 * 2.0 * math.pi
SURFACE = mat.DrudeLorentz(
    epsilon=mat.DrudeLorentzParams(plasma=0.75, resonance=1.0, damping=0.01))
OMEGA_S = surface_plasmon_frequency(SURFACE)


def system(omega10, dipole=DIPOLE, material=SURFACE, z=Z_NEAR):
    return TwoLevelNearHalfSpace(omega10, dipole, material, z)


def test_surface_plasmon_frequency():
    assert OMEGA_S == pytest.approx(math.sqrt(1.0 + 0.75 ** 2 / 2.0),
                                    rel=1e-15)


def test_zero_dipole_zero_shift():
    assert solve_shift(system(1.0, dipole=0.0)) == 0.0


def test_vacuum_half_space_zero_shift_and_force():
    sys = system(1.0, material=mat.Vacuum())
    assert solve_shift(sys) == 0.0
    assert resonant_force(sys) == 0.0
    assert offresonant_force(sys) == pytest.approx(0.0, abs=1e-18)


def test_shift_against_bracketing_oracle():
    for omega in (0.95, 1.05, 1.2, OMEGA_S):
        sys = system(omega)
        fixed_point = solve_shift(sys, tol=1e-12)
        oracle = shift_bracketing(sys, _shift_map, 0.05)
        assert fixed_point == pytest.approx(oracle, abs=1e-10)


def test_red_shift_below_surface_plasmon():
    assert solve_shift(system(0.9)) < 0.0
    assert solve_shift(system(1.05)) < 0.0


def test_width_positive_with_absorption_and_zero_without():
    sys = system(1.0)
    gamma = width(sys, solve_shift(sys))
    assert gamma > 0.0
    lossless = mat.DrudeLorentz(
        epsilon=mat.DrudeLorentzParams(plasma=0.75, resonance=1.0,
                                       damping=0.0))
    sys0 = system(0.5, material=lossless)
    assert width(sys0, solve_shift(sys0)) == 0.0


def test_width_peaks_near_surface_plasmon():
    freqs = np.linspace(0.9, 1.4, 26)
    gammas = [width(system(w), solve_shift(system(w))) for w in freqs]
    peak = freqs[int(np.argmax(gammas))]
    assert abs(peak - OMEGA_S) < 0.05


def test_resonant_force_sign_structure():
    sweep = np.linspace(0.3, 2.0 * OMEGA_S - 0.3, 80)
    values = np.array([resonant_force(system(w)) for w in sweep])
    signs = np.sign(values)
    changes = np.nonzero(np.diff(signs))[0]
    assert len(changes) == 1
    crossing = sweep[changes[0]]
    gamma_near = width(system(OMEGA_S), solve_shift(system(OMEGA_S)))
    assert abs(crossing - OMEGA_S) < 5.0 * max(gamma_near, 0.02)
    # attractive below, repulsive above
    assert values[0] < 0.0
    assert values[-1] > 0.0


def test_self_consistent_force_reduced_at_extrema():
    sweep = np.linspace(0.9, 1.5, 61)
    full = np.array([resonant_force(system(w)) for w in sweep])
    pert = np.array([resonant_force(system(w), self_consistent=False)
                     for w in sweep])
    assert np.abs(full).max() <= np.abs(pert).max()
    assert np.abs(full).min() == pytest.approx(0.0, abs=np.abs(pert).max())
    # extremum positions nearly unchanged
    assert abs(sweep[np.argmax(full)] - sweep[np.argmax(pert)]) < 0.05


def test_offresonant_force_positive_and_width_robust():
    sys = system(OMEGA_S)
    with_width = offresonant_force(sys, include_width=True,
                                   spec=QuadSpec(rel_tol=1e-10))
    without = offresonant_force(sys, include_width=False,
                                spec=QuadSpec(rel_tol=1e-10))
    assert with_width > 0.0
    assert abs(with_width - without) / abs(without) < 1e-3


def test_offresonant_width_effect_is_quadratic():
    # scaling the dipole weight scales Gamma linearly; the width-induced
    # force change must scale quadratically
    deltas = []
    for factor in (1.0, 2.0):
        sys = system(1.2, dipole=factor * DIPOLE)
        a = offresonant_force(sys, include_width=True,
                              spec=QuadSpec(rel_tol=1e-12))
        b = offresonant_force(sys, include_width=False,
                              spec=QuadSpec(rel_tol=1e-12))
        deltas.append((a - b) / b)
    assert deltas[1] / deltas[0] == pytest.approx(4.0, rel=0.1)


# ------------------------------------------------------------- evolution

def test_weak_coupling_decay():
    t = np.linspace(0.0, 10.0, 11)
    res = evolve_weak(2.0, 0.5, t)
    assert res.regime == "weak"
    assert res.force_scale[0] == 1.0
    assert res.population[2] == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert res.force[0] == pytest.approx(2.0)
    long_time = evolve_weak(2.0, 0.5, np.array([200.0]))
    assert long_time.force[0] == pytest.approx(0.0, abs=1e-40)
    frozen = evolve_weak(2.0, 0.0, t)
    assert np.all(frozen.force == 2.0)


def test_strong_coupling_degenerate_rabi():
    mode = QuasiMode(center=1.0, linewidth=0.0, rabi=0.3,
                     transition_frequency=1.0)
    assert classify_regime(mode) == "strong"
    t = np.linspace(0.0, 80.0, 400)
    res = evolve_strong(mode, t)
    assert np.max(np.abs(res.population - np.cos(0.15 * t) ** 2)) < 1e-12
    # oscillation period 2 pi / Omega_R
    plus, minus = mode_frequencies(mode)
    assert plus == pytest.approx(-0.15j)
    assert minus == pytest.approx(+0.15j)
    c_plus, c_minus = mode_coefficients(plus, minus)
    assert c_plus == pytest.approx(0.5)
    assert c_minus == pytest.approx(0.5)


def test_weak_regime_branch_coefficients():
    mode = QuasiMode(center=1.0, linewidth=1.0, rabi=0.02,
                     transition_frequency=1.3)
    assert classify_regime(mode) == "weak"
    plus, minus = mode_frequencies(mode)
    c_plus, c_minus = mode_coefficients(plus, minus)
    assert abs(c_plus - 1.0) < 1e-3
    assert abs(c_minus) < 1e-3
    # slow branch matches the quadratic-order form
    detuning = mode.detuning
    denom = detuning ** 2 + 0.25
    taylor = complex(-mode.rabi ** 2 / 8.0 / denom,
                     mode.rabi ** 2 / 4.0 * detuning / denom)
    assert abs(plus - taylor) / abs(plus) < 1e-3


def test_weak_regime_taylor_scaling():
    gamma_nu = 1.0
    errors = []
    for x in (0.1, 0.05, 0.025):
        mode = QuasiMode(center=1.0, linewidth=gamma_nu, rabi=0.5 * x,
                         transition_frequency=1.0)
        plus, _ = mode_frequencies(mode)
        taylor = -mode.rabi ** 2 / (4.0 * (0.5 * gamma_nu))
        errors.append(abs(plus - taylor) / gamma_nu)
        assert errors[-1] <= x ** 4
    assert errors[0] / errors[1] == pytest.approx(16.0, rel=0.2)


def test_critical_damping_boundary():
    mode = QuasiMode(center=1.0, linewidth=0.4, rabi=0.2,
                     transition_frequency=1.0)
    plus, minus = mode_frequencies(mode)
    # vanishing discriminant: both branches purely real and equal
    assert plus.imag == pytest.approx(0.0, abs=1e-14)
    assert minus.imag == pytest.approx(0.0, abs=1e-14)
    assert plus == pytest.approx(minus)
    t = np.linspace(0.0, 40.0, 200)
    res = evolve_strong(mode, t)
    # non-oscillatory: population decays monotonically
    assert np.all(np.diff(res.population) <= 1e-15)


def test_vieta_identities_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        mode = QuasiMode(center=rng.uniform(0.5, 2.0),
                         linewidth=rng.uniform(1e-3, 1.0),
                         rabi=rng.uniform(0.0, 1.0),
                         residual_width=rng.uniform(0.0, 0.1),
                         transition_frequency=rng.uniform(0.5, 2.0))
        plus, minus = mode_frequencies(mode)
        s = complex(0.5 * (mode.linewidth - mode.residual_width),
                    mode.detuning)
        scale = max(abs(plus), abs(minus), mode.rabi, 1e-30)
        assert abs(plus + minus + s) <= 1e-12 * scale
        assert abs(plus * minus - mode.rabi ** 2 / 4.0) <= 1e-12 * scale ** 2
        if plus != minus:
            c_plus, c_minus = mode_coefficients(plus, minus)
            assert abs(c_plus + c_minus - 1.0) <= 1e-12
            assert abs(c_plus * plus + c_minus * minus) <= 1e-12 * scale


@given(linewidth=st.floats(1e-3, 2.0), rabi=st.floats(0.0, 2.0),
       residual=st.floats(0.0, 0.5), detuning=st.floats(-1.0, 1.0))
@settings(max_examples=150, deadline=None)
def test_population_stays_in_unit_interval(linewidth, rabi, residual,
                                           detuning):
    mode = QuasiMode(center=1.0 + detuning, linewidth=linewidth, rabi=rabi,
                     residual_width=residual, transition_frequency=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        res = evolve_strong(mode, np.linspace(0.0, 30.0, 60))
    assert np.all(res.population >= -1e-12)
    assert np.all(res.population <= 1.0 + 1e-9)


def test_regime_classifier_and_warning():
    strong = QuasiMode(center=1.0, linewidth=0.05, rabi=0.5,
                       transition_frequency=1.0)
    weak = QuasiMode(center=1.0, linewidth=2.0, rabi=0.1,
                     transition_frequency=1.0)
    far = QuasiMode(center=1.0, linewidth=0.05, rabi=0.5,
                    transition_frequency=1.0 - 500.0)
    assert classify_regime(strong) == "strong"
    assert classify_regime(weak) == "weak"
    assert classify_regime(far) == "weak"   # detuning dominates
    between = QuasiMode(center=1.0, linewidth=0.2, rabi=0.5,
                        transition_frequency=1.0 - 0.9)
    assert classify_regime(between) == "intermediate"
    with pytest.warns(RegimeWarning):
        evolve_strong(weak, np.linspace(0.0, 1.0, 4))


def test_strong_force_envelope_shape():
    mode = QuasiMode(center=1.0, linewidth=0.02, rabi=0.4,
                     residual_width=0.01, transition_frequency=0.98)
    t = np.linspace(0.0, 200.0, 2000)
    res = evolve_strong(mode, t)
    # force envelope oscillates under an exponentially decaying envelope
    assert res.force_scale[0] == pytest.approx(0.0, abs=1e-15)
    envelope = 2.0 * np.exp(-0.5 * (0.02 + 0.01) * t)
    assert np.all(res.force_scale <= envelope + 1e-12)
    assert np.count_nonzero(np.diff(np.sign(np.diff(res.force_scale)))) > 10


def test_parameter_validation():
    with pytest.raises(ValueError):
        TwoLevelNearHalfSpace(0.0, 1.0, SURFACE, 1.0)
    with pytest.raises(ValueError):
        TwoLevelNearHalfSpace(1.0, -1.0, SURFACE, 1.0)
    with pytest.raises(ValueError):
        TwoLevelNearHalfSpace(1.0, 1.0, SURFACE, 0.0)
    with pytest.raises(ValueError):
        QuasiMode(center=1.0, linewidth=-0.1, rabi=0.1)
    sys = system(1.0)
    assert sys.in_nonretarded_regime
    assert sys.nonretarded_parameter == pytest.approx(Z_NEAR)
