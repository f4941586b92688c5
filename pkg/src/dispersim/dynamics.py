"""Excited two-level atom near a dielectric half space, and coupled
atom-quasi-mode dynamics.

The nonretarded-regime closed forms give the body-induced shift and width
of the transition and the resonant/off-resonant force components on the
upper state; the shift equation is implicit and solved by damped fixed-point
iteration.  The time-domain part covers the weak-coupling exponential decay
law and the exact two-branch amplitude evolution for a Lorentzian
quasi-mode, whose strong-coupling limit shows vacuum Rabi oscillations of
the force envelope.

Natural units (hbar = c = eps0 = 1); the dipole weight is
D = |d01|^2 + (d01 . e_z)^2.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import materials as mat
from .errors import IterationError, RegimeWarning
from .quadrature import QuadSpec, integrate_semiinf

import warnings


@dataclass(frozen=True)
class TwoLevelNearHalfSpace:
    """Two-level atom at distance z in front of a dielectric half space.

    The nonretarded closed forms require z * omega10 << 1; the
    ``nonretarded_parameter`` property records that product.
    """

    transition_frequency: float
    dipole_weight: float
    material: object
    z_position: float

    def __post_init__(self):
        if self.transition_frequency <= 0:
            raise ValueError("transition frequency must be positive")
        if self.dipole_weight < 0:
            raise ValueError("dipole weight must be >= 0")
        if self.z_position <= 0:
            raise ValueError("atom-surface distance must be positive")

    @property
    def nonretarded_parameter(self):
        return self.z_position * self.transition_frequency

    @property
    def in_nonretarded_regime(self):
        return self.nonretarded_parameter < 0.1

    @property
    def coupling(self):
        """D/(32 pi z^3), the prefactor of the shift equation."""
        return self.dipole_weight / (32.0 * math.pi * self.z_position ** 3)


def surface_plasmon_frequency(material):
    """sqrt(wT^2 + wP^2/2) of the permittivity resonance."""
    p = material.epsilon
    return math.sqrt(p.resonance ** 2 + p.plasma ** 2 / 2.0)


def _shift_map(sys, delta):
    eps = mat.epsilon_complex(sys.material,
                              sys.transition_frequency + delta)
    return -sys.coupling * (abs(eps) ** 2 - 1.0) / abs(eps + 1.0) ** 2


def solve_shift(sys, tol=1e-10, max_iter=200):
    """Body-induced transition-frequency shift from its implicit equation.

    Plain fixed-point iteration on delta = m(delta), with 0.5 damping once
    successive residuals alternate in sign; converged when the update falls
    below tol * omega10.
    """
    if sys.dipole_weight == 0.0:
        return 0.0
    delta = 0.0
    last_residual = None
    for _ in range(max_iter):
        target = _shift_map(sys, delta)
        residual = target - delta
        if abs(residual) < tol * sys.transition_frequency:
            return target
        if last_residual is not None and residual * last_residual < 0.0:
            delta = delta + 0.5 * residual
        else:
            delta = target
        last_residual = residual
    raise IterationError("shift iteration did not converge",
                         residual=residual,
                         diagnostics={"delta": delta,
                                      "max_iter": max_iter})


def width(sys, shift):
    """Transition width Gamma = (D/(8 pi z^3)) Im eps(w~)/|eps(w~)+1|^2."""
    omega = sys.transition_frequency + shift
    eps = mat.epsilon_complex(sys.material, omega)
    return 4.0 * sys.coupling * eps.imag / abs(eps + 1.0) ** 2


def resonant_force(sys, self_consistent=True, tol=1e-10, max_iter=200):
    """Resonant force component on the upper state (positive = repulsive).

    F = -(3 D/(32 pi z^4)) (|eps(W)|^2 - 1)/|eps(W) + 1|^2 with the complex
    argument W = omega10 + shift + i Gamma/2.  With self_consistent=False
    the shift and width are dropped (the static perturbative result).
    """
    if self_consistent:
        shift = solve_shift(sys, tol, max_iter)
        gamma = width(sys, shift)
    else:
        shift = 0.0
        gamma = 0.0
    omega = complex(sys.transition_frequency + shift, 0.5 * gamma)
    eps = mat.epsilon_complex(sys.material, omega)
    return -3.0 * sys.coupling / sys.z_position \
        * (abs(eps) ** 2 - 1.0) / abs(eps + 1.0) ** 2


def offresonant_force(sys, include_width=True, self_consistent=True,
                      spec=None, tol=1e-10, max_iter=200):
    """Off-resonant force component on the upper state.

    (3 D/(32 pi^2 z^4)) * int (eps(i xi)-1)/(eps(i xi)+1) * L(xi) d xi with
    the shifted, width-broadened Lorentzian weight L.  The width enters only
    at second order; include_width=False evaluates the same expression at
    Gamma = 0 (paired runs isolate the broadening effect).
    """
    spec = spec or QuadSpec()
    if self_consistent:
        shift = solve_shift(sys, tol, max_iter)
        gamma = width(sys, shift) if include_width else 0.0
    else:
        shift, gamma = 0.0, 0.0
    omega = sys.transition_frequency + shift

    def f(xi):
        eps = mat.epsilon_imag_axis(sys.material, xi)
        lorentz = omega / (omega ** 2 + (xi + 0.5 * gamma) ** 2) \
            * (omega ** 2 + xi ** 2 + 0.25 * gamma ** 2) \
            / (omega ** 2 + (xi - 0.5 * gamma) ** 2)
        return (eps - 1.0) / (eps + 1.0) * lorentz

    scale = min([omega] + mat.resonance_frequencies(sys.material))
    value = integrate_semiinf(f, spec, scale=scale).require(
        "offresonant force")
    return 3.0 * sys.coupling / (math.pi * sys.z_position) * value


@dataclass(frozen=True)
class QuasiMode:
    """Lorentzian quasi-mode of the body-assisted field, coupled to a
    two-level transition.

    Attributes
    ----------
    center : float
        Mode frequency omega_nu.
    linewidth : float
        Mode width gamma_nu (> 0).
    rabi : float
        Vacuum Rabi frequency Omega_R (>= 0).
    residual_width : float
        Upper-level width from the residual (Markovian) part of the field.
    residual_shift : float
        Upper-level shift from the residual part of the field.
    transition_frequency : float
        Bare atomic frequency omega10; the detuning is
        center - (omega10 + residual_shift).
    """

    center: float
    linewidth: float
    rabi: float
    residual_width: float = 0.0
    residual_shift: float = 0.0
    transition_frequency: float | None = None

    def __post_init__(self):
        # linewidth 0 is the idealized undamped mode (exact Rabi oscillation)
        if self.linewidth < 0:
            raise ValueError("mode linewidth must be >= 0")
        if self.rabi < 0:
            raise ValueError("Rabi frequency must be >= 0")
        if self.residual_width < 0:
            raise ValueError("residual width must be >= 0")

    @property
    def detuning(self):
        if self.transition_frequency is None:
            return 0.0
        return self.center - (self.transition_frequency + self.residual_shift)


def classify_regime(mode):
    """weak / strong / intermediate per the flat-spectrum and detuning tests.

    Weak: gamma_nu > 2 Omega_R or |detuning| >> 2 Omega_R^2/gamma_nu;
    strong: gamma_nu <= 2 Omega_R and |detuning| << 2 Omega_R^2/gamma_nu.
    The >>/<< cuts are taken as factors of 10.
    """
    if mode.rabi == 0.0:
        return "weak"
    detuning_scale = math.inf if mode.linewidth == 0.0 \
        else 2.0 * mode.rabi ** 2 / mode.linewidth
    if mode.linewidth > 2.0 * mode.rabi \
            or abs(mode.detuning) >= 10.0 * detuning_scale:
        return "weak"
    if abs(mode.detuning) <= 0.1 * detuning_scale:
        return "strong"
    return "intermediate"


def mode_frequencies(mode):
    """Exact complex branch frequencies Omega_+/- of the amplitude equation.

    Roots of x^2 + S x + Omega_R^2/4 with
    S = i*detuning + (gamma_nu - residual_width)/2; they satisfy
    Omega_+ + Omega_- = -S and Omega_+ Omega_- = Omega_R^2/4.  Labels are
    chosen so that Omega_+ is the slowly decaying branch (its coefficient
    approaches 1 in the weak-coupling limit) and reduces to -i*Omega_R/2 in
    the undamped resonant case.
    """
    s = complex(0.5 * (mode.linewidth - mode.residual_width), mode.detuning)
    w = cmath.sqrt(s * s - mode.rabi ** 2)
    plus = 0.5 * (-s - w)
    minus = 0.5 * (-s + w)
    if abs(plus) > abs(minus):
        plus, minus = minus, plus
    return plus, minus


def mode_coefficients(plus, minus):
    """Initial-condition weights c_+/- = Omega_-/+ / (Omega_-/+ - Omega_+/-).

    They obey c_+ + c_- = 1 and c_+ Omega_+ + c_- Omega_- = 0 (amplitude 1,
    zero derivative at t0).
    """
    diff = minus - plus
    if diff == 0:
        raise ZeroDivisionError("confluent branches: use the critical form")
    return minus / diff, -plus / diff


@dataclass
class EvolutionResult:
    times: np.ndarray
    population: np.ndarray
    force_scale: np.ndarray
    regime: str
    force: np.ndarray | None = None


def evolve_weak(force, rate, t_grid, t0=0.0):
    """Weak-coupling decay: force and population scale as exp(-Gamma t)."""
    if rate < 0:
        raise ValueError("decay rate must be >= 0")
    t = np.asarray(t_grid, dtype=float)
    scale = np.exp(-rate * (t - t0))
    return EvolutionResult(times=t, population=scale.copy(),
                           force_scale=scale.copy(), regime="weak",
                           force=force * scale)


def evolve_strong(mode, t_grid, t0=0.0):
    """Exact amplitude evolution and strong-coupling force envelope.

    The upper-state amplitude is phi_1(t) = c_+ exp(Omega_+ t) +
    c_- exp(Omega_- t) (confluent case handled in the limit), the population
    |psi_1|^2 = exp(-residual_width t) |phi_1|^2.  The force envelope is
    2 exp(-(gamma_nu + residual_width) t/2) sin^2(Omega t/2) times the
    detuning-dependent prefactor; outside the strong-coupling window a
    RegimeWarning is emitted and the exact branches are still used.
    """
    regime = classify_regime(mode)
    if regime != "strong":
        warnings.warn(f"quasi-mode parameters are in the {regime} regime",
                      RegimeWarning, stacklevel=2)
    t = np.asarray(t_grid, dtype=float)
    dt = t - t0
    plus, minus = mode_frequencies(mode)
    if abs(minus - plus) <= 1e-13 * max(abs(plus), abs(minus), 1e-300):
        mean = 0.5 * (plus + minus)
        phi = (1.0 - mean * dt) * np.exp(mean * dt)
    else:
        c_plus, c_minus = mode_coefficients(plus, minus)
        phi = c_plus * np.exp(plus * dt) + c_minus * np.exp(minus * dt)
    population = np.exp(-mode.residual_width * dt) * np.abs(phi) ** 2

    g = mode.linewidth - mode.residual_width
    disc = mode.rabi ** 2 + mode.detuning ** 2 - 0.25 * g ** 2
    omega = cmath.sqrt(complex(disc))
    numerator = mode.detuning ** 2 - 0.25 * g ** 2
    prefactor = numerator / (mode.rabi ** 2 + numerator) \
        if mode.rabi ** 2 + numerator != 0 else 0.0
    envelope = 2.0 * np.exp(-0.5 * (mode.linewidth + mode.residual_width)
                            * dt)
    oscillation = np.real(np.sin(0.5 * omega * dt) ** 2)
    force_scale = envelope * oscillation * prefactor
    return EvolutionResult(times=t, population=population,
                           force_scale=force_scale, regime=regime)
