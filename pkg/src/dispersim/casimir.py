"""Casimir stress and force per unit area between planar stacks.

Natural units (hbar = c = eps0 = mu0 = 1); pressures are energies per
length cubed.  The sign convention is positive = attraction, i.e. the
vacuum pressure between ideal mirrors at gap d is +pi^2/(240 d^4).

The force per unit area is the zz stress evaluated at the wall surface.
The single-wall stress terms, which diverge at the walls for
frequency-independent response, are regularized by subtracting the
identical contribution at the back face of the wall (where the interspace
medium extends to infinity); what survives of them is exponentially small
in the gap and vanishes identically for a vacuum interspace.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import materials as mat
from .layers import scenario_reflections, stress_coefficients, \
    cavity_stress_kernel
from .quadrature import QuadSpec, integrate_xi_q, integrate_semiinf, \
    matsubara_sum

SIGN_CONVENTION = "positive-attraction"


@dataclass(frozen=True)
class ZeroTemperature:
    pass


@dataclass(frozen=True)
class FiniteTemperature:
    """Temperature in units of hbar*omega_ref/k_B."""

    temperature: float

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("finite temperature must be positive")


@dataclass
class PressureResult:
    value: float
    error: float
    nodes: int
    converged: bool
    sign_convention: str = SIGN_CONVENTION


def _force_kernel(scenario, xi, q, zero_mode):
    """Wall-surface stress kernel: all contributions carry exp(-2 b d).

    The round-trip terms are kept as they stand; of the single-wall terms
    only the back-face-regularized remainder survives,
    r_minus * (1 + r_plus^2) * exp(-2 b d) / D per polarization.
    """
    q_arr = np.asarray(q, dtype=float)
    refl = scenario_reflections(scenario, xi, q_arr, zero_mode)
    plus_c, minus_c, single = stress_coefficients(scenario, xi, q_arr, refl,
                                                  zero_mode)
    roundtrip = refl["decay_gap"]
    g = (-2.0 * plus_c * refl["r_s_plus"] * refl["r_s_minus"] / refl["D_s"]
         - 2.0 * minus_c * refl["r_p_plus"] * refl["r_p_minus"] / refl["D_p"])
    g = g + single * (
        refl["r_s_minus"] * (1.0 + refl["r_s_plus"] ** 2) / refl["D_s"]
        - refl["r_p_minus"] * (1.0 + refl["r_p_plus"] ** 2) / refl["D_p"])
    return g * roundtrip, refl["b"]


def _mu_medium(scenario, xi, zero_mode):
    if xi == 0:
        order, coeff = mat.zero_frequency_response(scenario.medium,
                                                   zero_mode)[1]
        return math.inf if order else coeff
    return mat.mu_imag_axis(scenario.medium, xi)


def stress_zz(scenario, z, temperature=ZeroTemperature(), spec=None,
              zero_mode="drude"):
    """zz component of the vacuum stress at height z inside the interspace.

    Keeps all four kernel terms, including the single-wall ones that
    diverge as z approaches a wall; intended for interior-z diagnostics.
    Raises ConvergenceError if the quadrature does not settle.
    """
    spec = spec or QuadSpec()
    b_scale = 1.0 / (2.0 * min(z, scenario.gap - z))

    def kernel(xi, q):
        g = cavity_stress_kernel(scenario, z, xi, q, zero_mode)
        b = scenario_reflections(scenario, xi, q, zero_mode)["b"]
        return (q / b) * _mu_medium(scenario, xi, zero_mode) * g

    if isinstance(temperature, ZeroTemperature):
        res = integrate_xi_q(
            lambda xi, q: -kernel(xi, q) / (8.0 * math.pi ** 2),
            spec, xi_scale=scenario.frequency_scale(), b_scale=b_scale,
            refraction=scenario.refraction)
        return res.require("stress_zz")
    return _matsubara_generic(kernel, scenario, temperature.temperature,
                              spec, b_scale).require("stress_zz")


def casimir_pressure(scenario, temperature=ZeroTemperature(), spec=None,
                     zero_mode="drude"):
    """Casimir force per unit area on the right stack (positive = attraction).

    Parameters
    ----------
    scenario : PlanarScenario
    temperature : ZeroTemperature or FiniteTemperature
    spec : QuadSpec, optional
    zero_mode : str
        Prescription for the zero-frequency Matsubara term of metallic
        response ('drude' keeps the finite damping, 'plasma' drops it).
        Irrelevant at zero temperature and for non-metallic stacks.

    Returns
    -------
    PressureResult
    """
    spec = spec or QuadSpec()
    b_scale = 1.0 / (2.0 * scenario.gap)

    def kernel(xi, q):
        g, b = _force_kernel(scenario, xi, q, zero_mode)
        return (q / b) * _mu_medium(scenario, xi, zero_mode) * g

    if isinstance(temperature, ZeroTemperature):
        res = integrate_xi_q(
            lambda xi, q: -kernel(xi, q) / (8.0 * math.pi ** 2),
            spec, xi_scale=scenario.frequency_scale(), b_scale=b_scale,
            refraction=scenario.refraction)
    else:
        res = _matsubara_generic(kernel, scenario, temperature.temperature,
                                 spec, b_scale)
    return PressureResult(res.value, res.error, res.nodes, res.converged)


def _matsubara_generic(kernel, scenario, temperature, spec, b_scale):
    """2 k_B T * sum' over Matsubara frequencies of the q-integrated kernel."""
    inner_spec = spec.tighter(0.1)
    state = {"nodes": 0, "ok": True}

    def term(xi):
        n_xi = 0.0 if xi == 0 else float(scenario.refraction(xi))
        b0 = n_xi * xi

        def g(u):
            b = b0 + u
            q = np.sqrt(u * (u + 2.0 * b0))
            return kernel(xi, q) * (b / q)

        res = integrate_semiinf(g, inner_spec, scale=b_scale)
        state["nodes"] += res.nodes
        state["ok"] = state["ok"] and res.converged
        return -res.value / (8.0 * math.pi)

    res = matsubara_sum(term, temperature, spec)
    res.nodes += state["nodes"]
    res.converged = res.converged and state["ok"]
    return res


def matsubara_pressure(scenario, temperature, spec=None, zero_mode="drude"):
    """Finite-temperature pressure as an explicit Matsubara sum.

    Equivalent to casimir_pressure with FiniteTemperature; exposed
    separately so the n = 0 term and the prescription switch can be
    examined directly.
    """
    return casimir_pressure(scenario, FiniteTemperature(temperature), spec,
                            zero_mode)


def matsubara_zero_term(scenario, temperature, spec=None, zero_mode="drude"):
    """The n = 0 contribution alone: k_B T * f(0) (classical limit)."""
    spec = spec or QuadSpec()
    b_scale = 1.0 / (2.0 * scenario.gap)

    def g(q):
        gk, b = _force_kernel(scenario, 0.0, q, zero_mode)
        return (q / b) * _mu_medium(scenario, 0.0, zero_mode) * gk

    res = integrate_semiinf(g, spec, scale=b_scale)
    return -temperature * res.require("matsubara zero term") / (8.0 * math.pi)


def perfect_mirror_pressure(eps_static, mu_static, gap):
    """Ideal-mirror pressure with a static magneto-electric interspace.

    (pi^2/240) * sqrt(mu/eps) * (2/3 + 1/(3 eps mu)) / gap^4; reduces to
    the classic pi^2/(240 gap^4) for an empty interspace.
    """
    if eps_static < 1 or mu_static < 1:
        raise ValueError("static response values must be >= 1")
    if gap <= 0:
        raise ValueError("gap must be positive")
    factor = math.sqrt(mu_static / eps_static) * (
        2.0 / 3.0 + 1.0 / (3.0 * eps_static * mu_static))
    return math.pi ** 2 / 240.0 * factor / gap ** 4


def plate_in_cavity_force(eps_static, mu_static, d_left, d_right):
    """Force on an ideal plate inside an ideal cavity filled with a medium.

    Positive values push the plate toward the right wall.
    """
    if d_left <= 0 or d_right <= 0:
        raise ValueError("wall separations must be positive")
    factor = math.sqrt(mu_static / eps_static) * (
        2.0 / 3.0 + 1.0 / (3.0 * eps_static * mu_static))
    return math.pi ** 2 / 240.0 * factor * (d_right ** -4 - d_left ** -4)


def plate_in_cavity_force_minkowski(eps_static, d_left, d_right):
    """Same configuration from the Minkowski stress tensor (mu = 1).

    Overestimates the magnitude for eps > 1 because it underestimates the
    screening by the interspace medium.
    """
    if d_left <= 0 or d_right <= 0:
        raise ValueError("wall separations must be positive")
    return (math.pi ** 2 / 240.0 / math.sqrt(eps_static)
            * (d_right ** -4 - d_left ** -4))
