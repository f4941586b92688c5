"""Frequency-dependent magneto-electric response models.

Natural units are used throughout the library: hbar = c = eps0 = mu0 = 1,
frequencies measured in a common reference omega_ref, lengths in
c/omega_ref.  Response functions are evaluated on the imaginary frequency
axis (omega = i*xi, xi >= 0) where every single-resonance model is real,
>= 1 and monotonically decaying, and in the upper complex half plane.

The ideal-limit markers (perfect conductor, perfectly permeable medium)
never evaluate a response function; consumers assign their reflection
coefficients directly.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import UnsupportedMaterialError, UnphysicalParameterError


@dataclass(frozen=True)
class DrudeLorentzParams:
    """Single-resonance response: 1 + plasma^2/(resonance^2 - w^2 - i*damping*w).

    ``resonance = 0`` gives the Drude metal, whose imaginary-axis response
    diverges integrably as plasma^2/(damping*xi) for xi -> 0.
    """

    plasma: float
    resonance: float
    damping: float

    def __post_init__(self):
        if self.plasma < 0:
            raise UnphysicalParameterError("plasma frequency must be >= 0")
        if self.resonance < 0:
            raise UnphysicalParameterError("resonance frequency must be >= 0")
        if self.damping < 0:
            raise UnphysicalParameterError("damping must be >= 0")


TRIVIAL_RESPONSE = DrudeLorentzParams(0.0, 1.0, 0.0)


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class ConstantStatic:
    """Frequency-independent permittivity/permeability, both >= 1."""

    epsilon: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if self.epsilon < 1.0 or self.mu < 1.0:
            raise UnphysicalParameterError(
                "constant response requires epsilon >= 1 and mu >= 1")


@dataclass(frozen=True)
class DrudeLorentz:
    epsilon: DrudeLorentzParams = TRIVIAL_RESPONSE
    mu: DrudeLorentzParams = TRIVIAL_RESPONSE


@dataclass(frozen=True)
class PerfectConductor:
    pass


@dataclass(frozen=True)
class PerfectlyPermeable:
    pass


IDEAL_MARKERS = (PerfectConductor, PerfectlyPermeable)


def is_ideal(model):
    return isinstance(model, IDEAL_MARKERS)


def _require_evaluable(model):
    if is_ideal(model):
        raise UnsupportedMaterialError(
            f"{type(model).__name__} has no response function; handle it at "
            "the reflection level")


def _dl_imag_axis(params, xi):
    # 1 + wp^2/(wt^2 + xi^2 + gamma*xi), real and >= 1 for xi >= 0
    return 1.0 + params.plasma ** 2 / (
        params.resonance ** 2 + xi * (xi + params.damping))


def _dl_complex(params, omega):
    omega = np.asarray(omega, dtype=complex)
    return 1.0 + params.plasma ** 2 / (
        params.resonance ** 2 - omega ** 2 - 1j * params.damping * omega)


def epsilon_imag_axis(model, xi):
    """Permittivity at omega = i*xi for xi >= 0 (scalar or array)."""
    _require_evaluable(model)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ValueError("xi must be non-negative")
    if isinstance(model, Vacuum):
        return np.ones_like(xi) if xi.ndim else 1.0
    if isinstance(model, ConstantStatic):
        return np.full_like(xi, model.epsilon) if xi.ndim else model.epsilon
    out = _dl_imag_axis(model.epsilon, xi)
    return out if xi.ndim else float(out)


def mu_imag_axis(model, xi):
    """Permeability at omega = i*xi for xi >= 0 (scalar or array)."""
    _require_evaluable(model)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ValueError("xi must be non-negative")
    if isinstance(model, Vacuum):
        return np.ones_like(xi) if xi.ndim else 1.0
    if isinstance(model, ConstantStatic):
        return np.full_like(xi, model.mu) if xi.ndim else model.mu
    out = _dl_imag_axis(model.mu, xi)
    return out if xi.ndim else float(out)


def epsilon_complex(model, omega):
    """Permittivity at complex frequency in the upper half plane.

    On the imaginary axis this reduces (to machine precision) to
    ``epsilon_imag_axis``; the reality condition eps*(omega) = eps(-omega*)
    holds by construction.
    """
    _require_evaluable(model)
    omega = np.asarray(omega, dtype=complex)
    if np.any(omega.imag < -1e-300):
        raise ValueError("omega must lie in the closed upper half plane")
    if isinstance(model, Vacuum):
        out = np.ones_like(omega)
    elif isinstance(model, ConstantStatic):
        out = np.full_like(omega, model.epsilon)
    else:
        out = _dl_complex(model.epsilon, omega)
    return out if out.ndim else complex(out)


def static_epsilon(model):
    """eps(0); math.inf for the Drude metal (zero resonance frequency)."""
    _require_evaluable(model)
    if isinstance(model, Vacuum):
        return 1.0
    if isinstance(model, ConstantStatic):
        return model.epsilon
    p = model.epsilon
    if p.resonance == 0.0 and p.plasma > 0.0:
        return math.inf
    return 1.0 + (p.plasma / p.resonance) ** 2 if p.plasma else 1.0


def static_mu(model):
    """mu(0); math.inf for a zero-resonance permeability."""
    _require_evaluable(model)
    if isinstance(model, Vacuum):
        return 1.0
    if isinstance(model, ConstantStatic):
        return model.mu
    p = model.mu
    if p.resonance == 0.0 and p.plasma > 0.0:
        return math.inf
    return 1.0 + (p.plasma / p.resonance) ** 2 if p.plasma else 1.0


def zero_frequency_pole(params, prescription):
    """Divergence of a response function at xi -> 0 as (order, coefficient).

    Returns (0, value) for a regular response.  A finite-damping Drude metal
    has a first-order pole coeff/xi with coeff = plasma^2/damping under the
    'drude' prescription; under the 'plasma' prescription (damping taken to
    zero first) the pole is second order with coefficient plasma^2.
    """
    if params.resonance > 0.0 or params.plasma == 0.0:
        value = 1.0 + (params.plasma / params.resonance) ** 2 \
            if params.plasma else 1.0
        return 0, value
    if params.damping == 0.0 or prescription == "plasma":
        return 2, params.plasma ** 2
    return 1, params.plasma ** 2 / params.damping


def zero_frequency_response(model, prescription="drude"):
    """(eps, mu) at xi = 0 in pole form, each as (order, coefficient).

    ``prescription`` selects how the zero-frequency term of a Matsubara sum
    treats metallic absorption; 'drude' keeps the finite damping, 'plasma'
    sends it to zero first.  The two choices coincide for every regular
    (dielectric) response.
    """
    _require_evaluable(model)
    if prescription not in ("drude", "plasma"):
        raise ValueError(f"unknown zero-frequency prescription {prescription!r}")
    if isinstance(model, Vacuum):
        return (0, 1.0), (0, 1.0)
    if isinstance(model, ConstantStatic):
        return (0, model.epsilon), (0, model.mu)
    return (zero_frequency_pole(model.epsilon, prescription),
            zero_frequency_pole(model.mu, prescription))


def xi2_eps_mu_zero_limit(model, prescription="drude"):
    """Limit of xi^2 * eps(i xi) * mu(i xi) as xi -> 0.

    This is the quantity entering the propagation constant of the n = 0
    Matsubara term.  It vanishes for all regular responses and for the
    finite-damping Drude metal; the 'plasma' prescription yields the squared
    plasma frequency instead.
    """
    (eo, ec), (mo, mc) = zero_frequency_response(model, prescription)
    order = eo + mo
    if order < 2:
        return 0.0
    if order == 2:
        return ec * mc
    return math.inf


def resonance_frequencies(model):
    """Positive characteristic frequencies of the model (quadrature scales)."""
    if is_ideal(model) or isinstance(model, (Vacuum, ConstantStatic)):
        return []
    freqs = []
    for p in (model.epsilon, model.mu):
        if p.plasma > 0.0:
            freqs.append(p.resonance if p.resonance > 0.0 else p.plasma)
    return freqs
