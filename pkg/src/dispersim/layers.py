"""Planar multilayer geometry and imaginary-frequency wave kernels.

Provides the layer-stack data model, the backward reflection recurrence for
s- and p-polarized waves on the imaginary frequency axis, the free-space
Green tensor, and the interspace kernels used by the Casimir stress and the
atom-surface potential.

The recurrence is evaluated from the terminal half space inward; on the
imaginary axis every exponential decays, so no transfer-matrix
reformulation is needed in production code (a transfer matrix exists only
as a test oracle).
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from . import materials as mat
from .errors import (DegeneratePointError, InvalidStackError,
                     UnphysicalParameterError, CoincidenceError)

# exp(-x) for x beyond this is flushed to zero: layers thicker than ~350
# decay lengths are exactly half spaces at double precision
_EXP_CUTOFF = 700.0


class Polarization(str, Enum):
    S = "s"
    P = "p"


def _pol(polarization):
    p = Polarization(polarization)
    return p


def decaying_exp(exponent):
    """exp(-exponent) with large exponents flushed to exactly zero."""
    exponent = np.asarray(exponent, dtype=float)
    safe = np.minimum(exponent, _EXP_CUTOFF)
    out = np.where(exponent >= _EXP_CUTOFF, 0.0, np.exp(-safe))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Layer:
    """Homogeneous layer; thickness None marks the terminal half space."""

    material: object
    thickness: float | None = None

    def __post_init__(self):
        if self.thickness is not None and self.thickness <= 0:
            raise InvalidStackError("finite layer thickness must be positive")

    @property
    def semi_infinite(self):
        return self.thickness is None


@dataclass(frozen=True)
class LayerStack:
    """Ordered layers, interspace-adjacent first, terminated by a half space."""

    layers: tuple

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise InvalidStackError("stack must contain at least one layer")
        if not layers[-1].semi_infinite:
            raise InvalidStackError("terminal layer must be semi-infinite")
        for layer in layers[:-1]:
            if layer.semi_infinite:
                raise InvalidStackError(
                    "only the terminal layer may be semi-infinite")
        if any(mat.is_ideal(l.material) for l in layers) and len(layers) > 1:
            raise InvalidStackError(
                "ideal-limit markers are legal only as a single-layer stack")

    @classmethod
    def half_space(cls, material):
        return cls((Layer(material),))

    @classmethod
    def slab(cls, material, thickness, backing=None):
        backing = backing if backing is not None else mat.Vacuum()
        return cls((Layer(material, thickness), Layer(backing)))

    @property
    def ideal(self):
        return mat.is_ideal(self.layers[0].material)

    def resonance_frequencies(self):
        freqs = []
        for layer in self.layers:
            if not mat.is_ideal(layer.material):
                freqs.extend(mat.resonance_frequencies(layer.material))
        return freqs


@dataclass(frozen=True)
class PlanarScenario:
    """Two stacks facing each other across an interspace medium of width gap."""

    left: LayerStack
    right: LayerStack
    medium: object
    gap: float

    def __post_init__(self):
        if self.gap <= 0:
            raise InvalidStackError("interspace width must be positive")
        if mat.is_ideal(self.medium):
            raise InvalidStackError(
                "interspace material must be evaluable on the imaginary axis")

    def refraction(self, xi):
        return np.sqrt(mat.epsilon_imag_axis(self.medium, xi)
                       * mat.mu_imag_axis(self.medium, xi))

    def resonance_frequencies(self):
        freqs = list(mat.resonance_frequencies(self.medium)) \
            if not isinstance(self.medium, (mat.Vacuum, mat.ConstantStatic)) \
            else []
        freqs.extend(self.left.resonance_frequencies())
        freqs.extend(self.right.resonance_frequencies())
        return freqs

    def frequency_scale(self):
        """Decay scale for the outer xi integral of interspace kernels."""
        freqs = self.resonance_frequencies()
        scales = [f for f in freqs if f > 0]
        scales.append(1.0 / (2.0 * self.gap))
        return min(scales)


def propagation_constant(xi, q, epsilon, mu):
    """b = sqrt(eps*mu*xi^2 + q^2), the imaginary-axis normal wavenumber."""
    xi = np.asarray(xi, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(xi < 0) or np.any(q < 0):
        raise ValueError("xi and q must be non-negative")
    b = np.sqrt(epsilon * mu * xi ** 2 + q ** 2)
    if np.any(b == 0):
        raise DegeneratePointError("xi and q must not both vanish")
    return b if b.ndim else float(b)


def _ratio(lo, hi):
    """Coefficient ratio c_lo/c_hi for pole-form pairs (order, coefficient)."""
    lo_order, lo_coeff = lo
    hi_order, hi_coeff = hi
    if lo_order == hi_order:
        return lo_coeff / hi_coeff
    return math.inf if lo_order > hi_order else 0.0


def _recurrence(b_list, coeff_list, n2xi2_list, thickness_list):
    """Backward recurrence with r = 0 behind the terminal layer.

    ``b_list`` holds the normal wavenumbers of ambient + stack layers,
    ``coeff_list`` the polarization coefficients (mu for s, eps for p),
    ``n2xi2_list`` the q-independent parts eps*mu*xi^2 of the squared
    wavenumbers, from which b_hi - b_lo is formed without cancellation: the
    Fresnel numerator c_hi*b_lo - c_lo*b_hi is evaluated as
    b_lo*(c_hi - c_lo) - c_lo*(n2xi2_hi - n2xi2_lo)/(b_hi + b_lo).
    ``thickness_list`` holds the layer thicknesses (None for half spaces).
    """
    n_layers = len(b_list)
    r = np.zeros_like(np.asarray(b_list[-1], dtype=float))
    for j in range(n_layers - 2, -1, -1):
        b_lo, b_hi = b_list[j], b_list[j + 1]
        c_lo, c_hi = coeff_list[j], coeff_list[j + 1]
        d_hi = thickness_list[j + 1]
        decay = 1.0 if d_hi is None else decaying_exp(2.0 * b_hi * d_hi)
        minus = b_lo * (c_hi - c_lo) \
            - c_lo * (n2xi2_list[j + 1] - n2xi2_list[j]) / (b_hi + b_lo)
        plus = c_hi * b_lo + c_lo * b_hi
        r = (minus + plus * decay * r) / (plus + minus * decay * r)
    return r


def _recurrence_zero(b_list, ratio_list, n2xi2_list, thickness_list):
    """Zero-frequency recurrence in coefficient-ratio form.

    ``ratio_list[j]`` is the limit of c_j/c_{j+1}; infinities (interfaces
    against a diverging response) pin the reflection to -1 or +1.
    """
    n_layers = len(b_list)
    r = np.zeros_like(np.asarray(b_list[-1], dtype=float))
    for j in range(n_layers - 2, -1, -1):
        b_lo, b_hi = b_list[j], b_list[j + 1]
        rho = ratio_list[j]
        d_hi = thickness_list[j + 1]
        decay = 1.0 if d_hi is None else decaying_exp(2.0 * b_hi * d_hi)
        if math.isinf(rho):
            r = np.full_like(r, -1.0)
            continue
        # rho = c_lo/c_hi, so the numerator normalized by c_hi reads
        # b_lo*(1 - rho) - rho*(b_hi - b_lo)
        db = (n2xi2_list[j + 1] - n2xi2_list[j]) / (b_hi + b_lo)
        with np.errstate(invalid="ignore"):
            minus = b_lo * (1.0 - rho) - rho * db
            plus = b_lo + rho * b_hi
            r_new = (minus + plus * decay * r) / (plus + minus * decay * r)
        bad = np.isinf(np.broadcast_to(rho * b_hi, np.shape(r_new)))
        r = np.where(bad, -1.0, r_new)
    return r


def _is_vacuum_stack(stack):
    return len(stack.layers) == 1 \
        and isinstance(stack.layers[0].material, mat.Vacuum)


def _stack_reflections(stack, ambient, xi, q_arr, zero_mode="drude"):
    """(r_s, r_p) of a stack in one backward pass (no input validation)."""
    if stack.ideal:
        sign = 1.0 if isinstance(stack.layers[0].material,
                                 mat.PerfectConductor) else -1.0
        ones = np.ones_like(q_arr)
        return -sign * ones, sign * ones
    if _is_vacuum_stack(stack) and isinstance(ambient, mat.Vacuum):
        zeros = np.zeros_like(q_arr)
        return zeros, zeros
    mats = [ambient] + [layer.material for layer in stack.layers]
    thicknesses = [None] + [layer.thickness for layer in stack.layers]
    if xi == 0:
        zero = [mat.zero_frequency_response(m, zero_mode) for m in mats]
        b_list, n2xi2_list = [], []
        for m in mats:
            w = mat.xi2_eps_mu_zero_limit(m, zero_mode)
            n2xi2_list.append(w)
            b_list.append(np.sqrt(q_arr ** 2 + w))
        mu_ratios = [_ratio(zero[j][1], zero[j + 1][1])
                     for j in range(len(mats) - 1)]
        eps_ratios = [_ratio(zero[j][0], zero[j + 1][0])
                      for j in range(len(mats) - 1)]
        r_s = _recurrence_zero(b_list, mu_ratios, n2xi2_list, thicknesses)
        r_p = _recurrence_zero(b_list, eps_ratios, n2xi2_list, thicknesses)
        return r_s, r_p
    b_list, n2xi2_list, eps_list, mu_list = [], [], [], []
    xi2 = xi ** 2
    for m in mats:
        eps = mat.epsilon_imag_axis(m, xi)
        mu = mat.mu_imag_axis(m, xi)
        n2xi2 = eps * mu * xi2
        eps_list.append(eps)
        mu_list.append(mu)
        n2xi2_list.append(n2xi2)
        b_list.append(np.sqrt(n2xi2 + q_arr ** 2))
    r_s = _recurrence(b_list, mu_list, n2xi2_list, thicknesses)
    r_p = _recurrence(b_list, eps_list, n2xi2_list, thicknesses)
    return r_s, r_p


def reflection(stack, ambient, xi, q, polarization, zero_mode="drude"):
    """Reflection coefficient of a layer stack seen from the ambient medium.

    Evaluates the backward recurrence at imaginary frequency i*xi and
    transverse wavenumber q (scalar or array).  Ideal markers short-circuit
    to r_p = -r_s = 1 (perfect conductor) and r_p = -r_s = -1 (perfectly
    permeable).  At xi = 0 each response enters through its pole form; the
    ``zero_mode`` prescription ('drude' or 'plasma') decides how metallic
    absorption is treated there.

    Parameters
    ----------
    stack : LayerStack
    ambient : material model
        Medium the wave arrives from (never an ideal marker).
    xi : float
    q : float or ndarray
    polarization : 's' or 'p'
    zero_mode : str
        Zero-frequency prescription for Drude metals.

    Returns
    -------
    float or ndarray in [-1, 1]
    """
    pol = _pol(polarization)
    q_arr = np.asarray(q, dtype=float)
    if xi < 0 or np.any(q_arr < 0):
        raise ValueError("xi and q must be non-negative")
    if xi == 0 and np.any(q_arr == 0):
        raise DegeneratePointError("need xi > 0 or q > 0")
    scalar = q_arr.ndim == 0
    q_arr = np.atleast_1d(q_arr)
    r_s, r_p = _stack_reflections(stack, ambient, xi, q_arr, zero_mode)
    r = r_s if pol is Polarization.S else r_p
    return float(r[0]) if scalar else r


def free_space_green(displacement, xi):
    """Free-space Green tensor at imaginary frequency, delta part excluded.

    Parameters
    ----------
    displacement : 3-vector or positive float
        Separation r - r'; a scalar is taken along the z axis.
    xi : positive float or 1-d array
        Imaginary frequency.

    Returns
    -------
    ndarray
        Shape (3, 3) for scalar xi, (len(xi), 3, 3) otherwise.  The tensor
        is symmetric; its trace equals exp(-xi*rho)/(2*pi*rho).
    """
    disp = np.asarray(displacement, dtype=float)
    if disp.ndim == 0:
        disp = np.array([0.0, 0.0, float(disp)])
    rho = float(np.linalg.norm(disp))
    if rho <= 0.0:
        raise CoincidenceError("coincidence limit: bulk part is excluded")
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr <= 0):
        raise ValueError("xi must be positive")
    unit = disp / rho
    x = xi_arr * rho
    a = 1.0 + x + x ** 2
    bb = 3.0 + 3.0 * x + x ** 2
    pref = decaying_exp(x) / (4.0 * np.pi * xi_arr ** 2 * rho ** 3)
    eye = np.eye(3)
    ee = np.outer(unit, unit)
    if xi_arr.ndim == 0:
        return pref * (a * eye - bb * ee)
    return (pref[:, None, None]
            * (a[:, None, None] * eye - bb[:, None, None] * ee))


def scenario_reflections(scenario, xi, q, zero_mode="drude"):
    """Reflections off both walls plus interspace propagation data.

    Returns a dict with r_s/r_p for the left (-) and right (+) walls, the
    interspace propagation constant b, the squared refractive index n2 and
    the multiple-reflection denominators D_s, D_p (all vectorized over q).
    """
    q_arr = np.asarray(q, dtype=float)
    if xi == 0:
        n2 = None
        w = mat.xi2_eps_mu_zero_limit(scenario.medium, zero_mode)
        b = np.sqrt(q_arr ** 2 + w)
    else:
        eps = mat.epsilon_imag_axis(scenario.medium, xi)
        mu = mat.mu_imag_axis(scenario.medium, xi)
        n2 = eps * mu
        b = np.sqrt(n2 * xi ** 2 + q_arr ** 2)
    decay = decaying_exp(2.0 * b * scenario.gap)
    out = {"b": b, "n2": n2, "decay_gap": decay}
    rs_minus, rp_minus = _stack_reflections(scenario.left, scenario.medium,
                                            xi, q_arr, zero_mode)
    rs_plus, rp_plus = _stack_reflections(scenario.right, scenario.medium,
                                          xi, q_arr, zero_mode)
    for pol, r_minus, r_plus in (("s", rs_minus, rs_plus),
                                 ("p", rp_minus, rp_plus)):
        denom = 1.0 - r_plus * r_minus * decay
        if np.any(denom <= 0.0):
            raise UnphysicalParameterError(
                "multiple-reflection denominator left (0, 2)")
        out[f"r_{pol}_minus"] = r_minus
        out[f"r_{pol}_plus"] = r_plus
        out[f"D_{pol}"] = denom
    return out


def stress_coefficients(scenario, xi, q, refl, zero_mode="drude"):
    """Polarization brackets of the stress kernel: (s-term, p-term, single-wall).

    Written with b^2 - q^2 replaced by n^2 xi^2 so no cancellation occurs at
    q >> xi.  The single-wall coefficient is proportional to 1 - 1/n^2 and
    vanishes identically for a vacuum interspace.
    """
    q_arr = np.asarray(q, dtype=float)
    if xi == 0:
        (eps_order, eps0), (mu_order, mu0) = mat.zero_frequency_response(
            scenario.medium, zero_mode)
        inv_n2 = 0.0 if eps_order or mu_order else 1.0 / (eps0 * mu0)
        n2xi2 = mat.xi2_eps_mu_zero_limit(scenario.medium, zero_mode)
    else:
        inv_n2 = 1.0 / refl["n2"]
        n2xi2 = refl["n2"] * xi ** 2
    plus_c = n2xi2 * (1.0 + inv_n2) + 2.0 * q_arr ** 2
    minus_c = n2xi2 * (1.0 + inv_n2) + 2.0 * q_arr ** 2 * inv_n2
    single = n2xi2 * (1.0 - inv_n2)
    return plus_c, minus_c, single


def cavity_stress_kernel(scenario, z, xi, q, zero_mode="drude"):
    """Interspace stress kernel g(z, i*xi, q), all four terms.

    The two z-independent terms carry the round trip across the gap; the two
    z-dependent single-wall terms vanish identically for a vacuum interspace.
    """
    if not 0.0 < z < scenario.gap:
        raise ValueError("z must lie inside the interspace")
    q_arr = np.asarray(q, dtype=float)
    if xi == 0 and np.any(q_arr == 0):
        raise DegeneratePointError("need xi > 0 or q > 0")
    refl = scenario_reflections(scenario, xi, q_arr, zero_mode)
    b = refl["b"]
    plus_c, minus_c, single = stress_coefficients(scenario, xi, q_arr, refl,
                                                  zero_mode)
    roundtrip = refl["decay_gap"]
    g = (-2.0 * plus_c * roundtrip * refl["r_s_plus"] * refl["r_s_minus"]
         / refl["D_s"]
         - 2.0 * minus_c * roundtrip * refl["r_p_plus"] * refl["r_p_minus"]
         / refl["D_p"])
    if np.any(single != 0.0):
        near = decaying_exp(2.0 * b * z)
        far = decaying_exp(2.0 * b * (scenario.gap - z))
        g = g + single * (near * refl["r_s_minus"]
                          + far * refl["r_s_plus"]) / refl["D_s"]
        g = g - single * (near * refl["r_p_minus"]
                          + far * refl["r_p_plus"]) / refl["D_p"]
    return g


def atom_wall_kernel(scenario, z_atom, xi, q, zero_mode="drude"):
    """Inner kernel of the atom-in-cavity potential (vacuum interspace).

    (q/b) * sum over walls of exp(-2 b s) [r_s/D_s - (1 + 2 q^2/xi^2) r_p/D_p]
    with s the distance to the respective wall.  Requires xi > 0; the
    potential integrals use the xi^2-scaled variant which is regular at the
    origin.
    """
    if xi <= 0:
        raise ValueError("the unscaled kernel needs xi > 0")
    return atom_wall_kernel_scaled(scenario, z_atom, xi, q, zero_mode) / xi ** 2


def atom_wall_kernel_scaled(scenario, z_atom, xi, q, zero_mode="drude"):
    """xi^2 times atom_wall_kernel; regular for xi -> 0."""
    if not isinstance(scenario.medium, mat.Vacuum):
        raise InvalidStackError(
            "atom-wall kernel is defined for a vacuum interspace")
    if not 0.0 < z_atom < scenario.gap:
        raise ValueError("atom position must lie inside the interspace")
    q_arr = np.asarray(q, dtype=float)
    refl = scenario_reflections(scenario, xi, q_arr, zero_mode)
    b = refl["b"]
    s_weight = xi ** 2
    p_weight = xi ** 2 + 2.0 * q_arr ** 2
    near = decaying_exp(2.0 * b * z_atom)
    far = decaying_exp(2.0 * b * (scenario.gap - z_atom))
    bracket = (near * (s_weight * refl["r_s_minus"] / refl["D_s"]
                       - p_weight * refl["r_p_minus"] / refl["D_p"])
               + far * (s_weight * refl["r_s_plus"] / refl["D_s"]
                        - p_weight * refl["r_p_plus"] / refl["D_p"]))
    return (q_arr / b) * bracket
