"""Casimir-Polder potentials and forces on ground-state atoms near planar walls.

Natural units (hbar = c = eps0 = mu0 = 1).  Potentials are negative when the
atom is attracted toward the nearer wall.  All geometries assume a vacuum
interspace around the atom; the walls may be arbitrary multilayer stacks,
single plates of finite thickness, or ideal mirrors.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.optimize import brentq

from . import materials as mat
from .errors import RegimeWarning, InvalidStackError
from .layers import Layer, LayerStack, PlanarScenario, \
    atom_wall_kernel_scaled, decaying_exp, scenario_reflections
from .quadrature import QuadSpec, integrate_semiinf, integrate_xi_q

# a wall placed this many gap widths away is numerically absent
_FAR_WALL = 400.0


class Polarizability:
    """Isotropic atomic polarizability evaluable on the imaginary axis.

    The response is a sum of oscillator terms w_k * omega_k^2/(omega_k^2 +
    xi^2) plus an optional frequency-independent part; it is non-negative,
    finite at xi = 0 and non-increasing in xi.
    """

    def __init__(self, oscillators=(), constant=0.0):
        self.oscillators = tuple((float(w0), float(wt))
                                 for w0, wt in oscillators)
        self.constant = float(constant)
        if self.constant < 0 or any(w < 0 or o <= 0
                                    for o, w in self.oscillators):
            raise ValueError("response weights must be >= 0 and "
                             "resonances positive")

    @classmethod
    def static(cls, value):
        return cls(constant=value)

    @classmethod
    def two_level(cls, transition_frequency, static_value):
        """alpha(i xi) = alpha(0) * w10^2/(w10^2 + xi^2).

        alpha(0) relates to the dipole matrix element via
        alpha(0) = 2*|d01|^2/(3*w10).
        """
        return cls(oscillators=((transition_frequency, static_value),))

    @classmethod
    def from_dipole_moment(cls, transition_frequency, dipole_squared):
        return cls.two_level(transition_frequency,
                             2.0 * dipole_squared / (3.0 * transition_frequency))

    @classmethod
    def multi_oscillator(cls, terms):
        return cls(oscillators=terms)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.full_like(xi, self.constant) if xi.ndim \
            else float(self.constant)
        for omega, weight in self.oscillators:
            out = out + weight * omega ** 2 / (omega ** 2 + xi ** 2)
        return out

    @property
    def static_value(self):
        return self.constant + sum(w for _, w in self.oscillators)

    def resonance_frequencies(self):
        return [omega for omega, _ in self.oscillators]

    @property
    def zero(self):
        return self.static_value == 0.0


class Magnetizability(Polarizability):
    """Isotropic magnetizability; same functional shape as Polarizability."""


@dataclass(frozen=True)
class HalfSpace:
    stack: LayerStack


@dataclass(frozen=True)
class Plate:
    material: object
    thickness: float


@dataclass(frozen=True)
class Cavity:
    left: LayerStack
    right: LayerStack
    gap: float


@dataclass(frozen=True)
class IdealMirror:
    kind: str = "conductor"

    def __post_init__(self):
        if self.kind not in ("conductor", "permeable"):
            raise ValueError("mirror kind must be 'conductor' or 'permeable'")


@dataclass(frozen=True)
class AtomScenario:
    atom: Polarizability
    geometry: object
    z_position: float

    def __post_init__(self):
        if self.z_position <= 0:
            raise ValueError("atom-wall distance must be positive")
        if isinstance(self.geometry, Cavity) \
                and self.z_position >= self.geometry.gap:
            raise ValueError("atom must sit inside the cavity")


def _wall_stack(geometry):
    if isinstance(geometry, HalfSpace):
        return geometry.stack
    if isinstance(geometry, Plate):
        return LayerStack.slab(geometry.material, geometry.thickness)
    if isinstance(geometry, IdealMirror):
        marker = mat.PerfectConductor() if geometry.kind == "conductor" \
            else mat.PerfectlyPermeable()
        return LayerStack.half_space(marker)
    raise TypeError(f"unsupported geometry {type(geometry).__name__}")


def _planar_scenario(scn):
    """Map an atom scenario onto a two-wall interspace geometry.

    Single-wall geometries get a vacuum pseudo-wall placed far enough away
    that its reflection contributes nothing at double precision.
    """
    if isinstance(scn.geometry, Cavity):
        return PlanarScenario(scn.geometry.left, scn.geometry.right,
                              mat.Vacuum(), scn.geometry.gap)
    stack = _wall_stack(scn.geometry)
    vacuum_wall = LayerStack.half_space(mat.Vacuum())
    return PlanarScenario(stack, vacuum_wall, mat.Vacuum(),
                          _FAR_WALL * scn.z_position)


def _xi_scale(scn, scenario):
    scales = [f for f in scn.atom.resonance_frequencies() if f > 0]
    scales.extend(scenario.resonance_frequencies())
    z_eff = min(scn.z_position, scenario.gap - scn.z_position)
    scales.append(1.0 / (2.0 * z_eff))
    return min(scales) if scales else 1.0 / (2.0 * z_eff)


def cp_potential(scn, spec=None, multiple_reflections=True):
    """Ground-state potential of an atom between planar walls.

    Evaluates the double integral over imaginary frequency and transverse
    wavenumber of the scaled atom-wall kernel weighted by alpha(i xi).
    Negative values mean attraction toward the nearer wall.

    Parameters
    ----------
    scn : AtomScenario
    spec : QuadSpec, optional
    multiple_reflections : bool
        If False, the round-trip denominators D_sigma are replaced by 1;
        the cavity potential then equals the sum of the two single-wall
        potentials (diagnostic switch).
    """
    if scn.atom.zero:
        return 0.0
    spec = spec or QuadSpec()
    scenario = _planar_scenario(scn)
    z_eff = min(scn.z_position, scenario.gap - scn.z_position)

    def kernel(xi, q):
        k = _scaled_kernel(scenario, scn.z_position, xi, q,
                           multiple_reflections)
        return scn.atom(xi) * k / (8.0 * math.pi ** 2)

    res = integrate_xi_q(kernel, spec, xi_scale=_xi_scale(scn, scenario),
                         b_scale=1.0 / (2.0 * z_eff))
    return res.require("cp_potential")


def _scaled_kernel(scenario, z_atom, xi, q, multiple_reflections=True):
    if multiple_reflections:
        return atom_wall_kernel_scaled(scenario, z_atom, xi, q)
    refl = scenario_reflections(scenario, xi, q)
    b = refl["b"]
    s_weight = xi ** 2
    p_weight = xi ** 2 + 2.0 * np.asarray(q, dtype=float) ** 2
    near = decaying_exp(2.0 * b * z_atom)
    far = decaying_exp(2.0 * b * (scenario.gap - z_atom))
    bracket = (near * (s_weight * refl["r_s_minus"]
                       - p_weight * refl["r_p_minus"])
               + far * (s_weight * refl["r_s_plus"]
                        - p_weight * refl["r_p_plus"]))
    return (q / b) * bracket


def cp_force(scn, spec=None):
    """Force on the atom along +z; equals -dU/dz with the derivative taken
    analytically under the integral (the z dependence is a pure exponential).
    """
    if scn.atom.zero:
        return 0.0
    spec = spec or QuadSpec()
    scenario = _planar_scenario(scn)
    z_eff = min(scn.z_position, scenario.gap - scn.z_position)
    z = scn.z_position

    def kernel(xi, q):
        refl = scenario_reflections(scenario, xi, q)
        b = refl["b"]
        q_arr = np.asarray(q, dtype=float)
        s_weight = xi ** 2
        p_weight = xi ** 2 + 2.0 * q_arr ** 2
        near = decaying_exp(2.0 * b * z)
        far = decaying_exp(2.0 * b * (scenario.gap - z))
        bracket = (near * (s_weight * refl["r_s_minus"] / refl["D_s"]
                           - p_weight * refl["r_p_minus"] / refl["D_p"])
                   - far * (s_weight * refl["r_s_plus"] / refl["D_s"]
                            - p_weight * refl["r_p_plus"] / refl["D_p"]))
        return scn.atom(xi) * 2.0 * q_arr * bracket / (8.0 * math.pi ** 2)

    res = integrate_xi_q(kernel, spec, xi_scale=_xi_scale(scn, scenario),
                         b_scale=1.0 / (2.0 * z_eff))
    return res.require("cp_force")


def cp_potential_perfect_mirror(atom, z, kind="conductor", spec=None):
    """Closed single-integral potential at an ideal mirror.

    -(1/(16 pi^2 z^3)) * int alpha(i xi) exp(-2 xi z)
    [1 + 2 xi z + 2 (xi z)^2] d xi, negated for the permeable kind.
    """
    if atom.zero:
        return 0.0
    if z <= 0:
        raise ValueError("distance must be positive")
    spec = spec or QuadSpec()
    sign = -1.0 if kind == "conductor" else 1.0

    def f(xi):
        x = xi * z
        return atom(xi) * decaying_exp(2.0 * x) * (1.0 + 2.0 * x + 2.0 * x ** 2)

    scales = [f0 for f0 in atom.resonance_frequencies()] + [1.0 / (2.0 * z)]
    res = integrate_semiinf(f, spec, scale=min(scales))
    return sign * res.require("perfect mirror potential") \
        / (16.0 * math.pi ** 2 * z ** 3)


def retarded_halfspace_integral(eps0, mu0, spec=None):
    """The static-response angular integral of the retarded asymptote.

    I(eps0, mu0) = int_1^inf dv [ (2/v^2 - 1/v^4) (eps0 v - s)/(eps0 v + s)
                                  - (1/v^4) (mu0 v - s)/(mu0 v + s) ],
    s = sqrt(eps0*mu0 - 1 + v^2).  Positive I means attraction.
    """
    spec = spec or QuadSpec()

    def f(v):
        s = np.sqrt(eps0 * mu0 - 1.0 + v ** 2)
        term_p = (2.0 / v ** 2 - 1.0 / v ** 4) * (eps0 * v - s) / (eps0 * v + s)
        term_s = (1.0 / v ** 4) * (mu0 * v - s) / (mu0 * v + s)
        return term_p - term_s

    return integrate_semiinf(f, spec, scale=1.0, offset=1.0).require(
        "retarded half-space integral")


def cp_retarded_halfspace_asymptote(alpha0, eps_static, mu_static, z,
                                    spec=None):
    """Large-distance potential at a magneto-electric half space.

    -3*alpha(0)/(64 pi^2 z^4) times the static angular integral; the sign
    depends on the competition between eps(0) and mu(0).
    """
    if z <= 0:
        raise ValueError("distance must be positive")
    integral = retarded_halfspace_integral(eps_static, mu_static, spec)
    return -3.0 * alpha0 * integral / (64.0 * math.pi ** 2 * z ** 4)


def nonretarded_asymptote(atom, material, z, kind, spec=None):
    """Short-distance potential at a half space.

    kind='dielectric': -(1/(16 pi^2 z^3)) int alpha (eps-1)/(eps+1);
    kind='magnetic':  +(1/(32 pi^2 z)) int xi^2 alpha (mu-1)(mu+3)/(mu+1).
    """
    if z <= 0:
        raise ValueError("distance must be positive")
    spec = spec or QuadSpec()
    scales = list(atom.resonance_frequencies()) \
        + list(mat.resonance_frequencies(material)) or [1.0]

    if kind == "dielectric":
        def f(xi):
            eps = mat.epsilon_imag_axis(material, xi)
            return atom(xi) * (eps - 1.0) / (eps + 1.0)

        value = integrate_semiinf(f, spec, scale=min(scales)).require(
            "nonretarded dielectric asymptote")
        return -value / (16.0 * math.pi ** 2 * z ** 3)
    if kind == "magnetic":
        def f(xi):
            mu = mat.mu_imag_axis(material, xi)
            return atom(xi) * xi ** 2 * (mu - 1.0) * (mu + 3.0) / (mu + 1.0)

        value = integrate_semiinf(f, spec, scale=min(scales)).require(
            "nonretarded magnetic asymptote")
        return value / (32.0 * math.pi ** 2 * z)
    raise ValueError("kind must be 'dielectric' or 'magnetic'")


def _thin_plate_guard(material, z, thickness):
    n0 = math.sqrt(mat.static_epsilon(material) * mat.static_mu(material))
    if not thickness < 0.1 * z / n0:
        warnings.warn("thin-plate asymptote outside its validity window "
                      f"(need d < 0.1 z / n(0) = {0.1 * z / n0:.3g})",
                      RegimeWarning, stacklevel=3)


def thin_plate_asymptote(atom, material, z, thickness, regime="retarded",
                         spec=None):
    """Asymptotic potential of an atom facing an asymptotically thin plate.

    regime='retarded' gives the closed form
    -alpha(0) d /(160 pi^2 z^5) * [(14 eps0^2 - 9)/eps0 - (6 mu0^2 - 1)/mu0];
    'nonretarded-dielectric' and 'nonretarded-magnetic' give the respective
    single-integral forms.  Emits RegimeWarning when d >= 0.1 z / n(0).
    """
    if z <= 0 or thickness <= 0:
        raise ValueError("distance and thickness must be positive")
    spec = spec or QuadSpec()
    _thin_plate_guard(material, z, thickness)
    if regime == "retarded":
        eps0 = mat.static_epsilon(material)
        mu0 = mat.static_mu(material)
        bracket = (14.0 * eps0 ** 2 - 9.0) / eps0 \
            - (6.0 * mu0 ** 2 - 1.0) / mu0
        return -atom.static_value * thickness * bracket \
            / (160.0 * math.pi ** 2 * z ** 5)
    scales = list(atom.resonance_frequencies()) \
        + list(mat.resonance_frequencies(material)) or [1.0]
    if regime == "nonretarded-dielectric":
        def f(xi):
            eps = mat.epsilon_imag_axis(material, xi)
            return atom(xi) * (eps ** 2 - 1.0) / eps

        value = integrate_semiinf(f, spec, scale=min(scales)).require(
            "thin plate nonretarded")
        return -3.0 * thickness * value / (64.0 * math.pi ** 2 * z ** 4)
    if regime == "nonretarded-magnetic":
        def f(xi):
            mu = mat.mu_imag_axis(material, xi)
            return atom(xi) * xi ** 2 * (mu - 1.0) * (3.0 * mu + 1.0) / mu

        value = integrate_semiinf(f, spec, scale=min(scales)).require(
            "thin plate nonretarded")
        return thickness * value / (64.0 * math.pi ** 2 * z ** 2)
    raise ValueError(f"unknown regime {regime!r}")


def repulsion_borderline(eps_grid, spec=None, mu_max=1.0e4):
    """Static (eps(0), mu(0)) pairs where the retarded potential changes sign.

    For each eps(0) on the grid the permeability at which the retarded
    half-space integral crosses zero is bracketed and root-found; pairs with
    no crossing below mu_max are reported as (eps, nan).
    """
    spec = spec or QuadSpec()
    # the integral vanishes at the crossing, so root finding needs an
    # absolute error floor on top of the relative tolerance
    root_spec = QuadSpec(spec.rel_tol, max(spec.abs_floor, 1e-13),
                         spec.max_subdivisions, spec.substitution)
    pairs = []
    for eps0 in eps_grid:
        if eps0 < 1.0:
            raise ValueError("static permittivities must be >= 1")

        def f(mu0):
            return retarded_halfspace_integral(eps0, mu0, root_spec)

        lo, hi = 1.0, max(4.0, 8.0 * eps0)
        f_lo = f(lo)
        if f_lo <= 0.0:                      # already repulsive at mu = 1
            pairs.append((eps0, 1.0))
            continue
        while f(hi) > 0.0:
            hi *= 2.0
            if hi > mu_max:
                pairs.append((eps0, math.nan))
                break
        else:
            root = brentq(f, lo, hi, xtol=1e-12, rtol=1e-12)
            pairs.append((eps0, root))
    return pairs
