"""Free-space two-atom and N-atom dispersion potentials.

Natural units (hbar = c = eps0 = mu0 = 1).  The polarizable-polarizable
interaction is always attractive, the polarizable-magnetizable one always
repulsive; both follow 1/r^7 in the retarded limit with relative strength
7/23.
"""

from dataclasses import dataclass
from itertools import permutations
import math

import numpy as np

from .casimir_polder import Polarizability, Magnetizability
from .errors import CoincidenceError, MixedRegimeError
from .layers import free_space_green, decaying_exp
from .quadrature import QuadSpec, integrate_semiinf

_MAX_ATOMS = 6


@dataclass(frozen=True)
class AtomPair:
    a: Polarizability
    b: Polarizability
    separation: float

    def __post_init__(self):
        if self.separation <= 0:
            raise ValueError("separation must be positive")

    @property
    def magnetic(self):
        return isinstance(self.b, Magnetizability)


def pp_kernel(x):
    """Two-polarizable-atom kernel 2 exp(-2x)(3 + 6x + 5x^2 + 2x^3 + x^4)."""
    x = np.asarray(x, dtype=float)
    poly = 3.0 + x * (6.0 + x * (5.0 + x * (2.0 + x)))
    out = 2.0 * decaying_exp(2.0 * x) * poly
    return out if out.ndim else float(out)


def pm_kernel(x):
    """Polarizable-magnetizable kernel 2 exp(-2x)(1 + 2x + x^2)."""
    x = np.asarray(x, dtype=float)
    out = 2.0 * decaying_exp(2.0 * x) * (1.0 + x) ** 2
    return out if out.ndim else float(out)


def _xi_scale(pair):
    scales = (pair.a.resonance_frequencies() + pair.b.resonance_frequencies()
              + [1.0 / pair.separation])
    return min(s for s in scales if s > 0)


def pp_potential(pair, spec=None):
    """Ground-state potential of two polarizable atoms in free space.

    U = -(1/(32 pi^3 r^6)) * int alpha_A(i xi) alpha_B(i xi) g(xi r) d xi,
    strictly negative unless one response vanishes.  In the retarded limit
    U -> -23 alpha_A(0) alpha_B(0)/(64 pi^3 r^7).
    """
    if pair.magnetic:
        raise TypeError("pp_potential needs two polarizabilities")
    if pair.a.zero or pair.b.zero:
        return 0.0
    spec = spec or QuadSpec()
    r = pair.separation

    def f(xi):
        return pair.a(xi) * pair.b(xi) * pp_kernel(xi * r)

    value = integrate_semiinf(f, spec, scale=_xi_scale(pair)).require(
        "pp_potential")
    return -value / (32.0 * math.pi ** 3 * r ** 6)


def pm_potential(pair, spec=None):
    """Potential of a polarizable atom and a magnetizable one in free space.

    U = +(1/(32 pi^3 r^4)) * int xi^2 alpha_A beta_B h(xi r) d xi, strictly
    positive unless a response vanishes; retarded limit
    +7 alpha_A(0) beta_B(0)/(64 pi^3 r^7).
    """
    if not pair.magnetic:
        raise TypeError("pm_potential needs a magnetizable partner")
    if pair.a.zero or pair.b.zero:
        return 0.0
    spec = spec or QuadSpec()
    r = pair.separation

    def f(xi):
        return xi ** 2 * pair.a(xi) * pair.b(xi) * pm_kernel(xi * r)

    value = integrate_semiinf(f, spec, scale=_xi_scale(pair)).require(
        "pm_potential")
    return value / (32.0 * math.pi ** 3 * r ** 4)


def pair_potential(pair, spec=None):
    return pm_potential(pair, spec) if pair.magnetic \
        else pp_potential(pair, spec)


def n_atom_potential(positions, responses, spec=None):
    """N-atom dispersion potential in free space via the Green-tensor trace.

    (-1)^(N-1)/((1 + delta_{N2}) pi) * int xi^(2N) prod alpha_k *
    S Tr[G(r1,r2) ... G(rN,r1)] d xi, with the symmetrizer S averaging the
    trace over all N! orderings with weight 1/((2 - delta_{N2}) N).
    Reduces to pp_potential for N = 2.
    """
    positions = [np.asarray(p, dtype=float) for p in positions]
    if len(positions) != len(responses):
        raise ValueError("one response per position required")
    n = len(positions)
    if n < 2:
        raise ValueError("need at least two atoms")
    if n > _MAX_ATOMS:
        raise ValueError(f"permutation sum capped at {_MAX_ATOMS} atoms")
    for i in range(n):
        for j in range(i + 1, n):
            if np.allclose(positions[i], positions[j], atol=0.0):
                raise CoincidenceError("atom positions must be distinct")
    if any(resp.zero for resp in responses):
        return 0.0
    spec = spec or QuadSpec()

    distances = [float(np.linalg.norm(positions[i] - positions[j]))
                 for i in range(n) for j in range(i + 1, n)]
    scales = [1.0 / max(distances)]
    for resp in responses:
        scales.extend(resp.resonance_frequencies())
    perms = list(permutations(range(n)))
    sym_norm = 1.0 / ((2.0 if n != 2 else 1.0) * n)
    prefactor = (-1.0) ** (n - 1) / ((2.0 if n == 2 else 1.0) * math.pi)

    def f(xi_arr):
        xi_arr = np.atleast_1d(np.asarray(xi_arr, dtype=float))
        tensors = {}
        for i in range(n):
            for j in range(n):
                if i != j:
                    tensors[(i, j)] = free_space_green(
                        positions[i] - positions[j], xi_arr)
        trace_sum = np.zeros_like(xi_arr)
        for perm in perms:
            prod = tensors[(perm[0], perm[1])]
            for k in range(1, n):
                nxt = tensors[(perm[k], perm[(k + 1) % n])]
                prod = np.einsum("kab,kbc->kac", prod, nxt)
            trace_sum += np.einsum("kaa->k", prod)
        weight = np.ones_like(xi_arr)
        for resp in responses:
            weight *= resp(xi_arr)
        return xi_arr ** (2 * n) * weight * trace_sum * sym_norm

    value = integrate_semiinf(f, spec, scale=min(scales)).require(
        "n_atom_potential")
    return prefactor * value


def power_law_fit(evaluator, window, n_points=8):
    """Least-squares slope of log|U| versus log r over a distance window.

    Raises MixedRegimeError if the potential changes sign inside the window
    (the window then straddles two asymptotic regimes).
    """
    lo, hi = window
    if not 0 < lo < hi:
        raise ValueError("window must satisfy 0 < lo < hi")
    if n_points < 2:
        raise ValueError("need at least two points")
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), n_points))
    values = np.array([evaluator(r) for r in grid])
    if np.any(values == 0.0) or np.any(np.sign(values) != np.sign(values[0])):
        raise MixedRegimeError("potential changes sign inside the window")
    slope = np.polyfit(np.log(grid), np.log(np.abs(values)), 1)[0]
    return float(slope)


def pairwise_halfspace_pressure(alpha_a, alpha_b, density_a, density_b, gap,
                                spec=None):
    """Pairwise-summed two-atom pressure between dilute half spaces.

    Integrating the two-atom potential atom-by-atom over two half spaces at
    surface separation d gives the attraction-positive pressure
    P = -2 pi eta_a eta_b int_d^inf (r - d) r U_pp(r) dr.  For weakly
    polarizable media (susceptibility chi = eta*alpha -> 0) this is the
    leading term of the macroscopic pressure.
    """
    spec = spec or QuadSpec()
    inner_spec = spec.tighter(0.25)
    pair_scales = (alpha_a.resonance_frequencies()
                   + alpha_b.resonance_frequencies())

    def potential(r):
        def f(xi):
            return alpha_a(xi) * alpha_b(xi) * pp_kernel(xi * r)

        scale = min(pair_scales + [1.0 / r]) if pair_scales else 1.0 / r
        value = integrate_semiinf(f, inner_spec, scale=scale).require(
            "pairwise potential")
        return -value / (32.0 * math.pi ** 3 * r ** 6)

    def outer(u_arr):
        u_arr = np.atleast_1d(np.asarray(u_arr, dtype=float))
        return np.array([(r - gap) * r * potential(r)
                         for r in gap + u_arr])

    value = integrate_semiinf(outer, spec, scale=gap).require(
        "pairwise pressure")
    return -2.0 * math.pi * density_a * density_b * value
