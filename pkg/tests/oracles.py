"""Independent reference implementations used only by the tests.

These deliberately avoid the production code paths: the multilayer
reflection is obtained by solving the interface boundary-value problem as a
dense linear system, the stress integrals by trapezoid sums with Richardson
extrapolation, and the implicit shift equation by bracketing root finding.
"""

import math

import numpy as np
from scipy.optimize import brentq

from dispersim import materials as mat


def reflection_bvp(materials, thicknesses, xi, q, polarization):
    """Reflection coefficient from the interface boundary-value problem.

    materials[0] is the ambient medium, materials[-1] the terminal half
    space; thicknesses align with materials (None for ambient/terminal).
    Fields in each layer are A exp(-b z) + B exp(+b z); continuity of the
    field and of its derivative divided by mu (s) or eps (p) at every
    interface yields a dense linear system solved for the reflected
    amplitude.
    """
    n_regions = len(materials)
    bs, cs = [], []
    for m in materials:
        eps = mat.epsilon_imag_axis(m, xi)
        mu = mat.mu_imag_axis(m, xi)
        bs.append(math.sqrt(eps * mu * xi ** 2 + q ** 2))
        cs.append(mu if polarization == "s" else eps)
    n_unknowns = 2 * (n_regions - 1)
    # unknowns: r, A_1, B_1, ..., A_{N-1}, B_{N-1}, t
    rows = []
    rhs = []

    def unknown_index(layer, which):
        if layer == 0:
            return 0                      # r
        if layer == n_regions - 1:
            return n_unknowns - 1         # t
        return 1 + 2 * (layer - 1) + which

    for j in range(n_regions - 1):        # interface between j and j+1
        left_decay = 1.0 if j == 0 else math.exp(-bs[j] * thicknesses[j])
        left_grow = 1.0 / left_decay
        row_u = np.zeros(n_unknowns)
        row_d = np.zeros(n_unknowns)
        rhs_u = 0.0
        rhs_d = 0.0
        if j == 0:
            # ambient: exp(-b z) incident (amplitude 1) + r exp(+b z)
            row_u[0] = -1.0
            rhs_u = 1.0
            row_d[0] = -bs[0] / cs[0]
            rhs_d = -bs[0] / cs[0]
        else:
            row_u[unknown_index(j, 0)] = -left_decay
            row_u[unknown_index(j, 1)] = -left_grow
            row_d[unknown_index(j, 0)] = bs[j] / cs[j] * left_decay
            row_d[unknown_index(j, 1)] = -bs[j] / cs[j] * left_grow
        nxt = j + 1
        if nxt == n_regions - 1:
            row_u[unknown_index(nxt, 0)] += 1.0
            row_d[unknown_index(nxt, 0)] += -bs[nxt] / cs[nxt]
        else:
            row_u[unknown_index(nxt, 0)] += 1.0
            row_u[unknown_index(nxt, 1)] += 1.0
            row_d[unknown_index(nxt, 0)] += -bs[nxt] / cs[nxt]
            row_d[unknown_index(nxt, 1)] += bs[nxt] / cs[nxt]
        rows.extend([row_u, row_d])
        rhs.extend([rhs_u, rhs_d])
    solution = np.linalg.solve(np.array(rows), np.array(rhs))
    return solution[0]


def slab_reflection_closed_form(wall, xi, q, polarization):
    """Two-interface slab in vacuum via the tanh closed form."""
    material, thickness = wall
    eps = mat.epsilon_imag_axis(material, xi)
    mu = mat.mu_imag_axis(material, xi)
    c = mu if polarization == "s" else eps
    b = math.sqrt(xi ** 2 + q ** 2)
    b1 = math.sqrt(eps * mu * xi ** 2 + q ** 2)
    th = math.tanh(b1 * thickness)
    return ((c ** 2 * b ** 2 - b1 ** 2) * th
            / (2.0 * c * b * b1 + (c ** 2 * b ** 2 + b1 ** 2) * th))


def trapezoid_refined(f, lo, hi, n):
    """Trapezoid value with one Richardson extrapolation step."""
    coarse = np.trapezoid(f(np.linspace(lo, hi, n + 1)),
                          dx=(hi - lo) / n)
    fine = np.trapezoid(f(np.linspace(lo, hi, 2 * n + 1)),
                        dx=(hi - lo) / (2 * n))
    return fine + (fine - coarse) / 3.0


def stress_bruteforce(kernel, xi_cut, q_cut, n=1200):
    """Double trapezoid-with-Richardson quadrature over a truncated box.

    ``kernel(xi, q_array)`` must be vectorized over the q array.
    """

    def outer(xi_arr):
        out = np.empty_like(xi_arr)
        for i, xi in enumerate(xi_arr):
            if xi == 0.0:
                xi = 1e-9 * xi_cut
            out[i] = trapezoid_refined(lambda q: kernel(xi, q),
                                       1e-9 * q_cut, q_cut, n)
        return out

    return trapezoid_refined(outer, 1e-9 * xi_cut, xi_cut, n // 4)


def shift_bracketing(system, shift_map, span):
    """Root of delta - m(delta) = 0 by bisection bracketing."""
    def f(delta):
        return delta - shift_map(system, delta)

    return brentq(f, -span, span, xtol=1e-14, rtol=1e-14)
