"""Reference output suite: regenerates the benchmark figure data as CSV
tables and renders matplotlib figures next to them.

Every CSV embeds the exact scenario that produced it, so each table can be
reproduced with the corresponding CLI command; reruns are byte-identical.
"""

import math
import os

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import scenario as sc
from .cli import run as run_command
from .casimir_polder import Polarizability, Magnetizability
from .quadrature import QuadSpec
from .tables import OutputTable
from .vdw import AtomPair, pair_potential, power_law_fit
from .casimir import casimir_pressure, ZeroTemperature
from .casimir_polder import AtomScenario, HalfSpace, cp_potential
from .layers import LayerStack, PlanarScenario
from . import materials as mat

_FIG3_MATERIAL = """
[material wall]
type = drude_lorentz
eps_plasma = 0.75
eps_resonance = 1.03
eps_damping = 0.001
mu_plasma = {mu_plasma}
mu_resonance = 1.0
mu_damping = 0.001

[stack wall]
layers = wall

[atom]
type = two_level
omega10 = 1.0
alpha0 = 1.0
"""

_FIG6_BASE = """
[material surface]
type = drude_lorentz
eps_plasma = 0.75
eps_resonance = 1.0
eps_damping = 0.01

[excited_atom]
material = surface
dipole_weight = {dipole}
z_a = {z_a}

[run]
command = {command}
from = 0.9
to = 1.5
points = {points}
spacing = linear
tol = {tol}
"""


def _mu_plasma(mu_static):
    return math.sqrt(mu_static - 1.0) if mu_static > 1.0 else 0.0


def _cp_scenario_text(mu_static, z_lo, z_hi, points, tol, gap=None,
                      command="cp-potential"):
    text = _FIG3_MATERIAL.format(mu_plasma=_mu_plasma(mu_static))
    if gap is None:
        text += "\n[geometry]\nkind = half_space\nstack = wall\n"
    else:
        text += ("\n[geometry]\nkind = cavity\nleft = wall\nright = wall\n"
                 f"gap = {gap}\n")
    text += (f"\n[run]\ncommand = {command}\nfrom = {z_lo}\nto = {z_hi}\n"
             f"points = {points}\nspacing = log\ntol = {tol}\n")
    return text


def _write(table, outdir, name):
    path = os.path.join(outdir, name)
    table.write(path)
    return path


def _fig2(outdir, points, tol):
    eps_grid = np.exp(np.linspace(math.log(1.0), math.log(200.0), points))
    text = ("[run]\ncommand = borderline\n"
            f"from = {eps_grid[0]}\nto = {eps_grid[-1]}\n"
            f"points = {points}\nspacing = log\ntol = {tol}\n")
    table, _ = run_command("borderline", sc.parse(text))
    _write(table, outdir, "fig2_borderline.csv")
    eps = [row[0] for row in table.rows]
    mu = [row[1] for row in table.rows]
    fig, ax = plt.subplots()
    ax.loglog(eps, mu)
    ax.set_xlabel("eps(0)")
    ax.set_ylabel("mu(0) at sign change")
    ax.set_title("Attraction/repulsion borderline (retarded)")
    fig.savefig(os.path.join(outdir, "fig2_borderline.png"), dpi=150)
    plt.close(fig)


def _fig3(outdir, points, tol):
    fig, ax = plt.subplots()
    for mu_static in (1, 2, 3, 4, 5):
        text = _cp_scenario_text(mu_static, 0.08, 30.0, points, tol)
        table, _ = run_command("cp-potential", sc.parse(text))
        _write(table, outdir, f"fig3_cp_halfspace_mu{mu_static}.csv")
        z = np.array([row[0] for row in table.rows])
        u = np.array([row[1] for row in table.rows])
        ax.plot(z, u * z ** 3, label=f"mu(0) = {mu_static}")
    ax.set_xscale("log")
    ax.set_xlabel("z_a  [c/omega10]")
    ax.set_ylabel("U z_a^3")
    ax.legend()
    ax.set_title("Atom at a magneto-dielectric half space")
    fig.savefig(os.path.join(outdir, "fig3_cp_halfspace.png"), dpi=150)
    plt.close(fig)


def _fig4(outdir, points, tol):
    fig, ax = plt.subplots()
    for thickness in (0.2, 2.0, 20.0):
        text = _FIG3_MATERIAL.format(mu_plasma=_mu_plasma(5.0))
        text += ("\n[geometry]\nkind = plate\nmaterial = wall\n"
                 f"thickness = {thickness}\n")
        text += (f"\n[run]\ncommand = cp-potential\nfrom = 0.08\nto = 30.0\n"
                 f"points = {points}\nspacing = log\ntol = {tol}\n")
        table, _ = run_command("cp-potential", sc.parse(text))
        _write(table, outdir,
               f"fig4_cp_plate_d{str(thickness).replace('.', 'p')}.csv")
        z = np.array([row[0] for row in table.rows])
        u = np.array([row[1] for row in table.rows])
        ax.plot(z, u * z ** 3, label=f"d = {thickness}")
    ax.set_xscale("log")
    ax.set_xlabel("z_a  [c/omega10]")
    ax.set_ylabel("U z_a^3")
    ax.legend()
    ax.set_title("Atom at a magneto-dielectric plate, mu(0) = 5")
    fig.savefig(os.path.join(outdir, "fig4_cp_plate.png"), dpi=150)
    plt.close(fig)


def _fig5(outdir, points, tol):
    cases = {
        "magnetodielectric": dict(mu_plasma=_mu_plasma(5.0), eps_plasma=0.75),
        "dielectric": dict(mu_plasma=0.0, eps_plasma=0.75),
        "magnetic": dict(mu_plasma=_mu_plasma(5.0), eps_plasma=0.0),
    }
    gap = 15.0
    fig, ax = plt.subplots()
    for label, pars in cases.items():
        text = ("[material wall]\ntype = drude_lorentz\n"
                f"eps_plasma = {pars['eps_plasma']}\n"
                "eps_resonance = 1.03\neps_damping = 0.001\n"
                f"mu_plasma = {pars['mu_plasma']}\n"
                "mu_resonance = 1.0\nmu_damping = 0.001\n"
                "\n[stack wall]\nlayers = wall\n"
                "\n[atom]\ntype = two_level\nomega10 = 1.0\nalpha0 = 1.0\n"
                "\n[geometry]\nkind = cavity\nleft = wall\nright = wall\n"
                f"gap = {gap}\n"
                f"\n[run]\ncommand = cp-potential\nfrom = {0.02 * gap}\n"
                f"to = {0.98 * gap}\npoints = {points}\nspacing = linear\n"
                f"tol = {tol}\n")
        table, _ = run_command("cp-potential", sc.parse(text))
        _write(table, outdir, f"fig5_cp_cavity_{label}.csv")
        z = np.array([row[0] for row in table.rows])
        u = np.array([row[1] for row in table.rows])
        ax.plot(z, u, label=label)
    ax.set_xlabel("z_a  [c/omega10]")
    ax.set_ylabel("U")
    ax.set_ylim(-2e-4, 2e-4)
    ax.legend()
    ax.set_title(f"Atom in a planar cavity, gap = {gap}")
    fig.savefig(os.path.join(outdir, "fig5_cp_cavity.png"), dpi=150)
    plt.close(fig)


def _fig6(outdir, points, tol):
    text = _FIG6_BASE.format(dipole=3.0 * math.pi * 1.0e-7,
                             z_a=0.0075 * 2.0 * math.pi,
                             command="dynamics-resonant", points=points,
                             tol=tol)
    table, _ = run_command("dynamics-resonant", sc.parse(text))
    _write(table, outdir, "fig6_resonant_force.csv")
    w = np.array([row[0] for row in table.rows])
    f_sc = np.array([row[3] for row in table.rows])
    f_pert = np.array([row[4] for row in table.rows])
    fig, ax = plt.subplots()
    ax.plot(w, f_sc, label="self-consistent")
    ax.plot(w, f_pert, "--", label="perturbative")
    ax.set_xlabel("omega10 / omega_Te")
    ax.set_ylabel("resonant force")
    ax.legend()
    ax.set_title("Resonant force on the excited state")
    fig.savefig(os.path.join(outdir, "fig6_resonant_force.png"), dpi=150)
    plt.close(fig)


def _fig7(outdir, points, tol):
    text = _FIG6_BASE.format(dipole=3.0 * math.pi * 1.0e-7,
                             z_a=0.0075 * 2.0 * math.pi,
                             command="dynamics-offresonant", points=points,
                             tol=tol)
    table, _ = run_command("dynamics-offresonant", sc.parse(text))
    _write(table, outdir, "fig7_offresonant_force.csv")
    w = np.array([row[0] for row in table.rows])
    f_full = np.array([row[1] for row in table.rows])
    f_zero = np.array([row[2] for row in table.rows])
    fig, (ax, inset) = plt.subplots(2, 1, figsize=(6.4, 7.2))
    ax.plot(w, f_full, label="with broadening")
    ax.set_xlabel("omega10 / omega_Te")
    ax.set_ylabel("off-resonant force")
    ax.legend()
    inset.plot(w, f_full - f_zero)
    inset.set_xlabel("omega10 / omega_Te")
    inset.set_ylabel("broadening effect")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "fig7_offresonant_force.png"), dpi=150)
    plt.close(fig)


def _table1(outdir, tol):
    """Fitted asymptotic power laws for atom-atom, atom-half-space and
    half-space-half-space interactions."""
    spec = QuadSpec(rel_tol=max(tol, 1.0e-9))
    atom = Polarizability.two_level(1.0, 1.0)
    partner = Polarizability.two_level(1.0, 1.0)
    partner_m = Magnetizability.two_level(1.0, 1.0)
    dielectric = mat.DrudeLorentz(
        epsilon=mat.DrudeLorentzParams(0.75, 1.03, 0.001))
    magnetic = mat.DrudeLorentz(mu=mat.DrudeLorentzParams(2.0, 1.0, 0.001))
    hs_d = LayerStack.half_space(dielectric)
    hs_m = LayerStack.half_space(magnetic)

    def cp_eval(stack):
        def evaluator(z):
            return cp_potential(
                AtomScenario(atom, HalfSpace(stack), z), spec)
        return evaluator

    def pressure_eval(left, right):
        def evaluator(gap):
            return casimir_pressure(PlanarScenario(left, right,
                                                   mat.Vacuum(), gap),
                                    ZeroTemperature(), spec).value
        return evaluator

    rows = [
        ("atom-atom", "p-p", "retarded",
         lambda r: pair_potential(AtomPair(atom, partner, r), spec),
         (60.0, 240.0), -7.0),
        ("atom-atom", "p-p", "nonretarded",
         lambda r: pair_potential(AtomPair(atom, partner, r), spec),
         (2.0e-4, 1.0e-3), -6.0),
        ("atom-atom", "p-m", "retarded",
         lambda r: pair_potential(AtomPair(atom, partner_m, r), spec),
         (60.0, 240.0), -7.0),
        ("atom-atom", "p-m", "nonretarded",
         lambda r: pair_potential(AtomPair(atom, partner_m, r), spec),
         (2.0e-4, 1.0e-3), -4.0),
        ("atom-halfspace", "p-p", "retarded", cp_eval(hs_d),
         (60.0, 240.0), -4.0),
        ("atom-halfspace", "p-p", "nonretarded", cp_eval(hs_d),
         (2.0e-4, 1.0e-3), -3.0),
        ("atom-halfspace", "p-m", "nonretarded", cp_eval(hs_m),
         (2.0e-5, 8.0e-5), -1.0),
        ("halfspace-halfspace", "p-p", "retarded",
         pressure_eval(hs_d, hs_d), (60.0, 240.0), -4.0),
        ("halfspace-halfspace", "p-p", "nonretarded",
         pressure_eval(hs_d, hs_d), (2.0e-4, 1.0e-3), -3.0),
        ("halfspace-halfspace", "p-m", "nonretarded",
         pressure_eval(hs_d, hs_m), (2.0e-5, 8.0e-5), -1.0),
    ]
    text = ("[table1]\ndescription = fitted log-log slopes of dispersion "
            "potentials and pressures in their asymptotic windows\n")
    table = OutputTable(
        text,
        ["system", "pairing", "regime", "window_from", "window_to",
         "fitted_exponent", "expected_exponent"],
        ["dimensionless", "dimensionless", "dimensionless", "length",
         "length", "dimensionless", "dimensionless"])
    for system, pairing, regime, evaluator, window, expected in rows:
        slope = power_law_fit(evaluator, window, n_points=6)
        table.add_row(system, pairing, regime, window[0], window[1],
                      slope, expected)
    _write(table, outdir, "table1_power_laws.csv")


_TARGETS = {
    "fig2": lambda outdir, points, tol: _fig2(outdir, max(6, points // 3),
                                              tol),
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "table1": lambda outdir, points, tol: _table1(outdir, tol),
}


def emit_reference_suite(outdir, points=None, tol=None, targets=None):
    """Write the reference tables and figures into outdir.

    ``points`` and ``tol`` trade accuracy for speed; the defaults
    (48 sweep points, tol 1e-6) regenerate publication-like curves in a few
    minutes.  ``targets`` restricts emission to a subset of
    fig2..fig7/table1.  Output is deterministic: rerunning produces
    byte-identical CSV files.
    """
    points = points or 48
    tol = tol or 1.0e-6
    os.makedirs(outdir, exist_ok=True)
    for name in (targets or _TARGETS):
        _TARGETS[name](outdir, points, tol)
