"""Command-line interface: scenario ingestion, sweeps, CSV/figure emission.

Exit codes: 0 success, 1 scenario parse/resolution error, 2 at least one
flagged non-convergence (rows are still emitted), 3 physics-domain error.
"""

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from . import materials as mat
from . import scenario as sc
from .casimir import (ZeroTemperature, FiniteTemperature, casimir_pressure,
                      matsubara_pressure)
from .casimir_polder import (AtomScenario, Cavity, cp_potential, cp_force,
                             repulsion_borderline)
from .dynamics import (TwoLevelNearHalfSpace, QuasiMode, solve_shift, width,
                       resonant_force, offresonant_force, evolve_strong,
                       classify_regime)
from .errors import ConvergenceError, DispersionError, RegimeWarning
from .layers import PlanarScenario
from .quadrature import QuadSpec
from .tables import OutputTable
from .vdw import AtomPair, pair_potential, n_atom_potential, power_law_fit


def _spec(run):
    return QuadSpec(rel_tol=run.tolerance)


def _guarded(fn):
    """Evaluate a sweep point; map non-convergence to a flagged row."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", RegimeWarning)
            try:
                return fn(), "ok"
            except RegimeWarning:
                pass
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            return fn(), "warn-regime"
    except ConvergenceError as exc:
        value = exc.diagnostics.get("value", float("nan"))
        return value, "noconv"


def _run_casimir(scn, run):
    left = sc.build_stack(scn, scn.get("cavity", "left", "left"))
    right = sc.build_stack(scn, scn.get("cavity", "right", "right"))
    medium = sc.build_material(scn, scn.get("cavity", "medium", "vacuum"))
    temp = ZeroTemperature() if run.temperature == 0 \
        else FiniteTemperature(run.temperature)
    table = OutputTable(scn.text, ["gap", "pressure", "error", "flag"],
                        ["length", "pressure", "pressure", "dimensionless"])
    for gap in run.grid():
        scenario = PlanarScenario(left, right, medium, float(gap))
        res = casimir_pressure(scenario, temp, _spec(run), run.zero_mode)
        table.add_row(gap, res.value, res.error,
                      "ok" if res.converged else "noconv")
    return table


def _atom_scenario(scn, z):
    atom = sc.build_response(scn, "atom")
    geometry = sc.build_geometry(scn)
    return AtomScenario(atom, geometry, float(z))


def _run_cp(scn, run, force=False):
    label = "force" if force else "potential"
    kind = "force" if force else "energy"
    table = OutputTable(scn.text, ["z_a", label, "flag"],
                        ["length", kind, "dimensionless"])
    for z in run.grid():
        evaluator = cp_force if force else cp_potential
        value, flag = _guarded(
            lambda z=z: evaluator(_atom_scenario(scn, z), _spec(run)))
        table.add_row(z, value, flag)
    return table


def _run_vdw_pair(scn, run):
    a = sc.build_response(scn, "atom a")
    b = sc.build_response(scn, "atom b")
    table = OutputTable(scn.text, ["separation", "potential", "flag"],
                        ["length", "energy", "dimensionless"])
    for r in run.grid():
        value, flag = _guarded(
            lambda r=r: pair_potential(AtomPair(a, b, float(r)), _spec(run)))
        table.add_row(r, value, flag)
    return table


def _run_vdw_nbody(scn, run):
    positions = sc.build_positions(scn)
    names = scn.get("nbody", "atoms", required=True)
    responses = [sc.build_response(scn, f"atom {n.strip()}")
                 for n in names.split(",")]
    grid = run.grid()
    if grid is None:
        grid = np.array([1.0])
    table = OutputTable(scn.text, ["scale", "potential", "flag"],
                        ["dimensionless", "energy", "dimensionless"])
    for scale in grid:
        scaled = [p * float(scale) for p in positions]
        value, flag = _guarded(
            lambda s=scaled: n_atom_potential(s, responses, _spec(run)))
        table.add_row(scale, value, flag)
    return table


def _run_borderline(scn, run):
    table = OutputTable(scn.text, ["epsilon0", "mu0", "flag"],
                        ["dimensionless", "dimensionless", "dimensionless"])
    pairs = repulsion_borderline(run.grid(), _spec(run))
    for eps0, mu0 in pairs:
        table.add_row(eps0, mu0, "ok" if np.isfinite(mu0) else "no-crossing")
    return table


def _excited_atom(scn, omega10):
    material = sc.build_material(
        scn, scn.get("excited_atom", "material", required=True))
    return TwoLevelNearHalfSpace(
        transition_frequency=float(omega10),
        dipole_weight=scn.get_float("excited_atom", "dipole_weight",
                                    required=True),
        material=material,
        z_position=scn.get_float("excited_atom", "z_a", required=True))


def _run_dynamics_resonant(scn, run):
    table = OutputTable(
        scn.text,
        ["omega10", "shift", "linewidth", "force", "force_perturbative",
         "flag"],
        ["frequency", "frequency", "rate", "force", "force",
         "dimensionless"])
    for w in run.grid():
        sys = _excited_atom(scn, w)
        shift = solve_shift(sys)
        gamma = width(sys, shift)
        value, flag = _guarded(lambda s=sys: resonant_force(s))
        pert = resonant_force(sys, self_consistent=False)
        table.add_row(w, shift, gamma, value, pert, flag)
    return table


def _run_dynamics_offresonant(scn, run):
    table = OutputTable(
        scn.text, ["omega10", "force", "force_zero_width", "flag"],
        ["frequency", "force", "force", "dimensionless"])
    for w in run.grid():
        sys = _excited_atom(scn, w)
        value, flag = _guarded(
            lambda s=sys: offresonant_force(s, include_width=True,
                                            spec=_spec(run)))
        zero, _ = _guarded(
            lambda s=sys: offresonant_force(s, include_width=False,
                                            spec=_spec(run)))
        table.add_row(w, value, zero, flag)
    return table


def _run_dynamics_evolve(scn, run):
    mode = QuasiMode(
        center=scn.get_float("quasimode", "center", required=True),
        linewidth=scn.get_float("quasimode", "linewidth", required=True),
        rabi=scn.get_float("quasimode", "rabi", required=True),
        residual_width=scn.get_float("quasimode", "residual_width", 0.0),
        residual_shift=scn.get_float("quasimode", "residual_shift", 0.0),
        transition_frequency=scn.get_float("quasimode", "omega10"))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        result = evolve_strong(mode, run.grid())
    regime = classify_regime(mode)
    table = OutputTable(
        scn.text, ["time", "population", "force_scale", "flag"],
        ["time", "dimensionless", "dimensionless", "dimensionless"])
    flag = "ok" if regime == "strong" else f"warn-{regime}"
    for t, pop, force in zip(result.times, result.population,
                             result.force_scale):
        table.add_row(t, pop, force, flag)
    return table


def _run_powerlaw(scn, run):
    target = run.extras.get("target", "vdw-pair")
    lo = run.extras.get("window_from", run.sweep_from)
    hi = run.extras.get("window_to", run.sweep_to)
    if lo is None or hi is None:
        raise sc.ScenarioError("powerlaw-fit needs a window "
                               "(window_from/window_to or from/to)")
    lo, hi = float(lo), float(hi)
    points = int(float(run.extras.get("fit_points", max(run.points, 6))))
    spec = _spec(run)
    if target == "vdw-pair":
        a = sc.build_response(scn, "atom a")
        b = sc.build_response(scn, "atom b")

        def evaluator(r):
            return pair_potential(AtomPair(a, b, r), spec)
    elif target == "cp-potential":
        def evaluator(z):
            return cp_potential(_atom_scenario(scn, z), spec)
    elif target == "casimir-pressure":
        left = sc.build_stack(scn, scn.get("cavity", "left", "left"))
        right = sc.build_stack(scn, scn.get("cavity", "right", "right"))
        medium = sc.build_material(scn, scn.get("cavity", "medium", "vacuum"))

        def evaluator(gap):
            return casimir_pressure(PlanarScenario(left, right, medium, gap),
                                    ZeroTemperature(), spec,
                                    run.zero_mode).value
    else:
        raise sc.ScenarioError(f"unknown powerlaw target {target!r}")
    slope = power_law_fit(evaluator, (lo, hi), points)
    table = OutputTable(
        scn.text,
        ["window_from", "window_to", "fit_points", "exponent", "flag"],
        ["length", "length", "dimensionless", "dimensionless",
         "dimensionless"])
    table.add_row(lo, hi, points, slope, "ok")
    return table


_RUNNERS = {
    "casimir-pressure": _run_casimir,
    "cp-potential": lambda scn, run: _run_cp(scn, run, force=False),
    "cp-force": lambda scn, run: _run_cp(scn, run, force=True),
    "vdw-pair": _run_vdw_pair,
    "vdw-nbody": _run_vdw_nbody,
    "borderline": _run_borderline,
    "dynamics-resonant": _run_dynamics_resonant,
    "dynamics-offresonant": _run_dynamics_offresonant,
    "dynamics-evolve": _run_dynamics_evolve,
    "powerlaw-fit": _run_powerlaw,
}


def run(command, scn, points=None, tol=None):
    """Execute a command against a parsed scenario.

    Returns (OutputTable, exit_code): 0 on full convergence, 2 when any row
    carries a non-convergence flag.
    """
    run_cfg = sc.build_run(scn, points_override=points, tol_override=tol)
    if run_cfg.command != command:
        raise sc.ScenarioError(
            f"scenario requests {run_cfg.command!r}, invoked as {command!r}")
    if run_cfg.sweep_from is None and command != "powerlaw-fit":
        raise sc.ScenarioError("run section needs sweep bounds (from/to)")
    table = _RUNNERS[command](scn, run_cfg)
    flag_idx = table.columns.index("flag")
    status = 2 if any(row[flag_idx] == "noconv" for row in table.rows) else 0
    return table, status


def _emit(table, run_cfg, out_path):
    si_ref = run_cfg.omega_ref_si if run_cfg.si_output else None
    text = table.to_csv(si_omega_ref=si_ref)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dispersim",
        description="Dispersion forces for planar magneto-electric "
                    "multilayers and atoms (natural units)")
    parser.add_argument("--version", action="version",
                        version=f"dispersim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True)
        p.add_argument("--out")
        p.add_argument("--points", type=int)
        p.add_argument("--tol", type=float)
    p = sub.add_parser("validate")
    p.add_argument("--scenario", required=True)
    p = sub.add_parser("report")
    p.add_argument("--out", required=True)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)

    if args.command == "report":
        from .report import emit_reference_suite
        emit_reference_suite(args.out, points=args.points, tol=args.tol)
        return 0

    try:
        scn = sc.load(args.scenario)
    except (OSError, sc.ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        for line in sc.validate(scn):
            print(line)
        return 0

    try:
        table, status = run(args.command, scn, points=args.points,
                            tol=args.tol)
    except sc.ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DispersionError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return 3
    run_cfg = sc.build_run(scn, points_override=args.points,
                           tol_override=args.tol)
    _emit(table, run_cfg, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
