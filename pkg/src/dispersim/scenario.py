"""Declarative scenario files.

Line-oriented ``key = value`` entries under bracketed section headers, one
level deep, parsed with configparser.  Sections:

    [material <name>]   type = vacuum | constant | drude_lorentz |
                         perfect_conductor | perfectly_permeable, plus the
                         model parameters
    [stack <name>]      layers = m1:thickness, m2, ...   (terminal layer
                         semi-infinite, listed last)
    [atom], [atom a], [atom b]
                        type = static | two_level | multi_oscillator,
                         alpha0 / omega10 / terms, magnetic = yes/no
    [geometry]          kind = half_space | plate | cavity | ideal_mirror
    [cavity]            left/right stacks, medium, gap (casimir commands)
    [nbody]             positions = x y z; x y z; ...  atoms = a, b, ...
    [excited_atom]      omega10, dipole_weight, z_a, material
    [quasimode]         center, linewidth, rabi, residual_*, omega10
    [run]               command, sweep bounds, tolerances, units

All numbers are in natural units (hbar = c = eps0 = mu0 = 1) with
frequencies in a reference omega_ref; the optional SI output toggle only
rescales emitted columns.
"""

import configparser
from dataclasses import dataclass, field
import io
import math

import numpy as np

from . import materials as mat
from .casimir_polder import (Polarizability, Magnetizability, HalfSpace,
                             Plate, Cavity, IdealMirror)
from .layers import Layer, LayerStack
from .errors import DispersionError


class ScenarioError(DispersionError):
    """Scenario file could not be parsed or resolved."""


_RUN_COMMANDS = (
    "casimir-pressure", "cp-potential", "cp-force", "vdw-pair", "vdw-nbody",
    "borderline", "dynamics-resonant", "dynamics-offresonant",
    "dynamics-evolve", "powerlaw-fit",
)

_SWEEP_VARIABLES = {
    "casimir-pressure": "gap",
    "cp-potential": "z_a",
    "cp-force": "z_a",
    "vdw-pair": "separation",
    "vdw-nbody": "scale",
    "borderline": "epsilon",
    "dynamics-resonant": "omega10",
    "dynamics-offresonant": "omega10",
    "dynamics-evolve": "time",
    "powerlaw-fit": None,
}


@dataclass
class Scenario:
    sections: dict

    @property
    def text(self):
        """Canonical scenario text; re-parsing it reproduces the run."""
        out = io.StringIO()
        for name, body in self.sections.items():
            out.write(f"[{name}]\n")
            for key, value in body.items():
                out.write(f"{key} = {value}\n")
            out.write("\n")
        return out.getvalue()

    def section(self, name):
        if name not in self.sections:
            raise ScenarioError(f"missing section [{name}]")
        return self.sections[name]

    def get(self, section, key, default=None, required=False):
        body = self.sections.get(section, {})
        if key in body:
            return body[key]
        if required:
            raise ScenarioError(f"missing key {key!r} in section [{section}]")
        return default

    def get_float(self, section, key, default=None, required=False):
        raw = self.get(section, key, None, required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ScenarioError(
                f"[{section}] {key} = {raw!r} is not a number") from exc

    def get_bool(self, section, key, default=False):
        raw = self.get(section, key)
        if raw is None:
            return default
        if raw.lower() in ("yes", "true", "1", "on"):
            return True
        if raw.lower() in ("no", "false", "0", "off"):
            return False
        raise ScenarioError(f"[{section}] {key} = {raw!r} is not a boolean")


def parse(text):
    """Parse scenario text; raises ScenarioError with line info on failure."""
    parser = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), strict=True,
        interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"parse error: {exc}") from exc
    sections = {name: dict(parser.items(name))
                for name in parser.sections()}
    if not sections:
        raise ScenarioError("scenario file has no sections")
    return Scenario(sections)


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def build_material(scn, name):
    if name.lower() == "vacuum":
        return mat.Vacuum()
    section = f"material {name}"
    if section not in scn.sections:
        raise ScenarioError(f"unresolved material reference {name!r}")
    kind = scn.get(section, "type", required=True).lower()
    if kind == "vacuum":
        return mat.Vacuum()
    if kind == "perfect_conductor":
        return mat.PerfectConductor()
    if kind == "perfectly_permeable":
        return mat.PerfectlyPermeable()
    if kind == "constant":
        return mat.ConstantStatic(
            epsilon=scn.get_float(section, "epsilon", 1.0),
            mu=scn.get_float(section, "mu", 1.0))
    if kind == "drude_lorentz":
        eps = mat.DrudeLorentzParams(
            plasma=scn.get_float(section, "eps_plasma", 0.0),
            resonance=scn.get_float(section, "eps_resonance", 1.0),
            damping=scn.get_float(section, "eps_damping", 0.0))
        mu = mat.DrudeLorentzParams(
            plasma=scn.get_float(section, "mu_plasma", 0.0),
            resonance=scn.get_float(section, "mu_resonance", 1.0),
            damping=scn.get_float(section, "mu_damping", 0.0))
        return mat.DrudeLorentz(epsilon=eps, mu=mu)
    raise ScenarioError(f"unknown material type {kind!r} in [{section}]")


def build_stack(scn, name):
    section = f"stack {name}"
    if section not in scn.sections:
        raise ScenarioError(f"unresolved stack reference {name!r}")
    spec = scn.get(section, "layers", required=True)
    layers = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            mat_name, thickness = item.split(":", 1)
            layers.append(Layer(build_material(scn, mat_name.strip()),
                                float(thickness)))
        else:
            layers.append(Layer(build_material(scn, item)))
    if not layers:
        raise ScenarioError(f"[{section}] defines no layers")
    return LayerStack(tuple(layers))


def build_response(scn, section):
    if section not in scn.sections:
        raise ScenarioError(f"missing section [{section}]")
    magnetic = scn.get_bool(section, "magnetic", False)
    cls = Magnetizability if magnetic else Polarizability
    kind = scn.get(section, "type", "two_level").lower()
    if kind == "static":
        return cls.static(scn.get_float(section, "alpha0", required=True))
    if kind == "two_level":
        return cls.two_level(
            scn.get_float(section, "omega10", required=True),
            scn.get_float(section, "alpha0", required=True))
    if kind == "multi_oscillator":
        raw = scn.get(section, "terms", required=True)
        terms = []
        for item in raw.split(","):
            omega, weight = item.split(":")
            terms.append((float(omega), float(weight)))
        return cls.multi_oscillator(terms)
    raise ScenarioError(f"unknown response type {kind!r} in [{section}]")


def build_geometry(scn):
    section = "geometry"
    kind = scn.get(section, "kind", required=True).lower()
    if kind == "half_space":
        return HalfSpace(build_stack(scn, scn.get(section, "stack",
                                                  required=True)))
    if kind == "plate":
        return Plate(build_material(scn, scn.get(section, "material",
                                                 required=True)),
                     scn.get_float(section, "thickness", required=True))
    if kind == "cavity":
        return Cavity(build_stack(scn, scn.get(section, "left",
                                               required=True)),
                      build_stack(scn, scn.get(section, "right",
                                               required=True)),
                      scn.get_float(section, "gap", required=True))
    if kind == "ideal_mirror":
        return IdealMirror(scn.get(section, "mirror", "conductor"))
    raise ScenarioError(f"unknown geometry kind {kind!r}")


def build_positions(scn):
    raw = scn.get("nbody", "positions", required=True)
    positions = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = [float(v) for v in chunk.replace(",", " ").split()]
        if len(coords) != 3:
            raise ScenarioError(f"position {chunk!r} is not a 3-vector")
        positions.append(np.array(coords))
    return positions


@dataclass
class RunConfig:
    command: str
    sweep_from: float | None
    sweep_to: float | None
    points: int
    spacing: str
    temperature: float
    tolerance: float
    zero_mode: str
    omega_ref_si: float | None
    si_output: bool
    extras: dict = field(default_factory=dict)

    def grid(self):
        if self.sweep_from is None:
            return None
        if self.points == 1:
            return np.array([self.sweep_from])
        if self.spacing == "log":
            return np.exp(np.linspace(math.log(self.sweep_from),
                                      math.log(self.sweep_to), self.points))
        return np.linspace(self.sweep_from, self.sweep_to, self.points)


def build_run(scn, points_override=None, tol_override=None):
    section = "run"
    command = scn.get(section, "command", required=True)
    if command not in _RUN_COMMANDS:
        raise ScenarioError(f"unknown command {command!r}")
    sweep_from = scn.get_float(section, "from")
    sweep_to = scn.get_float(section, "to", sweep_from)
    points = points_override or int(scn.get_float(section, "points", 1))
    spacing = scn.get(section, "spacing", "log").lower()
    if spacing not in ("log", "linear"):
        raise ScenarioError(f"unknown spacing {spacing!r}")
    if sweep_from is not None:
        if sweep_from <= 0 and spacing == "log":
            raise ScenarioError("log-spaced sweeps need positive bounds")
        if sweep_to < sweep_from:
            raise ScenarioError("sweep range must be ordered (from <= to)")
    zero_mode = scn.get(section, "zero_mode", "drude")
    if zero_mode not in ("drude", "plasma"):
        raise ScenarioError(f"unknown zero_mode {zero_mode!r}")
    return RunConfig(
        command=command,
        sweep_from=sweep_from,
        sweep_to=sweep_to,
        points=points,
        spacing=spacing,
        temperature=scn.get_float(section, "temperature", 0.0),
        tolerance=tol_override or scn.get_float(section, "tol", 1.0e-8),
        zero_mode=zero_mode,
        omega_ref_si=scn.get_float(section, "omega_ref_si"),
        si_output=scn.get_bool(section, "si_output", False),
        extras={k: v for k, v in scn.sections.get(section, {}).items()},
    )


def validate(scn):
    """Collect diagnostics (unresolved references, regime and unit issues).

    Returns a list of strings; an empty list means the scenario is clean.
    Diagnostics never raise.
    """
    diagnostics = []
    try:
        run = build_run(scn)
    except (ScenarioError, ValueError) as exc:
        return [f"run: {exc}"]

    def check(label, builder, *args):
        try:
            builder(*args)
            return True
        except (DispersionError, ValueError) as exc:
            diagnostics.append(f"{label}: {exc}")
            return False

    needs = run.command
    if needs in ("cp-potential", "cp-force"):
        check("atom", build_response, scn, "atom")
        if check("geometry", build_geometry, scn):
            geometry = build_geometry(scn)
            if isinstance(geometry, Plate) and run.sweep_from is not None:
                n0 = math.sqrt(mat.static_epsilon(geometry.material)
                               * mat.static_mu(geometry.material))
                if geometry.thickness >= 0.1 * run.sweep_from / n0:
                    diagnostics.append(
                        "regime: plate thickness is not small against the "
                        "nearest sweep distance (thin-plate asymptotes "
                        "would not apply)")
    elif needs == "casimir-pressure":
        check("left stack", build_stack, scn, scn.get("cavity", "left",
                                                      "left"))
        check("right stack", build_stack, scn, scn.get("cavity", "right",
                                                       "right"))
        medium = scn.get("cavity", "medium", "vacuum")
        check("interspace", build_material, scn, medium)
    elif needs == "vdw-pair":
        check("atom a", build_response, scn, "atom a")
        check("atom b", build_response, scn, "atom b")
    elif needs == "vdw-nbody":
        if check("positions", build_positions, scn):
            names = scn.get("nbody", "atoms", required=False)
            if names:
                for name in names.split(","):
                    check(f"atom {name.strip()}", build_response, scn,
                          f"atom {name.strip()}")
    elif needs in ("dynamics-resonant", "dynamics-offresonant"):
        check("material", build_material, scn,
              scn.get("excited_atom", "material", "vacuum"))
    if run.si_output and run.omega_ref_si is None:
        diagnostics.append("units: si_output requested without omega_ref_si")
    return diagnostics
