"""Delimited output tables with scenario-echo metadata headers.

The metadata block repeats the canonical scenario text under '# ' comment
prefixes, so stripping the prefixes and re-parsing it reproduces the exact
run (round-trip property).  Rows are locale-independent: decimal points,
scientific notation with 17 significant digits, newline-terminated lines.
"""

from dataclasses import dataclass, field
import io

from . import __version__

# physical dimension of a column in powers of (omega_ref, c); used only for
# the optional SI rescale on output
COLUMN_KINDS = ("dimensionless", "length", "frequency", "time", "energy",
                "pressure", "force", "rate")

_HBAR = 1.054571817e-34
_C = 299792458.0


def si_factor(kind, omega_ref):
    """Multiplier turning a natural-unit column into SI."""
    if kind == "dimensionless":
        return 1.0
    if kind == "length":
        return _C / omega_ref
    if kind == "frequency" or kind == "rate":
        return omega_ref
    if kind == "time":
        return 1.0 / omega_ref
    if kind == "energy":
        return _HBAR * omega_ref
    if kind == "pressure":
        return _HBAR * omega_ref * (omega_ref / _C) ** 3
    if kind == "force":
        return _HBAR * omega_ref ** 2 / _C
    raise ValueError(f"unknown column kind {kind!r}")


def format_number(value):
    return format(float(value), ".16e")


@dataclass
class OutputTable:
    scenario_text: str
    columns: list
    kinds: list
    rows: list = field(default_factory=list)

    def add_row(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row length does not match columns")
        self.rows.append(tuple(values))

    def to_csv(self, si_omega_ref=None):
        """Render the table; si_omega_ref rescales dimensional columns."""
        out = io.StringIO()
        out.write(f"# tool = dispersim {__version__}\n")
        out.write(f"# units = {'si' if si_omega_ref else 'natural'}\n")
        for line in self.scenario_text.rstrip("\n").split("\n"):
            out.write(f"# {line}\n" if line else "#\n")
        out.write(",".join(self.columns) + "\n")
        factors = [si_factor(kind, si_omega_ref) if si_omega_ref else 1.0
                   for kind in self.kinds]
        for row in self.rows:
            cells = []
            for value, factor, kind in zip(row, factors, self.kinds):
                if isinstance(value, str):
                    cells.append(value)
                else:
                    cells.append(format_number(value * factor))
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def write(self, path, si_omega_ref=None):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv(si_omega_ref))


def scenario_from_csv(text):
    """Recover the embedded scenario text from a rendered table."""
    lines = []
    for line in text.split("\n"):
        if not line.startswith("#"):
            break
        body = line[2:] if line.startswith("# ") else line[1:]
        if body.startswith("tool =") or body.startswith("units ="):
            continue
        lines.append(body)
    return "\n".join(lines) + "\n"
