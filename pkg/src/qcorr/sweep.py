"""Parameter-grid sweeps, audit reports and single-point records.

Rows are produced in a fixed order (first axis outer, temperature inner)
and floats are written with 15 significant digits, so identical specs give
byte-identical output.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

import numpy as np

from .errors import InvalidSpec, NumericalError
from .models import (
    AnisotropicXYParams,
    IsotropicFieldParams,
    paper_lqfi_anisotropic,
    paper_lqfi_isotropic_field,
    paper_lqu_anisotropic,
    paper_lqu_isotropic_field,
    xy_anisotropic_state,
    xy_isotropic_field_state,
)
from .quantifiers import AUDIT_EPS, Convention, CorrelationReport, correlation_report

TEMPERATURE_FLOOR = 0.01
GAP_THRESHOLD = 1e-9
OUTPUTS = ("lqfi_numeric", "lqu_numeric", "lqfi_paper", "lqu_paper", "lambda_max_m", "xi_max_w")


class Model(enum.Enum):
    ANISOTROPIC_XY = "aniso-xy"
    ISOTROPIC_XY_FIELD = "iso-xy-field"

    @property
    def axis_name(self) -> str:
        return "gamma" if self is Model.ANISOTROPIC_XY else "field"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise InvalidSpec("model", f"unknown model {value!r}; use 'aniso-xy' or 'iso-xy-field'") from None


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    return format(float(x), ".15g")


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise InvalidSpec(self.name, f"steps must be an integer >= 2, got {self.steps!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidSpec(self.name, "bounds must be finite")
        if not self.start < self.stop:
            raise InvalidSpec(self.name, f"start {self.start} must be < stop {self.stop}")

    @classmethod
    def parse(cls, name: str, text: str) -> "Axis":
        """Parse ``start:stop:steps``."""
        parts = str(text).split(":")
        if len(parts) != 3:
            raise InvalidSpec(name, f"expected start:stop:steps, got {text!r}")
        try:
            start, stop = float(parts[0]), float(parts[1])
            steps = int(parts[2])
        except ValueError:
            raise InvalidSpec(name, f"could not parse {text!r}") from None
        return cls(name, start, stop, steps)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.steps - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))


@dataclass(frozen=True)
class SweepSpec:
    model: Model
    axis1: Axis
    temperature: Axis
    coupling: float = 1.0
    outputs: tuple = OUTPUTS
    convention: Convention = Convention.ALL_PAIRS

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        object.__setattr__(self, "convention", Convention.parse(self.convention))
        if self.axis1.name != self.model.axis_name:
            raise InvalidSpec("axis1", f"model {self.model.value} sweeps {self.model.axis_name!r}, not {self.axis1.name!r}")
        if self.model is Model.ANISOTROPIC_XY and (self.axis1.start < -1 or self.axis1.stop > 1):
            raise InvalidSpec("gamma", "anisotropy must stay within [-1, 1]")
        if self.temperature.start <= 0:
            raise InvalidSpec("temperature", "start must be > 0")
        if self.temperature.start < TEMPERATURE_FLOOR:
            raise InvalidSpec("temperature", f"start {self.temperature.start} is below the floor {TEMPERATURE_FLOOR}")
        if not math.isfinite(self.coupling):
            raise InvalidSpec("coupling", "must be finite")
        outputs = tuple(self.outputs)
        unknown = [o for o in outputs if o not in OUTPUTS]
        if unknown or not outputs or len(set(outputs)) != len(outputs):
            raise InvalidSpec("outputs", f"need a non-empty subset of {OUTPUTS} without repeats, got {outputs}")
        object.__setattr__(self, "outputs", outputs)

    @property
    def columns(self) -> tuple:
        return (self.axis1.name, "temperature") + self.outputs

    def points(self) -> Iterable[tuple]:
        for a in self.axis1.values():
            for t in self.temperature.values():
                yield float(a), float(t)


@dataclass(frozen=True)
class PointResult:
    model: Model
    parameters: dict
    report: CorrelationReport
    lqfi_paper: float
    lqu_paper: float

    def outputs(self) -> dict:
        return {
            "lqfi_numeric": self.report.lqfi,
            "lqu_numeric": self.report.lqu,
            "lqfi_paper": self.lqfi_paper,
            "lqu_paper": self.lqu_paper,
            "lambda_max_m": self.report.lambda_max_m,
            "xi_max_w": self.report.xi_max_w,
        }


def evaluate_point(model, axis_value: float, temperature: float, coupling: float = 1.0,
                   convention=Convention.ALL_PAIRS) -> PointResult:
    """General-engine report plus printed closed forms at one parameter point."""
    model = Model.parse(model)
    if model is Model.ANISOTROPIC_XY:
        p = AnisotropicXYParams(axis_value, temperature)
        rho = xy_anisotropic_state(p)
        paper = paper_lqfi_anisotropic(p), paper_lqu_anisotropic(p)
        params = {"gamma": p.gamma, "temperature": p.temperature, "coupling": 1.0}
    else:
        p = IsotropicFieldParams(axis_value, temperature, coupling)
        rho = xy_isotropic_field_state(p)
        paper = paper_lqfi_isotropic_field(p), paper_lqu_isotropic_field(p)
        params = {"field": p.field, "temperature": p.temperature, "coupling": p.coupling}
    report = correlation_report(rho, convention)
    return PointResult(model, params, report, *paper)


def _validate_row(spec: SweepSpec, point: PointResult):
    out = point.outputs()
    where = f"{spec.axis1.name}={point.parameters[spec.axis1.name]}, T={point.parameters['temperature']}"
    for key in ("lqfi_numeric", "lqu_numeric"):
        if not 0.0 <= out[key] <= 1.0:
            raise NumericalError(f"{key}={out[key]} outside [0, 1] at {where}")
    for key in ("lqfi_paper", "lqu_paper"):
        if not math.isfinite(out[key]):
            raise NumericalError(f"{key} is not finite at {where}")
    if spec.convention is Convention.ALL_PAIRS and not point.report.inequality_ok:
        raise NumericalError(f"U <= Q <= 2U violated at {where}")


def sweep_points(spec: SweepSpec) -> list[PointResult]:
    results = []
    for a, t in spec.points():
        point = evaluate_point(spec.model, a, t, spec.coupling, spec.convention)
        _validate_row(spec, point)
        results.append(point)
    return results


def sweep_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for point in sweep_points(spec):
        out = point.outputs()
        row = {spec.axis1.name: point.parameters[spec.axis1.name], "temperature": point.parameters["temperature"]}
        row.update((k, out[k]) for k in spec.outputs)
        rows.append(row)
    return rows


def _writer(stream: TextIO):
    return csv.writer(stream, lineterminator="\n")


def write_rows_csv(columns, rows, stream: TextIO):
    w = _writer(stream)
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])


def run_sweep(spec: SweepSpec, stream: Optional[TextIO] = None, fmt_: str = "csv") -> list[dict]:
    """Evaluate the grid and write it to ``stream`` as CSV (or JSON)."""
    rows = sweep_rows(spec)
    if stream is not None:
        if fmt_ == "json":
            json.dump({"columns": list(spec.columns), "rows": rows}, stream, indent=1)
            stream.write("\n")
        else:
            write_rows_csv(spec.columns, rows, stream)
    return rows


def sweep_csv(spec: SweepSpec) -> str:
    buf = io.StringIO()
    run_sweep(spec, buf)
    return buf.getvalue()


# -- audit ----------------------------------------------------------------------

@dataclass(frozen=True)
class AuditRow:
    axis_value: float
    temperature: float
    u: float
    q: float
    chain_ok: bool
    paper_numeric_gap_lqfi: float
    paper_numeric_gap_lqu: float


@dataclass
class AuditReport:
    spec: SweepSpec
    rows: list
    summary: dict = field(default_factory=dict)

    @property
    def columns(self) -> tuple:
        return (self.spec.axis1.name, "temperature", "lqu", "lqfi", "chain_ok",
                "paper_numeric_gap_lqfi", "paper_numeric_gap_lqu")

    def row_dicts(self) -> list[dict]:
        return [dict(zip(self.columns, (r.axis_value, r.temperature, r.u, r.q, r.chain_ok,
                                        r.paper_numeric_gap_lqfi, r.paper_numeric_gap_lqu)))
                for r in self.rows]

    def write(self, stream: TextIO, fmt_: str = "csv"):
        if fmt_ == "json":
            json.dump({"rows": self.row_dicts(), "summary": self.summary}, stream, indent=1)
            stream.write("\n")
            return
        write_rows_csv(self.columns, self.row_dicts(), stream)
        stream.write("\n# summary\n")
        for key, value in self.summary.items():
            if isinstance(value, (list, tuple)):
                value = " ".join(fmt(v) for v in value)
            elif not isinstance(value, str):
                value = fmt(value)
            stream.write(f"# {key}: {value}\n")


def _argmax_point(rows, attr):
    best = max(rows, key=lambda r: getattr(r, attr))
    return getattr(best, attr), [best.axis_value, best.temperature]


def _gap_region(rows, attr):
    hits = [r.axis_value for r in rows if getattr(r, attr) > GAP_THRESHOLD]
    return [min(hits), max(hits)] if hits else None


def locate_kink(axis_values: np.ndarray, q_values: np.ndarray) -> float:
    """Axis value with the largest absolute second difference of ``q``."""
    d2 = np.abs(np.diff(q_values, 2))
    return float(axis_values[1:-1][int(np.argmax(d2))])


def run_audit(spec: SweepSpec, stream: Optional[TextIO] = None, fmt_: str = "csv") -> AuditReport:
    """Inequality and printed-vs-numeric divergence report over a grid.

    The summary counts ``U <= Q <= 2U`` violations (1e-10 tolerance), gives
    the largest printed-vs-numeric gaps with their location, and locates the
    kink of the numeric LQFI along the first axis at the lowest temperature.
    """
    rows = []
    for a, t in spec.points():
        point = evaluate_point(spec.model, a, t, spec.coupling, spec.convention)
        q, u = point.report.lqfi, point.report.lqu
        rows.append(AuditRow(
            axis_value=a,
            temperature=t,
            u=u,
            q=q,
            chain_ok=bool(u - AUDIT_EPS <= q <= 2 * u + AUDIT_EPS),
            paper_numeric_gap_lqfi=abs(point.lqfi_paper - q),
            paper_numeric_gap_lqu=abs(point.lqu_paper - u),
        ))
    t_low = float(spec.temperature.values()[0])
    low = [r for r in rows if r.temperature == t_low]
    axis = np.array([r.axis_value for r in low])
    kink = locate_kink(axis, np.array([r.q for r in low])) if len(low) >= 3 else None
    expected = spec.coupling if spec.model is Model.ISOTROPIC_XY_FIELD else None
    max_q, at_q = _argmax_point(rows, "paper_numeric_gap_lqfi")
    max_u, at_u = _argmax_point(rows, "paper_numeric_gap_lqu")
    summary = {
        "model": spec.model.value,
        "convention": spec.convention.value,
        "points": len(rows),
        "chain_violations": sum(not r.chain_ok for r in rows),
        "max_gap_lqfi": max_q,
        "argmax_gap_lqfi": at_q,
        "max_gap_lqu": max_u,
        "argmax_gap_lqu": at_u,
        "gap_threshold": GAP_THRESHOLD,
        "gap_points_lqfi": sum(r.paper_numeric_gap_lqfi > GAP_THRESHOLD for r in rows),
        "gap_points_lqu": sum(r.paper_numeric_gap_lqu > GAP_THRESHOLD for r in rows),
        "gap_region_lqfi": _gap_region(rows, "paper_numeric_gap_lqfi") or "none",
        "gap_region_lqu": _gap_region(rows, "paper_numeric_gap_lqu") or "none",
        "kink_temperature": t_low,
        "kink_location": kink if kink is not None else "n/a",
        "kink_expected": expected if expected is not None else "n/a",
        "kink_grid_step": spec.axis1.step,
        "kink_ok": (abs(kink - expected) <= spec.axis1.step + 1e-12
                    if kink is not None and expected is not None else "n/a"),
    }
    report = AuditReport(spec, rows, summary)
    if stream is not None:
        report.write(stream, fmt_)
    return report


# -- single point ---------------------------------------------------------------

def run_point(model, axis_value: float, temperature: float, coupling: float = 1.0,
              convention=Convention.ALL_PAIRS) -> dict:
    """Full report for one parameter point as an ordered, JSON-ready dict."""
    point = evaluate_point(model, axis_value, temperature, coupling, convention)
    record = {"model": point.model.value, "parameters": point.parameters}
    record.update(point.report.as_dict())
    record["lqfi_paper"] = point.lqfi_paper
    record["lqu_paper"] = point.lqu_paper
    return record
