"""``qcorr`` command line: ``sweep``, ``audit`` and ``point``.

Exit status is 0 on success, 1 for an invalid specification and 2 for a
numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path

from .errors import InvalidInput, NumericalError
from .quantifiers import Convention
from .sweep import OUTPUTS, Axis, Model, SweepSpec, fmt, run_audit, run_point, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2
CONFIG_KEYS = ("model", "gamma", "field", "temp", "coupling", "convention", "out", "format", "outputs")
DEFAULTS = {"coupling": "1", "convention": "all-pairs"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def read_config(path) -> dict:
    """``key=value`` lines; blank lines and ``#`` comments are ignored."""
    config = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in CONFIG_KEYS:
            raise InvalidInput(f"{path}:{lineno}: unknown key {key!r}")
        config[key] = value
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcorr", description="Local quantum Fisher information and local quantum uncertainty "
                                               "for two-qubit Heisenberg XY thermal states.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("sweep", "evaluate a parameter grid"),
                       ("audit", "inequality and printed-formula divergence report"),
                       ("point", "full report at one parameter point")):
        p = sub.add_parser(name, help=text)
        grid = name != "point"
        shape = "a:b:n" if grid else "x"
        p.add_argument("--config", help="key=value file; command-line flags take precedence")
        p.add_argument("--model", choices=[m.value for m in Model])
        p.add_argument("--gamma", metavar=shape, help="anisotropy (aniso-xy)")
        p.add_argument("--field", metavar=shape, help="magnetic field B (iso-xy-field)")
        p.add_argument("--temp", metavar=shape, help="temperature")
        p.add_argument("--coupling", metavar="J", help="coupling J (iso-xy-field, default 1)")
        p.add_argument("--convention", choices=[c.value for c in Convention])
        p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        if name == "sweep":
            p.add_argument("--outputs", help=f"comma-separated subset of {','.join(OUTPUTS)}")
    return parser


def _settings(args) -> dict:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _number(name, text) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise InvalidInput(f"{name}: expected a number, got {text!r}") from None


def _axis_key(model: Model) -> str:
    return "gamma" if model is Model.ANISOTROPIC_XY else "field"


def _require(settings, key):
    if settings.get(key) in (None, ""):
        raise InvalidInput(f"--{key} is required")
    return settings[key]


def spec_from_settings(settings: dict) -> SweepSpec:
    model = Model.parse(_require(settings, "model"))
    key = _axis_key(model)
    outputs = tuple(s.strip() for s in settings["outputs"].split(",")) if settings.get("outputs") else OUTPUTS
    return SweepSpec(
        model=model,
        axis1=Axis.parse(model.axis_name, _require(settings, key)),
        temperature=Axis.parse("temperature", _require(settings, "temp")),
        coupling=_number("coupling", settings["coupling"]),
        outputs=outputs,
        convention=settings["convention"],
    )


@contextlib.contextmanager
def _output(path):
    if path in (None, "", "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _run(args) -> None:
    settings = _settings(args)
    if args.command == "point":
        model = Model.parse(_require(settings, "model"))
        key = _axis_key(model)
        record = run_point(model, _number(key, _require(settings, key)), _number("temp", _require(settings, "temp")),
                           _number("coupling", settings["coupling"]), settings["convention"])
        with _output(settings.get("out")) as out:
            if settings.get("format", "json") == "csv":
                flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list))}
                flat = {**record["parameters"], **flat}
                out.write(",".join(flat) + "\n")
                out.write(",".join(v if isinstance(v, str) else fmt(v) for v in flat.values()) + "\n")
            else:
                json.dump(record, out, indent=1)
                out.write("\n")
        return
    spec = spec_from_settings(settings)
    with _output(settings.get("out")) as out:
        if args.command == "sweep":
            run_sweep(spec, out, settings.get("format", "csv"))
        else:
            run_audit(spec, out, settings.get("format", "csv"))


_VALUE_FLAGS = {"--gamma", "--field", "--temp", "--coupling"}


def _attach_negative_values(argv):
    """``--gamma -1:1:21`` -> ``--gamma=-1:1:21`` so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_FLAGS and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        _run(args)
    except InvalidInput as exc:
        print(f"qcorr: invalid specification: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, ArithmeticError) as exc:
        print(f"qcorr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"qcorr: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
