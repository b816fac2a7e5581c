"""Command-line front end: ``verify``, ``table``, ``wigner`` and ``thresholds``.

Settings come from an optional JSON file (``--config``); explicit flags win.
Exit codes: 0 success, 1 invalid configuration, 2 oracle failure, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import closed_form as cf
from .fock_oracle import OracleConfig, TruncationError
from .phase_space import DIFF_AXES, SUM_AXES, wigner_grid
from .state_params import StateParams, derive

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("verify", "table", "wigner", "thresholds")
QUANTITIES = ("g", "R_ab", "SV", "fidelity")


class ConfigError(ValueError):
    pass


@dataclass
class Sweep:
    r_min: float = 0.05
    r_max: float = 1.5
    r_step: float = 0.05
    nbars: list = field(default_factory=lambda: [0.01])
    mn_pairs: list = field(default_factory=lambda: [(0, 1)])

    def __post_init__(self):
        if not self.r_step > 0:
            raise ConfigError("r_step must be > 0")
        if self.r_min < 0 or self.r_max < self.r_min:
            raise ConfigError("need 0 <= r_min <= r_max")
        if not self.nbars or not self.mn_pairs:
            raise ConfigError("sweep lists must be nonempty")

    def r_values(self) -> np.ndarray:
        count = int(math.floor((self.r_max - self.r_min) / self.r_step + 1e-9)) + 1
        return np.round(self.r_min + self.r_step * np.arange(count), 12)


@dataclass
class RunConfig:
    command: str
    params: StateParams = field(default_factory=StateParams)
    sweep: Sweep = field(default_factory=Sweep)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    output_path: str | None = None
    format: str = "csv"
    quantity: str = "g"
    axis: str = SUM_AXES
    grid: int = 61
    box: float = 3.0
    profile: str = "smoke"


def fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json_rows(header, rows) -> str:
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _render(header, rows, cfg: RunConfig) -> str:
    return _json_rows(header, rows) if cfg.format == "json" else _csv(header, rows)


# ---------------------------------------------------------------- commands


def quantity_value(quantity: str, m: int, n: int, r: float, nbar: float) -> float:
    dp = derive(r=r, nbar=nbar)
    if quantity == "g":
        return cf.cross_correlation_g(m, n, dp)
    if quantity == "R_ab":
        return cf.antibunching_R(m, n, dp)
    if quantity == "SV":
        return cf.sv_witness(m, n, dp)
    if quantity == "fidelity":
        return cf.fidelity_closed(m, n, dp)
    raise ConfigError(f"unknown quantity {quantity!r}")


def table_rows(cfg: RunConfig):
    rows = []
    for m, n in sorted(cfg.sweep.mn_pairs):
        for nbar in sorted(cfg.sweep.nbars):
            for r in cfg.sweep.r_values():
                r = float(r)
                rows.append((m, n, r, nbar, cfg.quantity, quantity_value(cfg.quantity, m, n, r, nbar)))
    return rows


def cmd_table(cfg: RunConfig) -> int:
    header = ("m", "n", "r", "nbar", "quantity", "value")
    _emit(_render(header, table_rows(cfg), cfg), cfg.output_path)
    return EXIT_OK


def threshold_rows(cfg: RunConfig):
    rows = []
    for m, n in sorted(cfg.sweep.mn_pairs):
        for nbar in sorted(cfg.sweep.nbars):
            rows.append((m, n, nbar, cf.sv_threshold(m, n, nbar), cf.subtraction_benchmark_rc(nbar)))
    return rows


def cmd_thresholds(cfg: RunConfig) -> int:
    header = ("m", "n", "nbar", "r_a", "r_c")
    _emit(_render(header, threshold_rows(cfg), cfg), cfg.output_path)
    return EXIT_OK


def grid_axis(count: int, half: float) -> np.ndarray:
    return np.array([0.0]) if count == 1 else np.linspace(-half, half, count)


def cmd_wigner(cfg: RunConfig) -> int:
    axis = grid_axis(cfg.grid, cfg.box)
    p = cfg.params
    g = wigner_grid(p.m, p.n, p, cfg.axis, axis, axis)
    rows = [
        (g.axis_kind, float(q), float(pv), float(g.values[i, j]))
        for i, q in enumerate(g.q_values)
        for j, pv in enumerate(g.p_values)
    ]
    _emit(_render(("axis_kind", "q", "p", "w"), rows, cfg), cfg.output_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .verification import run_suite

    report = run_suite(cfg.profile, cfg.oracle)
    _emit(json.dumps(report, indent=2) + "\n", cfg.output_path)
    sys.stderr.write(
        f"verify[{cfg.profile}]: {report['n_checks']} checks, "
        f"{'all passed' if report['passed'] else 'FAILURES'}, "
        f"{len(report['paper-discrepancy'])} documented discrepancies\n"
    )
    return EXIT_OK if report["passed"] else EXIT_ORACLE


HANDLERS = {"verify": cmd_verify, "table": cmd_table, "wigner": cmd_wigner, "thresholds": cmd_thresholds}


# ---------------------------------------------------------------- parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patmsts", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with defaults; flags override it")
        sp.add_argument("--m", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--r", type=float)
        sp.add_argument("--nbar", type=float)
        sp.add_argument("--r-min", type=float)
        sp.add_argument("--r-max", type=float)
        sp.add_argument("--r-step", type=float)
        sp.add_argument("--quantity", choices=QUANTITIES)
        sp.add_argument("--axis", choices=(SUM_AXES, DIFF_AXES))
        sp.add_argument("--grid", type=int)
        sp.add_argument("--box", type=float)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--profile", choices=("smoke", "desk"))
    return parser


def _load_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def make_config(args: argparse.Namespace) -> RunConfig:
    """Merge JSON file settings with command-line flags (flags win)."""
    file_cfg = _load_file(args.config)
    known = {"m", "n", "r", "nbar", "r_min", "r_max", "r_step", "quantity", "axis", "grid", "box",
             "out", "format", "profile", "nbars", "mn_pairs", "oracle", "command"}
    unknown = set(file_cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(file_cfg)
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            merged[key] = value

    try:
        m, n = int(merged.get("m", 0)), int(merged.get("n", 1 if args.command == "wigner" else 0))
        params = StateParams(m, n, float(merged.get("r", 0.3)), float(merged.get("nbar", 0.2)))

        mn_pairs = [tuple(int(v) for v in pair) for pair in merged.get("mn_pairs", [(params.m, params.n)])]
        if args.m is not None or args.n is not None:
            mn_pairs = [(params.m, params.n)]
        nbars = [float(v) for v in merged.get("nbars", [params.nbar])]
        if args.nbar is not None:
            nbars = [params.nbar]
        for pm, pn in mn_pairs:
            StateParams(pm, pn, 0.0, 0.0)
        sweep = Sweep(
            float(merged.get("r_min", 0.05)), float(merged.get("r_max", 1.5)), float(merged.get("r_step", 0.05)),
            nbars, mn_pairs,
        )
        oracle = OracleConfig(**merged.get("oracle", {}))
        cfg = RunConfig(
            command=args.command,
            params=params,
            sweep=sweep,
            oracle=oracle,
            output_path=merged.get("out"),
            format=merged.get("format", "csv"),
            quantity=merged.get("quantity", "g"),
            axis=merged.get("axis", SUM_AXES),
            grid=int(merged.get("grid", 61)),
            box=float(merged.get("box", 3.0)),
            profile=merged.get("profile", "smoke"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.quantity not in QUANTITIES:
        raise ConfigError(f"quantity must be one of {QUANTITIES}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg.axis not in (SUM_AXES, DIFF_AXES):
        raise ConfigError(f"axis must be {SUM_AXES!r} or {DIFF_AXES!r}")
    if cfg.grid < 1 or not cfg.box > 0:
        raise ConfigError("grid must be >= 1 and box > 0")
    if cfg.profile not in ("smoke", "desk"):
        raise ConfigError("profile must be smoke or desk")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
    except ConfigError as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"cannot read config: {exc}\n")
        return EXIT_IO
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_CONFIG
    try:
        return HANDLERS[cfg.command](cfg)
    except TruncationError as exc:
        sys.stderr.write(f"oracle failure: {exc}\n")
        return EXIT_ORACLE
    except OSError as exc:
        sys.stderr.write(f"I/O failure: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
