"""Batch front end: JSON config in, JSON report and CSV/PNG plot data out.

Exit codes: 0 a verdict or a completed computation, 2 invalid input,
3 undetermined (no certificate either way, or no feasible bound found),
4 internal numerical failure. Errors are printed to stderr as a single
JSON line ``{"error": <code>, "message": <text>}``.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import oracle, plotting, reporting
from .curves import FrequencyRange, make_curve
from .errors import (FraclmiError, InvalidInput, NoFeasibleBound, NumericalFailure,
                     ParseError, UnstableSystemError)
from .lmi import build_hinf_lmi, build_linf_lmi
from .model import FosModel, is_stable
from .oracle import GridSpec
from .sdp import SolverOptions, compute_norm, solve_feasibility

__all__ = ["AnalysisConfig", "AnalysisReport", "run_analysis", "main", "EXIT_CODES"]

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNDETERMINED = 3
EXIT_NUMERICAL = 4

EXIT_CODES = {
    "holds": EXIT_OK,
    "violated": EXIT_OK,
    "completed": EXIT_OK,
    "undetermined": EXIT_UNDETERMINED,
}

COMMANDS = ("check", "norm", "sweep", "stability")


def _block(d, name, allowed, required=()):
    if not isinstance(d, dict):
        raise ParseError(f"{name} must be a JSON object")
    unknown = set(d) - set(allowed)
    if unknown:
        raise ParseError(f"unknown fields in {name}: {sorted(unknown)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ParseError(f"{name} is missing {missing}")
    return d


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{name} must be a number")
    return float(value)


def _integer(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{name} must be an integer")
    return int(value)


def _array(value, name):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return np.array([[float(value)]])
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{name} must be a nested numeric array") from None
    if arr.ndim > 2:
        raise ParseError(f"{name} must be at most two-dimensional")
    return arr


@dataclass(frozen=True)
class AnalysisConfig:
    """Parsed and validated analysis configuration."""

    system: FosModel
    norm: str = "linf"
    frange: FrequencyRange = field(default_factory=FrequencyRange.entire)
    mode: str = "compute"
    delta: float = None
    tol: float = 1e-3
    solver: SolverOptions = field(default_factory=SolverOptions)
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        if self.norm not in ("linf", "hinf"):
            raise InvalidInput(f"norm must be linf or hinf, got {self.norm!r}")
        if self.mode not in ("check", "compute"):
            raise InvalidInput(f"mode must be check or compute, got {self.mode!r}")
        if self.delta is not None and not (self.delta > 0 and math.isfinite(self.delta)):
            raise InvalidInput("delta must be a positive finite number")
        if self.mode == "check" and self.delta is None:
            raise InvalidInput("check mode requires delta")
        if not self.tol > 0:
            raise InvalidInput("tol must be positive")
        if self.norm == "hinf" and self.frange.kind != "entire":
            raise InvalidInput("hinf analysis only accepts the entire frequency range")

    @classmethod
    def from_dict(cls, d):
        d = _block(d, "config", ("system", "analysis", "solver", "oracle"), ("system",))
        s = _block(d["system"], "system", ("A", "B", "C", "D", "nu"), ("A", "B", "C", "D", "nu"))
        system = FosModel(_array(s["A"], "A"), _array(s["B"], "B"), _array(s["C"], "C"),
                          _array(s["D"], "D"), _number(s["nu"], "nu"))

        a = _block(d.get("analysis", {}), "analysis", ("norm", "frequency_range", "mode"))
        norm = a.get("norm", "linf")
        fr = a.get("frequency_range", {"kind": "entire"})
        _block(fr, "frequency_range", ("kind", "omega_l", "omega_1", "omega_2", "omega_h"),
               ("kind",))
        frange = FrequencyRange.from_dict(
            {k: (v if k == "kind" else _number(v, k)) for k, v in fr.items()})
        m = _block(a.get("mode", {"kind": "compute"}), "mode", ("kind", "delta", "tol"),
                   ("kind",))
        delta = _number(m["delta"], "delta") if "delta" in m else None
        tol = _number(m["tol"], "tol") if "tol" in m else 1e-3

        sv = _block(d.get("solver", {}), "solver", ("margin", "max_iter", "restarts", "seed"))
        solver = SolverOptions(
            margin=_number(sv["margin"], "margin") if sv.get("margin") is not None else None,
            max_iter=_integer(sv.get("max_iter", 5000), "max_iter"),
            restarts=_integer(sv.get("restarts", 3), "restarts"),
            seed=_integer(sv.get("seed", 0), "seed"))

        o = _block(d.get("oracle", {}), "oracle", ("grid_points", "omega_min", "omega_max"))
        grid = GridSpec(points=_integer(o.get("grid_points", 2000), "grid_points"),
                        omega_min=_number(o.get("omega_min", 1e-4), "omega_min"),
                        omega_max=_number(o.get("omega_max", 1e4), "omega_max"))
        return cls(system, norm, frange, m["kind"], delta, tol, solver, grid)

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from None
        return cls.from_dict(d)

    @classmethod
    def from_file(cls, path):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read config {path}: {exc.strerror or exc}") from None
        return cls.from_json(text)

    def with_seed(self, seed):
        return replace(self, solver=replace(self.solver, seed=int(seed)))


@dataclass
class AnalysisReport:
    """Outcome of one CLI command. ``timing`` is the only nondeterministic field."""

    command: str
    verdict: str
    norm: str
    frequency_range: dict
    nu: float
    delta: float = None
    bracket: dict = None
    lmi: dict = None
    oracle: dict = None
    stability: dict = None
    timing: dict = field(default_factory=dict)
    sweep: object = field(default=None, repr=False)
    stability_report: object = field(default=None, repr=False)

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def as_dict(self):
        out = {"command": self.command, "verdict": self.verdict, "norm": self.norm,
               "frequency_range": self.frequency_range, "nu": self.nu}
        for key in ("delta", "bracket", "lmi", "oracle", "stability"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out["timing"] = self.timing
        return out

    def to_json(self):
        return reporting.dumps(self.as_dict())


def _witness_dict(witness):
    return {name: {"re": np.real(M).tolist(), "im": np.imag(M).tolist()}
            for name, M in sorted(witness.items())}


def _oracle_dict(config, sweep):
    out = sweep.as_dict()
    if config.norm == "linf":
        # the LMI certifies the whole curve, which for nu != 1 reaches beyond
        # the frequency response; its peak is a floor on any certifiable delta
        curve = oracle.sweep_curve(config.system, make_curve(config.frange, config.system.nu),
                                   config.grid)
        out["curve_peak_sigma"] = curve.peak_sigma
        out["curve_peak_signed_omega"] = curve.peak_omega
    return out


def _check(config, report, sweep):
    delta = config.delta
    report.delta = delta
    if sweep.peak_sigma >= delta:
        # the sampled response already refutes the bound; no certificate search needed
        report.verdict = "violated"
        report.lmi = {"verdict": "skipped"}
        return
    if config.norm == "hinf":
        prob = build_hinf_lmi(config.system, delta)
    else:
        prob = build_linf_lmi(config.system, config.frange, delta)
    sv = config.solver
    out = solve_feasibility(prob.map, margin=sv.margin, budget=sv.max_iter, seed=sv.seed,
                            restarts=sv.restarts, mu_start=sv.mu_start, mu_stop=sv.mu_stop)
    report.lmi = {"theorem": prob.theorem, **out.as_dict()}
    if out.feasible:
        report.lmi["witness"] = _witness_dict(out.witness)
        report.verdict = "holds"
    else:
        report.verdict = "undetermined"


def run_analysis(config, command=None):
    """Run one command on a parsed configuration.

    ``command`` defaults to ``check`` for check-mode configs and ``norm``
    otherwise. Deterministic for a fixed config and seed apart from
    ``timing``.
    """
    if command is None:
        command = "check" if config.mode == "check" else "norm"
    if command not in COMMANDS:
        raise InvalidInput(f"unknown command {command!r}")
    t0 = time.perf_counter()
    sys_ = config.system
    stab = is_stable(sys_)
    report = AnalysisReport(command=command, verdict="completed", norm=config.norm,
                            frequency_range=config.frange.as_dict(), nu=sys_.nu,
                            stability=stab.as_dict(), stability_report=stab)
    if command == "stability":
        report.timing = {"seconds": time.perf_counter() - t0}
        return report
    if config.norm == "hinf" and not stab.stable:
        raise UnstableSystemError("H-infinity analysis requires a stable system")

    sweep = oracle.sweep_linf(sys_, config.frange, config.grid)
    report.sweep = sweep
    report.oracle = _oracle_dict(config, sweep)
    if command == "check":
        if config.delta is None:
            raise InvalidInput("check requires analysis.mode.delta")
        _check(config, report, sweep)
    elif command == "norm":
        bracket = compute_norm(sys_, config.norm, config.frange, tol=config.tol,
                               solver=config.solver, grid=config.grid)
        report.bracket = bracket.as_dict()
        report.lmi = {"evaluations": [{"delta": d, "verdict": v, "best_margin": m}
                                      for d, v, m in bracket.evaluations]}
    report.timing = {"seconds": time.perf_counter() - t0}
    return report


def _write_plots(report, path, title=None):
    path = Path(path)
    png = path.with_suffix(".png")
    if report.command == "stability":
        reporting.emit_eigen_data(report.stability_report, path)
        fig = plotting.eigenvalue_figure(report.stability_report, report.nu, title)
    else:
        reporting.emit_plot_data(report.sweep, path)
        fig = plotting.sweep_figure(report.sweep, report.delta, title)
    try:
        plotting.save_figure(fig, png)
    except OSError as exc:
        raise reporting.OutputError(f"cannot write {png}: {exc.strerror or exc}") from None
    return path, png


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # keep usage errors on the single-line JSON error channel
    def error(self, message):
        raise _UsageError(message)


def build_parser():
    parser = _Parser(
        prog="fraclmi",
        description="Finite-frequency norm bounds for fractional-order systems via LMIs.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check": "certify or refute a norm bound delta",
        "norm": "bracket the norm between the oracle peak and the smallest certified bound",
        "sweep": "frequency sweep of the largest singular value",
        "stability": "eigenvalue-argument stability test",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, metavar="PATH", help="JSON analysis config")
        p.add_argument("--out", metavar="PATH", help="write the JSON report here (default stdout)")
        p.add_argument("--plot", metavar="PATH", help="write CSV plot data here, PNG alongside")
        p.add_argument("--seed", type=int, metavar="N", help="override solver.seed")
    return parser


def _fail(code, message, exit_code):
    print(json.dumps({"error": code, "message": " ".join(str(message).split())}),
          file=sys.stderr)
    return exit_code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return _fail("usage_error", exc, EXIT_INVALID)
    try:
        config = AnalysisConfig.from_file(args.config)
        if args.seed is not None:
            config = config.with_seed(args.seed)
        report = run_analysis(config, args.command)
        text = report.to_json()
        if args.plot:
            _write_plots(report, args.plot)
        if args.out:
            try:
                Path(args.out).write_text(text)
            except OSError as exc:
                raise reporting.OutputError(
                    f"cannot write {args.out}: {exc.strerror or exc}") from None
        else:
            sys.stdout.write(text)
    except InvalidInput as exc:
        return _fail(exc.code, exc, EXIT_INVALID)
    except NoFeasibleBound as exc:
        return _fail(exc.code, exc, EXIT_UNDETERMINED)
    except reporting.OutputError as exc:
        return _fail(exc.code, exc, EXIT_INVALID)
    except (FraclmiError, ArithmeticError, np.linalg.LinAlgError) as exc:
        code = getattr(exc, "code", NumericalFailure.code)
        return _fail(code, exc, EXIT_NUMERICAL)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
