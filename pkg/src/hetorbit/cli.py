"""Command-line entry point.

Subcommands: ``solve``, ``portrait``, ``verify``, ``sweep`` and ``delta``.

Settings come from, in increasing precedence: built-in defaults, a JSON
config file (``--config``), the ``HET_SEED`` environment variable (seed only)
and explicit flags.

Exit codes: 0 success, 1 verification failure, 2 non-convergence or denied
certificate, 3 invalid input.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

from .action import OutOfRange, find_delta
from .core import GAMMA, TWO_PI, Params, residual
from .minimizer import (
    CertificateDenied,
    ConstraintSpec,
    NotConverged,
    c_epsilon_sweep,
    certify,
    heteroclinic,
    minimize,
)
from .portrait import count_classes, portrait_grid, write_csv, write_svg

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_SOLVE = 2
EXIT_INVALID = 3

log = logging.getLogger("hetorbit")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class RunConfig:
    amplitude: float = 1.0
    target_multiple: int = 1
    epsilon_schedule: list[float] = field(default_factory=lambda: [0.6, 0.3, 0.15])
    window_half_width: int | str = "auto"
    tol_grad: float = 1e-10
    tol_residual: float = 1e-8
    max_iter: int = 100_000
    seed: int = 0
    output: str = "orbit.csv"
    summary: str = "summary.json"

    def validate(self) -> None:
        if not (isinstance(self.amplitude, (int, float)) and math.isfinite(self.amplitude) and self.amplitude > 0):
            raise ConfigError("amplitude", f"must be a positive number, got {self.amplitude!r}")
        if int(self.target_multiple) != self.target_multiple or self.target_multiple == 0:
            raise ConfigError("target_multiple", "must be a nonzero integer k (target 2kπ)")
        sched = list(self.epsilon_schedule)
        if not sched:
            raise ConfigError("epsilon_schedule", "must not be empty")
        for e in sched:
            if not (0 < e < GAMMA):
                raise ConfigError("epsilon_schedule", f"values must lie in (0, 2π/3), got {e!r}")
        if any(b >= a for a, b in zip(sched, sched[1:])):
            raise ConfigError("epsilon_schedule", "must be strictly decreasing")
        if self.window_half_width != "auto":
            if not isinstance(self.window_half_width, int) or self.window_half_width < 4:
                raise ConfigError("window_half_width", "must be an integer >= 4 or 'auto'")
        for name in ("tol_grad", "tol_residual"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, "must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter", "must be positive")

    @property
    def half_width(self) -> int | None:
        return None if self.window_half_width == "auto" else int(self.window_half_width)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _half_width(text: str):
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi' with lo < hi, got {text!r}")
    return vals[0], vals[1]


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _g(x: float) -> str:
    return f"{x:.17g}"


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be a JSON object")
    unknown = set(data) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown config key")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    values = load_config(getattr(args, "config", None))
    env_seed = os.environ.get("HET_SEED")
    if env_seed is not None:
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError("seed", f"HET_SEED must be an integer, got {env_seed!r}")
    flag_map = {
        "amplitude": "amplitude",
        "target": "target_multiple",
        "epsilon_schedule": "epsilon_schedule",
        "half_width": "window_half_width",
        "tol_grad": "tol_grad",
        "tol_residual": "tol_residual",
        "max_iter": "max_iter",
        "seed": "seed",
        "output": "output",
        "summary": "summary",
    }
    for flag, key in flag_map.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if getattr(args, "epsilon", None) is not None:
        values["epsilon_schedule"] = [args.epsilon]
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def orbit_csv(window, params) -> str:
    """Rows ``n,y,dy,residual`` over ``[n0 - 1, n1 + 1]``; tails are the first and last rows."""
    res = residual(window, params)
    lo, hi = window.first_index - 1, window.last_index + 1
    ext = window.extended(lo, hi + 1)
    buf = io.StringIO()
    buf.write("n,y,dy,residual\n")
    for k in range(hi - lo + 1):
        buf.write(f"{lo + k},{_g(ext[k])},{_g(ext[k + 1] - ext[k])},{_g(res.values[k])}\n")
    return buf.getvalue()


def cmd_solve(args) -> int:
    cfg = build_config(args)
    params = Params(cfg.amplitude)
    target = TWO_PI * cfg.target_multiple
    status = "granted"
    code = EXIT_OK
    try:
        if len(cfg.epsilon_schedule) == 1:
            spec = ConstraintSpec(cfg.epsilon_schedule[0], target)
            r = minimize(params, spec, cfg.half_width, tol_grad=cfg.tol_grad, max_iter=cfg.max_iter)
            h = certify([r], cfg.epsilon_schedule, cfg.tol_residual)
        else:
            h = heteroclinic(
                params,
                target,
                cfg.epsilon_schedule,
                cfg.half_width,
                tol_grad=cfg.tol_grad,
                tol_residual=cfg.tol_residual,
                max_iter=cfg.max_iter,
            )
    except (NotConverged, CertificateDenied) as exc:
        print(f"solve: {exc}", file=sys.stderr)
        status = "not_converged" if isinstance(exc, NotConverged) else "denied"
        code = EXIT_SOLVE
        h = exc.result
    result, stages = h.result, h.stages
    summary = {
        "amplitude": cfg.amplitude,
        "target_multiple": cfg.target_multiple,
        "epsilon_schedule": cfg.epsilon_schedule,
        "window_half_width": len(result.window) // 2,
        "action": result.action_value,
        "max_residual": result.max_residual,
        "edge_residual": result.edge_residual,
        "constraint_active": result.constraint_active,
        "certificate": status,
        "iterations": sum(s.iterations for s in stages),
        "stage_actions": [s.action_value for s in stages],
        "converged": result.converged,
    }
    atomic_write(cfg.output, orbit_csv(result.window, params))
    atomic_write(cfg.summary, json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(json.dumps(summary, sort_keys=True))
    return code


def cmd_portrait(args) -> int:
    if not (args.amplitude > 0 and math.isfinite(args.amplitude)):
        raise ConfigError("amplitude", f"must be a positive number, got {args.amplitude!r}")
    if args.steps < 1:
        raise ConfigError("steps", "must be at least 1")
    params = Params(args.amplitude)
    traces = portrait_grid(params, steps=args.steps)
    buf = io.StringIO()
    write_csv(traces, buf)
    atomic_write(args.csv, buf.getvalue())
    buf = io.StringIO()
    write_svg(traces, buf, args.x_range, args.dx_range)
    atomic_write(args.svg, buf.getvalue())
    bounded = sum(
        1 for t in traces if t.classification.value == "libration" and float(abs(t.x).max()) < math.pi
    )
    out = {
        "amplitude": args.amplitude,
        "steps": args.steps,
        "traces": len(traces),
        "lengths": sorted({len(t) for t in traces}),
        "classes": count_classes(traces),
        "bounded_librations": bounded,
        "overflow": sum(t.overflow for t in traces),
    }
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("HET_SEED", "0"))
    if not (args.amplitude > 0):
        raise ConfigError("amplitude", "must be positive")
    report = verify.run(names, seed=seed, amplitude=args.amplitude)
    passed = all(r["passed"] for r in report.values())
    text = json.dumps({"passed": passed, "suites": report}, indent=2, sort_keys=True, default=float) + "\n"
    if args.report:
        atomic_write(args.report, text)
    sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_sweep(args) -> int:
    if not (args.amplitude > 0 and math.isfinite(args.amplitude)):
        raise ConfigError("amplitude", f"must be a positive number, got {args.amplitude!r}")
    eps_grid = args.epsilons
    if not eps_grid or any(not (0 < e < GAMMA) for e in eps_grid):
        raise ConfigError("epsilons", "values must lie in (0, 2π/3)")
    if not args.targets or any(k == 0 for k in args.targets):
        raise ConfigError("targets", "must be nonzero integers")
    seed = args.seed if args.seed is not None else int(os.environ.get("HET_SEED", "0"))
    half = None if args.half_width in (None, "auto") else args.half_width
    params = Params(args.amplitude)
    targets = [TWO_PI * k for k in args.targets]
    rows = []
    table: dict[float, list[float]] = {t: [] for t in targets}
    all_conv = True
    for eps in eps_grid:
        sw = c_epsilon_sweep(params, eps, targets, half, seed=seed)
        for t in targets:
            c = sw.values[t]
            conv = sw.converged[t]
            all_conv &= conv
            table[t].append(c)
            rows.append(f"{_g(eps)},{_g(t)},{_g(c)},{str(conv).lower()}\n")
    atomic_write(args.output, "epsilon,target,c_value,converged\n" + "".join(rows))
    order = sorted(range(len(eps_grid)), key=lambda i: -eps_grid[i])
    monotone = {}
    for t, vals in table.items():
        seq = [vals[i] for i in order]
        monotone[_g(t)] = all(b <= a + args.monotone_tol for a, b in zip(seq, seq[1:]))
    print(json.dumps({"monotone": monotone, "converged": all_conv}, sort_keys=True))
    if not all_conv:
        return EXIT_SOLVE
    if not all(monotone.values()):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_delta(args) -> int:
    if not (args.amplitude > 0 and math.isfinite(args.amplitude)):
        raise ConfigError("amplitude", f"must be a positive number, got {args.amplitude!r}")
    try:
        d = find_delta(args.epsilon, Params(args.amplitude))
    except OutOfRange as exc:
        raise ConfigError("epsilon", str(exc))
    print(_g(d))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hetorbit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute and certify a heteroclinic orbit")
    s.add_argument("--config")
    s.add_argument("--amplitude", type=float)
    s.add_argument("--target", type=int, help="integer k; the orbit joins 0 to 2kπ")
    s.add_argument("--epsilon-schedule", type=_floats)
    s.add_argument("--epsilon", type=float, help="single ε instead of a schedule")
    s.add_argument("--half-width", type=_half_width)
    s.add_argument("--tol-grad", type=float)
    s.add_argument("--tol-residual", type=float)
    s.add_argument("--max-iter", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--output", help="orbit CSV path (default orbit.csv)")
    s.add_argument("--summary", help="summary JSON path (default summary.json)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("portrait", help="phase portrait in original coordinates")
    s.add_argument("--amplitude", type=float, default=0.1)
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--csv", default="portrait.csv")
    s.add_argument("--svg", default="portrait.svg")
    s.add_argument("--x-range", type=_pair)
    s.add_argument("--dx-range", type=_pair)
    s.set_defaults(func=cmd_portrait)

    s = sub.add_parser("verify", help="run seeded property suites")
    s.add_argument(
        "--suite",
        default="all",
        choices=["all", "lemma2", "symmetry", "gradient", "norm", "map", "adjacency", "monotonicity"],
    )
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--seed", type=int)
    s.add_argument("--report", help="also write the JSON report here")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="tabulate c_ε(ξ) over an ε grid")
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--epsilons", type=_floats, default=[0.6, 0.3, 0.15])
    s.add_argument("--targets", type=_ints, default=[1], help="integers k; targets 2kπ")
    s.add_argument("--half-width", type=_half_width)
    s.add_argument("--seed", type=int)
    s.add_argument("--monotone-tol", type=float, default=1e-6)
    s.add_argument("--output", default="sweep.csv")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("delta", help="largest admissible δ for a given ε")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--amplitude", type=float, default=1.0)
    s.set_defaults(func=cmd_delta)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"hetorbit {args.command}: invalid {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (TypeError, ValueError) as exc:
        print(f"hetorbit {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
