"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 validation failure, 3 gate failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .config import SolveConfig
from .dbar import GridTooLarge, solve_dbar
from .functions import CoronaDataError, spec_from_json, spec_to_json, validate_corona
from .grid import ComplexField, build_grid, sup_norm
from .koszul import DivisionGuardError, SupportViolation, solve_corona
from .partition import PartitionError
from .verify import convergence_study
from .zoo import separated_pair

EXIT_OK, EXIT_INPUT, EXIT_VALIDATION, EXIT_GATES = 0, 1, 2, 3

# Solve settings written next to zoo fixtures: the outer levels of the layered
# zero set sit within a few cells of the circle, so the fixture stands off the
# boundary and gates holomorphy away from the staircase layer.
ZOO_SOLVE_DEFAULTS = {
    "n": 256,
    "margin": 0.05,
    "backend": "auto",
    "dbar_phi_mode": "analytic",
    "delta_min": 1e-6,
    "eta_min": 1e-3,
    "tolerances": {"boundary_layers": 2},
}


class InputError(Exception):
    pass


def _load_json(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError(f"cannot read {p}: {e.strerror or e}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{p}: invalid JSON ({e})") from None
    if not isinstance(obj, dict):
        raise InputError(f"{p}: expected a JSON object")
    return obj


def _spec(obj, base: Path):
    if isinstance(obj, str):
        obj = _load_json(base / obj)
    try:
        return spec_from_json(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad function spec: {e}") from None


def load_case(path):
    """Read a case file: ``f1``, ``f2`` (inline specs or relative paths) plus config keys."""
    path = Path(path)
    raw = _load_json(path)
    for key in ("f1", "f2"):
        if key not in raw:
            raise InputError(f"{path}: missing {key!r}")
    f1 = _spec(raw["f1"], path.parent)
    f2 = _spec(raw["f2"], path.parent)
    try:
        cfg = SolveConfig.from_dict(raw)
        grid = build_grid(cfg.n, cfg.margin)
    except (TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None
    return f1, f2, cfg, grid


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6g}"


def cmd_validate(args) -> int:
    f1, f2, cfg, grid = load_case(args.config)
    try:
        prob = validate_corona(f1, f2, grid, cfg.delta_min, cfg.eta_min)
    except CoronaDataError as e:
        print(f"FAIL {e}")
        return EXIT_VALIDATION
    print(f"delta = {_fmt(prob.delta)}  (gate > {cfg.delta_min:g}: pass)")
    print(f"eta   = {_fmt(prob.eta)}  (gate > {cfg.eta_min:g}: pass)")
    print(f"n = {grid.n}, h = {grid.h:g}, cells = {grid.size}")
    return EXIT_OK


def cmd_solve(args) -> int:
    f1, f2, cfg, grid = load_case(args.config)
    try:
        prob = validate_corona(f1, f2, grid, cfg.delta_min, cfg.eta_min)
        sol = solve_corona(prob, cfg)
    except (CoronaDataError, SupportViolation, PartitionError, DivisionGuardError) as e:
        print(f"FAIL {type(e).__name__}: {e}")
        return EXIT_VALIDATION
    except GridTooLarge as e:
        raise InputError(str(e)) from None
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    rep = sol.report
    (out / "report.json").write_text(rep.to_json() + "\n")
    sol.g1.to_csv(out / "g1.csv")
    sol.g2.to_csv(out / "g2.csv")
    sol.v12.to_csv(out / "v12.csv")
    sol.partition.phi1.to_csv(out / "phi1.csv")
    sol.lam.to_csv(out / "lambda.csv")
    for name, g in rep.gates.items():
        status = "pass" if g.passed else "FAIL"
        print(f"{name:13s} {g.value:.4e} <= {g.threshold:.4e}  {status}")
    print(f"g_sup = {rep.g_sup[0]:.6g}, {rep.g_sup[1]:.6g}; v_sup = {rep.v_sup:.6g}")
    return EXIT_OK if rep.passed else EXIT_GATES


def cmd_dbar(args) -> int:
    spec = args.spec
    if spec in ("one", "zero"):
        grid = build_grid(args.n, args.margin)
        lam = grid.constant(1.0 if spec == "one" else 0.0)
    else:
        try:
            lam = ComplexField.from_csv(spec, margin=args.margin)
        except OSError as e:
            raise InputError(f"cannot read {spec}: {e.strerror or e}") from None
        except ValueError as e:
            raise InputError(str(e)) from None
        grid = lam.grid
    try:
        sol = solve_dbar(lam, args.backend)
    except GridTooLarge as e:
        raise InputError(str(e)) from None
    report = {
        "n": grid.n,
        "backend": sol.backend,
        "residual_sup": sol.residual_sup,
        "residual_interior_sup": sol.residual_interior_sup,
        "v_sup": sol.v_sup,
    }
    # the closed form conj(z) is known whenever lam is identically one
    if lam.values.size and np.all(lam.values == 1.0):
        report["zbar_error_sup"] = sup_norm(sol.v - grid.sample(np.conj))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sol.v.to_csv(out / "v.csv")
    lam.to_csv(out / "lambda.csv")
    (out / "dbar_report.json").write_text(json.dumps(report, indent=2) + "\n")
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_zoo(args) -> int:
    if args.levels < 2:
        raise InputError(f"--levels must be >= 2, got {args.levels}")
    try:
        f1, f2, eta = separated_pair(args.levels, args.rotation)
    except ValueError as e:
        raise InputError(str(e)) from None
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "f1.json").write_text(json.dumps(spec_to_json(f1), indent=2) + "\n")
    (out / "f2.json").write_text(json.dumps(spec_to_json(f2), indent=2) + "\n")
    meta = {
        "levels": args.levels,
        "rotation": args.rotation,
        "eta": eta,
        "count_f1": len(f1.zeros),
        "count_f2": len(f2.zeros),
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    case = {"f1": "f1.json", "f2": "f2.json", **ZOO_SOLVE_DEFAULTS}
    (out / "config.json").write_text(json.dumps(case, indent=2) + "\n")
    print(json.dumps(meta, indent=2))
    return EXIT_OK


def cmd_convergence(args) -> int:
    f1, f2, cfg, grid = load_case(args.config)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    if not sizes:
        raise InputError("--sizes is empty")
    try:
        prob = validate_corona(f1, f2, build_grid(sizes[0], cfg.margin), cfg.delta_min, cfg.eta_min)
        table = convergence_study(prob, sizes, cfg, quantity=args.quantity)
    except (CoronaDataError, SupportViolation, PartitionError, DivisionGuardError) as e:
        print(f"FAIL {type(e).__name__}: {e}")
        return EXIT_VALIDATION
    except ValueError as e:
        raise InputError(str(e)) from None
    print(table.format())
    if args.out:
        Path(args.out).write_text(json.dumps(table.to_dict(), indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corona-disc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the corona and separation hypotheses")
    s.add_argument("config")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="solve and verify; write report.json and field CSVs")
    s.add_argument("config")
    s.add_argument("outdir")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("dbar", help="solve dbar v = lambda for lambda one|zero|<csv>")
    s.add_argument("spec")
    s.add_argument("--n", type=int, default=128)
    s.add_argument("--margin", type=float, default=0.0)
    s.add_argument("--backend", choices=("direct", "fft", "auto"), default="auto")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_dbar)

    s = sub.add_parser("zoo", help="write a separated Blaschke pair from the layered zero set")
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("--rotation", type=float, default=0.0)
    s.add_argument("outdir")
    s.set_defaults(func=cmd_zoo)

    s = sub.add_parser("convergence", help="re-solve a case over several grid sizes")
    s.add_argument("config")
    s.add_argument("--sizes", default="64,128,256")
    s.add_argument("--quantity", default="holomorphy")
    s.add_argument("--out")
    s.set_defaults(func=cmd_convergence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
