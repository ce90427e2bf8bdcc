"""Batch command-line interface: fit, eval, optimize, bench.

Flag precedence is flags over defaults; there is no interactive mode.  All
commands honor --seed and write CSV numbers at 17 significant digits, so
repeated runs are bit-reproducible on the same platform.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from .bench import (
    DESK_NODE_COUNTS,
    FULL_NODE_COUNTS,
    ExperimentSpec,
    STUDIES,
    franke,
    linear_truth,
    run_study,
)
from .errors import ConfigError, ToolkitError
from .geometry import (
    FLOAT_FMT,
    PointSet,
    make_evaluation_grid,
    make_tensor_grid,
    min_separation,
    read_points_csv,
    read_points_table,
    write_points_csv,
)
from .interpolation import evaluate, fit, load_model, save_model
from .kernels import KERNEL_KINDS, HybridParams, KernelSpec
from .objectives import ObjectiveSpec, kernel_objective
from .pso import PsoConfig, pso_minimize, validate_config, write_trace_csv

_TRUTHS = {"franke": franke, "linear": linear_truth}


def _add_kernel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", choices=KERNEL_KINDS, default="hybrid")
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=0.0)


def _add_pso_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--swarm", type=int, default=20, help="swarm size")
    parser.add_argument("--generations", type=int, default=5)
    parser.add_argument("--c1", type=float, default=1.49445)
    parser.add_argument("--c2", type=float, default=1.49445)
    parser.add_argument("--inertia", type=float, default=0.729)
    parser.add_argument("--eps-min", type=float, default=0.01)
    parser.add_argument("--eps-max", type=float, default=20.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridrbf",
        description=(
            "Scattered-data interpolation with a hybrid Gaussian-cubic radial "
            "kernel: fit models, evaluate them, tune parameters, run benchmarks."
        ),
        epilog=(
            "Configuration precedence: command-line flags override entries in "
            "the --config file, which override built-in defaults.  The config "
            "file holds one 'flag = value' pair per line ('#' starts a comment), "
            "keyed by long flag names without the leading dashes."
        ),
    )
    parser.add_argument("--config", help="key = value file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a kernel model to a CSV of points")
    p_fit.add_argument("--input", required=True, help="points CSV with a value column")
    p_fit.add_argument("--output", required=True, help="model file to write")
    _add_kernel_flags(p_fit)
    p_fit.add_argument("--augment", action="store_true", help="add a linear polynomial tail")
    p_fit.set_defaults(func=cmd_fit)

    p_eval = sub.add_parser("eval", help="evaluate a fitted model at target points")
    p_eval.add_argument("--model", required=True, help="model file from fit")
    p_eval.add_argument("--input", required=True, help="target points CSV (no value column needed)")
    p_eval.add_argument("--output", required=True, help="CSV of points with predicted values")
    p_eval.set_defaults(func=cmd_eval)

    p_opt = sub.add_parser("optimize", help="search kernel parameters with a particle swarm")
    p_opt.add_argument("--input", help="data points CSV with values")
    p_opt.add_argument("--truth", choices=sorted(_TRUTHS), help="synthetic truth surface")
    p_opt.add_argument("--nodes", type=int, help="sample truth on a sqrt(N) x sqrt(N) grid")
    p_opt.add_argument("--objective", choices=("rms", "loocv"), default="loocv")
    p_opt.add_argument("--augment", action="store_true")
    p_opt.add_argument("--grid-n", type=int, default=40, help="evaluation grid side for rms")
    p_opt.add_argument("--seed", type=int, default=0)
    p_opt.add_argument("--output", required=True, help="best-parameters CSV")
    p_opt.add_argument("--trace", help="per-generation trace CSV")
    _add_pso_flags(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_bench = sub.add_parser("bench", help="run a benchmark study and write reports")
    p_bench.add_argument("--study", required=True, choices=STUDIES)
    p_bench.add_argument("--out", required=True, help="output directory for reports")
    p_bench.add_argument("--nodes", help="comma-separated node counts (perfect squares)")
    p_bench.add_argument("--variants", help="comma-separated kernel variants")
    p_bench.add_argument("--objective", choices=("rms", "loocv"), default="rms")
    p_bench.add_argument("--grid-n", type=int, default=40)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--sweep-points", type=int, default=0)
    p_bench.add_argument("--fault-points", type=int, default=78)
    p_bench.add_argument("--fault-grid-n", type=int, default=501)
    p_bench.add_argument("--full", action="store_true", help="full node-count table")
    _add_pso_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def _kernel_from_args(args) -> KernelSpec:
    if args.kernel == "hybrid":
        return KernelSpec.hybrid(args.epsilon, args.alpha, args.beta)
    if args.kernel == "gaussian":
        return KernelSpec.gaussian(args.epsilon)
    if args.kernel == "cubic":
        return KernelSpec.cubic()
    if args.kernel == "thin-plate-spline":
        return KernelSpec("thin-plate-spline", HybridParams(0.0, 1.0, 0.0))
    return KernelSpec(args.kernel, HybridParams(args.epsilon, 1.0, 0.0))


def cmd_fit(args) -> int:
    points = read_points_csv(args.input)
    if points.values is None:
        raise ConfigError(f"{args.input}: fit needs a value column")
    kernel = _kernel_from_args(args)
    model = fit(points, kernel, augmented=args.augment)
    save_model(model, args.output)
    residual = float(np.max(np.abs(evaluate(model, points) - points.values)))
    sep = min_separation(points) if points.n >= 2 else float("nan")
    print(f"fit: n={points.n} dim={points.dim} kernel={kernel.to_record()}")
    print(f"min separation: {sep:.6g}")
    print(f"data-site residual max: {residual:.6g}")
    print(f"condition estimate: {model.condition_estimate:.6g}")
    print(f"model written to {args.output}")
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    coords, _ = read_points_table(args.input)
    if coords.shape[0] == 0:
        # empty target file: emit a header-only values CSV
        dim = coords.shape[1] if coords.ndim == 2 and coords.shape[1] else model.centers.dim
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join([f"x{j + 1}" for j in range(dim)] + ["value"]) + "\n")
        print(f"evaluated 0 points; wrote {args.output}")
        return 0
    values = evaluate(model, coords)
    write_points_csv(args.output, PointSet(coords, values))
    print(f"evaluated {coords.shape[0]} points; wrote {args.output}")
    return 0


def _optimize_data(args) -> PointSet:
    if args.input:
        points = read_points_csv(args.input)
        if points.values is None:
            raise ConfigError(f"{args.input}: optimize needs a value column")
        return points
    if args.truth and args.nodes:
        k = int(round(np.sqrt(args.nodes)))
        if k * k != args.nodes or k < 2:
            raise ConfigError(f"--nodes must be a perfect square >= 4, got {args.nodes}")
        grid = make_tensor_grid(k, 2)
        truth = _TRUTHS[args.truth]
        return grid.with_values(truth(grid.coords[:, 0], grid.coords[:, 1]))
    raise ConfigError("optimize needs --input, or --truth together with --nodes")


def cmd_optimize(args) -> int:
    config = PsoConfig(
        swarm_size=args.swarm,
        generations=args.generations,
        c1=args.c1,
        c2=args.c2,
        inertia_w=args.inertia,
        bounds=((args.eps_min, args.eps_max), (0.0, 1.0), (0.0, 1.0)),
        seed=args.seed,
    )
    violations = validate_config(config)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        return 2
    points = _optimize_data(args)
    if args.objective == "rms":
        if not args.truth:
            raise ConfigError("rms objective needs --truth to define the error")
        grid = make_evaluation_grid(args.grid_n, dim=points.dim)
        truth_values = _TRUTHS[args.truth](grid.points[:, 0], grid.points[:, 1])
        ospec = ObjectiveSpec.rms(grid, truth_values, augmented=args.augment)
    else:
        ospec = ObjectiveSpec.loocv(augmented=args.augment)
    result = pso_minimize(kernel_objective(ospec, points), config)
    eps, alpha, beta = result.best_position
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epsilon", "alpha", "beta", "cost"])
        writer.writerow([FLOAT_FMT % v for v in (eps, alpha, beta, result.best_value)])
    if args.trace:
        write_trace_csv(args.trace, result.trace, param_names=("epsilon", "alpha", "beta"))
    print(
        f"best: epsilon={eps:.6g} alpha={alpha:.6g} beta={beta:.6g} "
        f"cost={result.best_value:.6g}"
    )
    print(f"parameters written to {args.output}")
    return 0


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


_DEFAULT_VARIANTS = {
    "linear-reproduction": ("gaussian", "hybrid", "hybrid+poly"),
    "franke": ("gaussian", "cubic", "hybrid", "hybrid+poly"),
    "spectra": ("hybrid", "hybrid+poly"),
    "objective-comparison": ("hybrid",),
    "fault": ("hybrid",),
    "scaling": ("hybrid",),
}

_DEFAULT_NODES = {
    "scaling": (400, 900, 1600),
}


def cmd_bench(args) -> int:
    if args.nodes:
        nodes = _parse_int_list(args.nodes)
    elif args.full:
        nodes = FULL_NODE_COUNTS
    else:
        nodes = _DEFAULT_NODES.get(args.study, DESK_NODE_COUNTS)
    variants = (
        tuple(v.strip() for v in args.variants.split(",") if v.strip())
        if args.variants
        else _DEFAULT_VARIANTS[args.study]
    )
    spec = ExperimentSpec(
        study=args.study,
        node_counts=nodes,
        variants=variants,
        objective=args.objective,
        pso=PsoConfig(
            swarm_size=args.swarm,
            generations=args.generations,
            c1=args.c1,
            c2=args.c2,
            inertia_w=args.inertia,
            bounds=((args.eps_min, args.eps_max), (0.0, 1.0), (0.0, 1.0)),
            seed=args.seed,
        ),
        eval_grid_n=args.grid_n,
        seed=args.seed,
        sweep_points=args.sweep_points,
        fault_points=args.fault_points,
        fault_grid_n=args.fault_grid_n,
        output_dir=args.out,
    )
    violations = validate_config(spec.pso)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        return 2
    report = run_study(spec)
    for path in report.files:
        print(f"wrote {path}")
    failed = [c for c in report.cells if not c.ok]
    if failed:
        for cell in failed:
            print(
                f"cell failed: variant={cell.variant} n={cell.n}: {cell.detail}",
                file=sys.stderr,
            )
        return 1
    return 0


def _collect_options(parser: argparse.ArgumentParser) -> dict[str, list]:
    """Map option dest -> actions across the parser and all subparsers."""
    actions: dict[str, list] = {}
    stack = [parser]
    while stack:
        current = stack.pop()
        for action in current._actions:
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
            elif action.option_strings:
                actions.setdefault(action.dest, []).append(action)
    return actions


def _coerce_config_value(action, key: str, value: str, where: str):
    if isinstance(action, argparse._StoreTrueAction):
        if value.lower() not in ("true", "false"):
            raise ConfigError(f"{where}: {key} must be true or false")
        return value.lower() == "true"
    if action.type is not None:
        try:
            return action.type(value)
        except ValueError:
            raise ConfigError(f"{where}: bad value for {key}: {value!r}") from None
    return value


def _apply_config_defaults(path: str, parser: argparse.ArgumentParser) -> None:
    """Install 'key = value' file entries as flag defaults (flags still win)."""
    options = _collect_options(parser)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip().replace("-", "_"), value.strip()
            if not sep or not key:
                raise ConfigError(f"{path}:{lineno}: expected 'flag = value'")
            if key in ("config", "help") or key not in options:
                raise ConfigError(f"{path}:{lineno}: unknown flag {key!r}")
            for action in options[key]:
                action.default = _coerce_config_value(action, key, value, f"{path}:{lineno}")
                action.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            _apply_config_defaults(known.config, parser)
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
