"""Benchmark harness: accuracy, conditioning, spectra, and cost studies.

Six studies, all seeded and deterministic, all emitting one CSV row per
experiment cell plus a human-readable table:

* linear-reproduction: optimized kernels interpolating f(x, y) = (x + y)/2;
  the polynomial-augmented hybrid reproduces it to machine precision.
* franke: convergence of optimized kernels on the Franke surface, with an
  optional epsilon sweep at fixed weights.
* spectra: full eigenvalue spectra of plain and augmented hybrid systems.
* objective-comparison: RMS-optimized versus LOOCV-optimized parameters
  from identical starting swarms.
* fault: LOOCV-tuned reconstruction of a synthetic normal-fault surface.
* scaling: wall-time of single fits across N with a log-log slope row.

The Franke surface here uses the standard Franke (1979) signs: every
exponential argument is negative.
"""

from __future__ import annotations

import hashlib
import json
import zlib
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from time import perf_counter
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigError, ToolkitError
from .geometry import (
    EvaluationGrid,
    PointSet,
    make_evaluation_grid,
    make_tensor_grid,
    write_points_csv,
)
from .interpolation import assemble, evaluate, fit, spectral_report
from .kernels import HybridParams, KernelSpec
from .objectives import (
    ObjectiveSpec,
    kernel_objective,
    loocv_cost_brute,
    loocv_cost_rippa,
    objective_value,
    rms_error,
)
from .pso import PsoConfig, pso_minimize

FULL_NODE_COUNTS = (25, 49, 81, 144, 196, 400, 625, 1296, 2401, 4096)
# Desk-scale default: the two largest grids cost minutes each under PSO.
DESK_NODE_COUNTS = (25, 49, 81, 144, 196, 400, 625, 1296)

STUDIES = (
    "linear-reproduction",
    "franke",
    "spectra",
    "objective-comparison",
    "fault",
    "scaling",
)

VARIANTS = ("gaussian", "cubic", "hybrid", "hybrid+poly")

FRANKE_NOTE = (
    "franke variant: standard Franke (1979) signs, all exponential arguments "
    "negative"
)

# Guaranteed minimum elevation gap across the synthetic fault trace.
FAULT_STEP = 50.0
FAULT_DOMAIN = (0.0, 50.0)

_FLOAT_FMT = "%.17g"
_TIMING_RESOLUTION = 1e-5  # seconds; cells faster than this are flagged

# Brute-force LOOCV refits N systems; keep that as report garnish only on
# small augmented cells.
_BRUTE_LOOCV_MAX_N = 256


def franke(x, y):
    """Standard two-dimensional Franke test surface (vectorized)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f1 = 0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
    f2 = 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
    f3 = 0.50 * np.exp(-((9 * x - 7) ** 2 + (9 * y - 3) ** 2) / 4)
    f4 = 0.20 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2)
    return f1 + f2 + f3 - f4


def linear_truth(x, y):
    """The linear patch-test surface f(x, y) = (x + y)/2."""
    return (np.asarray(x, dtype=float) + np.asarray(y, dtype=float)) / 2.0


@dataclass(frozen=True)
class ExperimentSpec:
    """One study request: which cells to run and with what budgets."""

    study: str
    node_counts: tuple[int, ...] = DESK_NODE_COUNTS
    variants: tuple[str, ...] = ("gaussian", "hybrid", "hybrid+poly")
    objective: str = "rms"
    pso: PsoConfig = field(default_factory=lambda: PsoConfig(swarm_size=20, generations=5))
    eval_grid_n: int = 40
    seed: int = 0
    sweep_points: int = 0
    params_per_n: Mapping[int, tuple] | None = None
    fault_points: int = 78
    fault_grid_n: int = 501
    include_optimize_timing: bool = False
    output_dir: str | Path | None = None

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ConfigError(f"unknown study {self.study!r}; expected one of {STUDIES}")
        object.__setattr__(self, "node_counts", tuple(int(n) for n in self.node_counts))
        object.__setattr__(self, "variants", tuple(self.variants))
        if self.study != "fault":
            if not self.node_counts:
                raise ConfigError("node_counts must not be empty")
            for n in self.node_counts:
                k = int(round(np.sqrt(n)))
                if k * k != n or k < 2:
                    raise ConfigError(
                        f"node count {n} is not a perfect square >= 4 (tensor grids)"
                    )
        if not self.variants:
            raise ConfigError("at least one kernel variant is required")
        for v in self.variants:
            if v not in VARIANTS:
                raise ConfigError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        if self.objective not in ("rms", "loocv"):
            raise ConfigError(f"objective must be rms or loocv, got {self.objective!r}")
        if self.eval_grid_n < 2:
            raise ConfigError(f"eval_grid_n must be >= 2, got {self.eval_grid_n}")


@dataclass
class CellRecord:
    """One report row; optional fields stay None where not applicable."""

    study: str
    variant: str
    n: int | None = None
    objective: str = ""
    epsilon: float | None = None
    alpha: float | None = None
    beta: float | None = None
    rms: float | None = None
    loocv_cost: float | None = None
    condition_number: float | None = None
    negative_count: int | None = None
    wall_time_s: float | None = None
    slope: float | None = None
    status: str = "ok"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok" or self.status.startswith("flagged")


@dataclass
class ExperimentReport:
    study: str
    digest: str
    seed: int
    notes: tuple[str, ...]
    cells: list[CellRecord]
    files: list[Path] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(cell.ok for cell in self.cells)

    def cell(self, variant: str, n: int | None = None, objective: str | None = None):
        for c in self.cells:
            if c.variant != variant:
                continue
            if n is not None and c.n != n:
                continue
            if objective is not None and c.objective != objective:
                continue
            return c
        raise KeyError(f"no cell variant={variant!r} n={n} objective={objective!r}")


def spec_digest(spec: ExperimentSpec) -> str:
    """Short stable hash of everything that influences the numbers."""
    payload = asdict(spec)
    payload.pop("output_dir", None)
    if payload.get("params_per_n") is not None:
        payload["params_per_n"] = {
            str(k): _coerce_json(v) for k, v in payload["params_per_n"].items()
        }
    text = json.dumps(payload, sort_keys=True, default=_coerce_json)
    return hashlib.sha256(text.encode()).hexdigest()[:10]


def _coerce_json(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (tuple, list, np.ndarray)):
        return [_coerce_json(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _coerce_json(v) for k, v in value.items()}
    return value


def _cell_seed(spec: ExperimentSpec, *key) -> int:
    parts = [spec.seed] + [
        zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key
    ]
    return int(np.random.SeedSequence(parts).generate_state(1)[0])


def _grid_data(n: int, truth: Callable) -> PointSet:
    k = int(round(np.sqrt(n)))
    pts = make_tensor_grid(k, 2)
    return pts.with_values(truth(pts.coords[:, 0], pts.coords[:, 1]))


def _variant_augmented(variant: str) -> bool:
    return variant.endswith("+poly")


def _variant_search(variant: str, pso: PsoConfig, seed: int):
    """Search config and position -> kernel mapping for one variant."""
    if variant == "cubic":
        return None, None
    if variant == "gaussian":
        cfg = replace(pso, bounds=(pso.bounds[0],), seed=seed)
        return cfg, lambda p: KernelSpec.gaussian(p[0])
    cfg = replace(pso, seed=seed)
    return cfg, lambda p: KernelSpec.hybrid(p[0], p[1], p[2])


def _optimize_variant(
    points: PointSet, ospec: ObjectiveSpec, pso: PsoConfig, variant: str, seed: int
) -> tuple[KernelSpec, float]:
    cfg, to_kernel = _variant_search(variant, pso, seed)
    if cfg is None:
        kernel = KernelSpec.cubic()
        return kernel, objective_value(ospec, points, kernel)
    result = pso_minimize(kernel_objective(ospec, points, to_kernel), cfg)
    return to_kernel(result.best_position), result.best_value


def _loocv_garnish(points: PointSet, kernel: KernelSpec, augmented: bool) -> float | None:
    try:
        if not augmented:
            return loocv_cost_rippa(points, kernel).value
        if points.n <= _BRUTE_LOOCV_MAX_N:
            return loocv_cost_brute(points, kernel, augmented=True).value
    except ToolkitError:
        return None
    return None


def _optimized_cell(
    spec: ExperimentSpec,
    points: PointSet,
    grid: EvaluationGrid,
    truth_values: np.ndarray,
    variant: str,
    n: int,
    objective: str | None = None,
    shared_seed: int | None = None,
) -> CellRecord:
    objective = spec.objective if objective is None else objective
    cell = CellRecord(study=spec.study, variant=variant, n=n, objective=objective)
    start = perf_counter()
    try:
        augmented = _variant_augmented(variant)
        if objective == "rms":
            ospec = ObjectiveSpec.rms(grid, truth_values, augmented=augmented)
        else:
            ospec = ObjectiveSpec.loocv(augmented=augmented)
        seed = (
            shared_seed
            if shared_seed is not None
            else _cell_seed(spec, spec.study, n, variant, objective)
        )
        kernel, best_cost = _optimize_variant(points, ospec, spec.pso, variant, seed)
        model = fit(points, kernel, augmented=augmented)
        spectrum = spectral_report(assemble(points, kernel, augmented=augmented))
        cell.epsilon = kernel.params.epsilon
        cell.alpha = kernel.params.alpha
        cell.beta = kernel.params.beta
        cell.rms = rms_error(model, grid, truth_values)
        cell.loocv_cost = (
            best_cost if objective == "loocv" else _loocv_garnish(points, kernel, augmented)
        )
        cell.condition_number = spectrum.condition_number
        cell.negative_count = spectrum.negative_count
    except ToolkitError as exc:
        cell.status = "failed"
        cell.detail = str(exc)
    cell.wall_time_s = perf_counter() - start
    return cell


def _finish(spec: ExperimentSpec, cells: list[CellRecord], notes: tuple[str, ...]) -> ExperimentReport:
    report = ExperimentReport(
        study=spec.study,
        digest=spec_digest(spec),
        seed=spec.seed,
        notes=notes,
        cells=cells,
    )
    if spec.output_dir is not None:
        emit_report(report, spec.output_dir)
    return report


# --- studies --------------------------------------------------------------


def linear_reproduction_study(spec: ExperimentSpec) -> ExperimentReport:
    """Optimized linear reproduction per node count and kernel variant."""
    _expect_study(spec, "linear-reproduction")
    grid = make_evaluation_grid(spec.eval_grid_n)
    truth_values = linear_truth(grid.points[:, 0], grid.points[:, 1])
    cells = []
    for n in spec.node_counts:
        points = _grid_data(n, linear_truth)
        for variant in spec.variants:
            cells.append(_optimized_cell(spec, points, grid, truth_values, variant, n))
    notes = ("truth: f(x, y) = (x + y)/2 on the unit square",)
    return _finish(spec, cells, notes)


def franke_convergence_study(spec: ExperimentSpec) -> ExperimentReport:
    """Optimized Franke interpolation per node count, plus epsilon sweeps."""
    _expect_study(spec, "franke")
    grid = make_evaluation_grid(spec.eval_grid_n)
    truth_values = franke(grid.points[:, 0], grid.points[:, 1])
    cells = []
    for n in spec.node_counts:
        points = _grid_data(n, franke)
        for variant in spec.variants:
            cells.append(_optimized_cell(spec, points, grid, truth_values, variant, n))
    if spec.sweep_points > 0:
        cells.extend(_epsilon_sweep(spec, grid, truth_values, cells))
    return _finish(spec, cells, (FRANKE_NOTE,))


def _epsilon_sweep(
    spec: ExperimentSpec,
    grid: EvaluationGrid,
    truth_values: np.ndarray,
    cells: list[CellRecord],
) -> list[CellRecord]:
    """Error-versus-epsilon curves at the largest N, weights held fixed."""
    n_max = max(spec.node_counts)
    try:
        anchor = next(
            c for c in cells if c.variant == "hybrid" and c.n == n_max and c.ok
        )
        alpha, beta = anchor.alpha, anchor.beta
    except StopIteration:
        alpha, beta = 0.7, 1e-6  # no optimized hybrid cell to anchor on
    points = _grid_data(n_max, franke)
    out = []
    for eps in np.geomspace(0.05, 20.0, spec.sweep_points):
        for base in ("gaussian", "hybrid", "hybrid+poly"):
            augmented = _variant_augmented(base)
            if base == "gaussian":
                kernel = KernelSpec.gaussian(eps)
            else:
                kernel = KernelSpec.hybrid(eps, alpha, beta)
            cell = CellRecord(
                study=spec.study,
                variant=f"sweep:{base}",
                n=n_max,
                epsilon=float(eps),
                alpha=kernel.params.alpha,
                beta=kernel.params.beta,
            )
            start = perf_counter()
            try:
                model = fit(points, kernel, augmented=augmented)
                spectrum = spectral_report(assemble(points, kernel, augmented=augmented))
                cell.rms = rms_error(model, grid, truth_values)
                cell.condition_number = spectrum.condition_number
                cell.negative_count = spectrum.negative_count
            except ToolkitError as exc:
                # sweeping into the flat regime is expected to hit singular
                # systems; that is the curve's story, not a failed cell
                cell.status = "flagged: unsolvable at this epsilon"
                cell.detail = str(exc)
            cell.wall_time_s = perf_counter() - start
            out.append(cell)
    return out


def spectra_study(spec: ExperimentSpec) -> ExperimentReport:
    """Eigenvalue spectra of plain and augmented hybrid systems per N."""
    _expect_study(spec, "spectra")
    grid = make_evaluation_grid(spec.eval_grid_n)
    truth_values = franke(grid.points[:, 0], grid.points[:, 1])
    cells: list[CellRecord] = []
    files: list[Path] = []
    digest = spec_digest(spec)
    for n in spec.node_counts:
        points = _grid_data(n, franke)
        for variant in ("hybrid", "hybrid+poly"):
            augmented = _variant_augmented(variant)
            params = _spectra_params(spec, points, grid, truth_values, n, variant)
            cell = CellRecord(study=spec.study, variant=variant, n=n)
            start = perf_counter()
            try:
                kernel = KernelSpec.hybrid(*params)
                system = assemble(points, kernel, augmented=augmented)
                spectrum = spectral_report(system)
                cell.epsilon, cell.alpha, cell.beta = params
                cell.condition_number = spectrum.condition_number
                cell.negative_count = spectrum.negative_count
                if spec.output_dir is not None:
                    tag = "augmented" if augmented else "plain"
                    path = Path(spec.output_dir) / f"spectra-{digest}-n{n}-{tag}.csv"
                    _write_spectrum_csv(path, spectrum.eigenvalues)
                    files.append(path)
                    cell.detail = f"spectrum: {path.name}"
            except ToolkitError as exc:
                cell.status = "failed"
                cell.detail = str(exc)
            cell.wall_time_s = perf_counter() - start
            cells.append(cell)
    report = _finish(spec, cells, (FRANKE_NOTE,))
    report.files.extend(files)
    return report


def _spectra_params(
    spec: ExperimentSpec,
    points: PointSet,
    grid: EvaluationGrid,
    truth_values: np.ndarray,
    n: int,
    variant: str,
) -> tuple[float, float, float]:
    if spec.params_per_n is not None and n in spec.params_per_n:
        entry = spec.params_per_n[n]
        if isinstance(entry, Mapping):
            entry = entry[variant]
        if isinstance(entry, HybridParams):
            return entry.epsilon, entry.alpha, entry.beta
        return tuple(float(v) for v in entry)
    augmented = _variant_augmented(variant)
    if spec.objective == "rms":
        ospec = ObjectiveSpec.rms(grid, truth_values, augmented=augmented)
    else:
        ospec = ObjectiveSpec.loocv(augmented=augmented)
    seed = _cell_seed(spec, spec.study, n, variant, spec.objective)
    kernel, _ = _optimize_variant(points, ospec, spec.pso, "hybrid+poly" if augmented else "hybrid", seed)
    p = kernel.params
    return p.epsilon, p.alpha, p.beta


def _write_spectrum_csv(path: Path, eigenvalues: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("index,eigenvalue\n")
        for i, ev in enumerate(eigenvalues):
            fh.write(f"{i},{_FLOAT_FMT % ev}\n")


def objective_comparison_study(spec: ExperimentSpec) -> ExperimentReport:
    """RMS- versus LOOCV-driven optimization from identical starting swarms."""
    _expect_study(spec, "objective-comparison")
    grid = make_evaluation_grid(spec.eval_grid_n)
    truth_values = franke(grid.points[:, 0], grid.points[:, 1])
    cells = []
    for n in spec.node_counts:
        points = _grid_data(n, franke)
        for variant in spec.variants:
            shared = _cell_seed(spec, spec.study, n, variant)
            for objective in ("rms", "loocv"):
                cells.append(
                    _optimized_cell(
                        spec,
                        points,
                        grid,
                        truth_values,
                        variant,
                        n,
                        objective=objective,
                        shared_seed=shared,
                    )
                )
    return _finish(spec, cells, (FRANKE_NOTE, "seeds shared between objectives"))


def fault_side(coords) -> np.ndarray:
    """Signed distance direction across the synthetic fault trace (< 0: footwall)."""
    c = np.asarray(coords, dtype=float)
    return c[:, 0] - (25.0 + 0.15 * (c[:, 1] - 25.0))


def fault_elevation(coords) -> np.ndarray:
    """Elevation model: quiet footwall, two-basin hanging wall, sharp step.

    Footwall values stay in [98.5, 101.5] and hanging-wall values in
    [20, 45], so any two points on opposite sides of the trace differ by
    more than FAULT_STEP.
    """
    c = np.asarray(coords, dtype=float)
    x, y = c[:, 0], c[:, 1]
    foot = 100.0 + 1.5 * np.sin(2 * np.pi * x / 50.0) * np.cos(2 * np.pi * y / 50.0)
    basin1 = 14.0 * np.exp(-(((x - 32.0) ** 2) + (y - 15.0) ** 2) / 60.0)
    basin2 = 11.0 * np.exp(-(((x - 40.0) ** 2) + (y - 38.0) ** 2) / 80.0)
    hang = 45.0 - basin1 - basin2
    return np.where(fault_side(c) < 0.0, foot, hang)


def synthetic_fault_surface(n_points: int = 78, seed: int = 0) -> PointSet:
    """Scattered synthetic elevations around a normal-fault step.

    Points are uniform over the [0, 50] km square; values follow
    :func:`fault_elevation`.  Deterministic per seed.
    """
    if n_points < 10:
        raise ConfigError(f"n_points must be >= 10, got {n_points}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(FAULT_DOMAIN[0], FAULT_DOMAIN[1], size=(n_points, 2))
    return PointSet(coords, fault_elevation(coords))


def fault_study(spec: ExperimentSpec) -> ExperimentReport:
    """LOOCV-tuned hybrid reconstruction of the synthetic fault surface."""
    _expect_study(spec, "fault")
    cell = CellRecord(study=spec.study, variant="hybrid", n=spec.fault_points, objective="loocv")
    cells = [cell]
    files: list[Path] = []
    start = perf_counter()
    try:
        points = synthetic_fault_surface(spec.fault_points, seed=spec.seed)
        ospec = ObjectiveSpec.loocv()
        seed = _cell_seed(spec, spec.study, spec.fault_points)
        kernel, best_cost = _optimize_variant(points, ospec, spec.pso, "hybrid", seed)
        model = fit(points, kernel)
        spectrum = spectral_report(assemble(points, kernel))
        target = make_evaluation_grid(
            spec.fault_grid_n, dim=2, lower=FAULT_DOMAIN[0], upper=FAULT_DOMAIN[1]
        )
        values = evaluate(model, target)
        cell.epsilon = kernel.params.epsilon
        cell.alpha = kernel.params.alpha
        cell.beta = kernel.params.beta
        cell.loocv_cost = best_cost
        cell.condition_number = spectrum.condition_number
        cell.negative_count = spectrum.negative_count
        cell.detail = f"reconstructed {target.m} locations"
        if spec.output_dir is not None:
            digest = spec_digest(spec)
            path = Path(spec.output_dir) / f"fault-reconstruction-{digest}.csv"
            path.parent.mkdir(parents=True, exist_ok=True)
            write_points_csv(path, PointSet(target.points, values))
            files.append(path)
    except ToolkitError as exc:
        cell.status = "failed"
        cell.detail = str(exc)
    cell.wall_time_s = perf_counter() - start
    report = _finish(spec, cells, ("synthetic fault: step > %g across the trace" % FAULT_STEP,))
    report.files.extend(files)
    return report


def scaling_study(spec: ExperimentSpec) -> ExperimentReport:
    """Wall-time of single fits across N, with a log-log slope row."""
    _expect_study(spec, "scaling")
    counts = sorted(spec.node_counts)
    if max(counts) < 4 * min(counts):
        raise ConfigError(
            f"node counts must span at least a 4x range, got {min(counts)}..{max(counts)}"
        )
    kernel = KernelSpec.hybrid(5.5, 0.7, 1e-6)
    cells = []
    timed: list[tuple[int, float]] = []
    for n in counts:
        points = _grid_data(n, franke)
        cell = CellRecord(study=spec.study, variant="fit", n=n)
        try:
            fit(points, kernel)  # warm caches and BLAS threads
            best = min(_timed_fit(points, kernel) for _ in range(3))
            cell.wall_time_s = best
            if best < _TIMING_RESOLUTION:
                cell.status = "flagged: below timing resolution"
            else:
                timed.append((n, best))
        except ToolkitError as exc:
            cell.status = "failed"
            cell.detail = str(exc)
        cells.append(cell)
        if spec.include_optimize_timing:
            cells.append(_timed_optimize_cell(spec, points, n))
    slope_cell = CellRecord(study=spec.study, variant="slope")
    if len(timed) >= 2:
        (n0, t0), (n1, t1) = timed[0], timed[-1]
        slope_cell.slope = float(np.log(t1 / t0) / np.log(n1 / n0))
        slope_cell.detail = f"between N={n0} and N={n1} on warmed runs"
    else:
        slope_cell.status = "failed"
        slope_cell.detail = "fewer than two timing cells above resolution"
    cells.append(slope_cell)
    return _finish(spec, cells, (FRANKE_NOTE,))


def _timed_fit(points: PointSet, kernel: KernelSpec) -> float:
    start = perf_counter()
    fit(points, kernel)
    return perf_counter() - start


def _timed_optimize_cell(spec: ExperimentSpec, points: PointSet, n: int) -> CellRecord:
    grid = make_evaluation_grid(spec.eval_grid_n)
    truth_values = franke(grid.points[:, 0], grid.points[:, 1])
    ospec = ObjectiveSpec.rms(grid, truth_values)
    cell = CellRecord(study=spec.study, variant="optimize", n=n, objective="rms")
    cfg = replace(spec.pso, generations=1, seed=_cell_seed(spec, spec.study, n, "optimize"))
    start = perf_counter()
    try:
        _optimize_variant(points, ospec, cfg, "hybrid", cfg.seed)
    except ToolkitError as exc:
        cell.status = "failed"
        cell.detail = str(exc)
    cell.wall_time_s = perf_counter() - start
    return cell


_STUDY_FUNCS = {
    "linear-reproduction": linear_reproduction_study,
    "franke": franke_convergence_study,
    "spectra": spectra_study,
    "objective-comparison": objective_comparison_study,
    "fault": fault_study,
    "scaling": scaling_study,
}


def run_study(spec: ExperimentSpec) -> ExperimentReport:
    """Dispatch a study by its spec.study name."""
    return _STUDY_FUNCS[spec.study](spec)


def _expect_study(spec: ExperimentSpec, name: str) -> None:
    if spec.study != name:
        raise ConfigError(f"spec.study is {spec.study!r}, expected {name!r}")


# --- report I/O -----------------------------------------------------------

_CSV_COLUMNS = (
    "study",
    "variant",
    "n",
    "objective",
    "epsilon",
    "alpha",
    "beta",
    "rms",
    "loocv_cost",
    "condition_number",
    "negative_count",
    "wall_time_s",
    "slope",
    "status",
    "detail",
)

_FLOAT_COLUMNS = (
    "epsilon",
    "alpha",
    "beta",
    "rms",
    "loocv_cost",
    "condition_number",
    "wall_time_s",
    "slope",
)


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _FLOAT_FMT % value
    return str(value)


def write_report_csv(path, report: ExperimentReport) -> None:
    """One CSV row per cell, preceded by '#' header notes."""
    import csv as _csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# study: {report.study}  digest: {report.digest}  seed: {report.seed}\n")
        for note in report.notes:
            fh.write(f"# {note}\n")
        writer = _csv.writer(fh)
        writer.writerow(_CSV_COLUMNS)
        for cell in report.cells:
            writer.writerow([_format_field(getattr(cell, col)) for col in _CSV_COLUMNS])


def read_report_csv(path) -> list[CellRecord]:
    """Read back a report CSV written by :func:`write_report_csv`."""
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [r for r in _csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows or tuple(rows[0]) != _CSV_COLUMNS:
        raise ConfigError(f"{path}: not a report CSV")
    cells = []
    for row in rows[1:]:
        data = dict(zip(_CSV_COLUMNS, row))
        kwargs = {
            "study": data["study"],
            "variant": data["variant"],
            "n": int(data["n"]) if data["n"] else None,
            "objective": data["objective"],
            "negative_count": int(data["negative_count"]) if data["negative_count"] else None,
            "status": data["status"],
            "detail": data["detail"],
        }
        for col in _FLOAT_COLUMNS:
            kwargs[col] = float(data[col]) if data[col] else None
        cells.append(CellRecord(**kwargs))
    return cells


def report_text(report: ExperimentReport) -> str:
    """Human-readable fixed-width table of the report cells."""
    lines = [
        f"study: {report.study}   digest: {report.digest}   seed: {report.seed}",
    ]
    lines.extend(f"note: {note}" for note in report.notes)
    header = (
        f"{'variant':<16} {'N':>6} {'obj':<6} {'epsilon':>12} {'alpha':>10} "
        f"{'beta':>12} {'rms':>12} {'loocv':>12} {'cond':>12} {'neg':>4} "
        f"{'time[s]':>10} {'status':<8}"
    )
    lines.append(header)
    lines.append("-" * len(header))

    def num(v, width, sig=4):
        if v is None:
            return " " * (width - 1) + "-"
        return f"{v:>{width}.{sig}g}"

    for c in report.cells:
        lines.append(
            f"{c.variant:<16} {c.n if c.n is not None else '-':>6} {c.objective:<6} "
            f"{num(c.epsilon, 12)} {num(c.alpha, 10)} {num(c.beta, 12)} "
            f"{num(c.rms, 12)} {num(c.loocv_cost, 12)} {num(c.condition_number, 12)} "
            f"{c.negative_count if c.negative_count is not None else '-':>4} "
            f"{num(c.wall_time_s, 10)} {c.status:<8}"
            + (f"  {c.detail}" if c.detail else "")
        )
    if any(c.slope is not None for c in report.cells):
        for c in report.cells:
            if c.slope is not None:
                lines.append(f"log-log slope: {c.slope:.4g} ({c.detail})")
    return "\n".join(lines) + "\n"


def emit_report(report: ExperimentReport, output_dir) -> tuple[Path, Path]:
    """Write the CSV and text renderings; file names carry the spec digest."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{report.study}-{report.digest}.csv"
    txt_path = out / f"{report.study}-{report.digest}.txt"
    write_report_csv(csv_path, report)
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write(report_text(report))
    report.files.extend([csv_path, txt_path])
    return csv_path, txt_path
