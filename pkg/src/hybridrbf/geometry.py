"""Point-set containers, node generators, and dense pairwise distances.

Everything here is O(N^2) dense on purpose: the interpolation scheme this
feeds is global, so spatial indexing would buy nothing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError

HALTON_BASES = (2, 3, 5, 7, 11, 13)

# Fixed CSV precision: 17 significant digits round-trip float64 exactly.
FLOAT_FMT = "%.17g"


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PointSet:
    """N points in s-dimensional space, optionally with one value per point."""

    coords: np.ndarray
    values: np.ndarray | None = None

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float, ndmin=2)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ConfigError("coords must be a nonempty N x s matrix")
        if not np.all(np.isfinite(coords)):
            raise ConfigError("coords must be finite")
        object.__setattr__(self, "coords", _freeze(coords))
        if self.values is not None:
            values = np.array(self.values, dtype=float).ravel()
            if values.shape[0] != coords.shape[0]:
                raise ConfigError(
                    f"got {values.shape[0]} values for {coords.shape[0]} points"
                )
            if not np.all(np.isfinite(values)):
                raise ConfigError("values must be finite")
            object.__setattr__(self, "values", _freeze(values))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def with_values(self, values) -> "PointSet":
        return PointSet(self.coords, values)


@dataclass(frozen=True)
class EvaluationGrid:
    """M points at which a fitted interpolant is evaluated."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, ndmin=2)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ConfigError("points must be a nonempty M x s matrix")
        if not np.all(np.isfinite(pts)):
            raise ConfigError("points must be finite")
        object.__setattr__(self, "points", _freeze(pts))

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def coords(self) -> np.ndarray:
        return self.points


def _as_coords(obj) -> np.ndarray:
    if isinstance(obj, (PointSet, EvaluationGrid)):
        return obj.coords
    return np.array(obj, dtype=float, ndmin=2)


def make_tensor_grid(
    points_per_side: int, dim: int, lower: float = 0.0, upper: float = 1.0
) -> PointSet:
    """Equispaced k**s tensor grid on [lower, upper]**s, endpoints included.

    Row-major ordering: the last coordinate varies fastest.
    """
    k, s = int(points_per_side), int(dim)
    if k < 2:
        raise ConfigError(f"points_per_side must be >= 2, got {points_per_side}")
    if s < 1:
        raise ConfigError(f"dim must be >= 1, got {dim}")
    if not upper > lower:
        raise ConfigError(f"need upper > lower, got [{lower}, {upper}]")
    axis = np.linspace(lower, upper, k)
    mesh = np.meshgrid(*([axis] * s), indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=-1)
    return PointSet(coords)


def make_evaluation_grid(
    points_per_side: int, dim: int = 2, lower: float = 0.0, upper: float = 1.0
) -> EvaluationGrid:
    """Tensor grid packaged as an EvaluationGrid (default use: 40 x 40)."""
    return EvaluationGrid(make_tensor_grid(points_per_side, dim, lower, upper).coords)


def _radical_inverse(index: int, base: int) -> float:
    inv, denom = 0.0, 1.0
    while index > 0:
        index, digit = divmod(index, base)
        denom *= base
        inv += digit / denom
    return inv


def make_halton_set(n: int, dim: int) -> PointSet:
    """First n Halton points (indices 1..n) with prime bases 2, 3, 5, ...

    Deterministic: equal arguments produce bitwise-equal coordinates.
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not 1 <= dim <= len(HALTON_BASES):
        raise ConfigError(f"dim must lie in [1, {len(HALTON_BASES)}], got {dim}")
    coords = np.empty((n, dim))
    for j, base in enumerate(HALTON_BASES[:dim]):
        coords[:, j] = [_radical_inverse(i, base) for i in range(1, n + 1)]
    return PointSet(coords)


def pairwise_distances(a, b) -> np.ndarray:
    """Dense |a| x |b| matrix of Euclidean distances.

    Computed as sqrt of the summed squared coordinate differences, so the
    self-distance matrix is exactly symmetric with an exactly zero diagonal.
    """
    av, bv = _as_coords(a), _as_coords(b)
    if av.shape[1] != bv.shape[1]:
        raise DomainError(
            f"dimension mismatch: {av.shape[1]} vs {bv.shape[1]} coordinates"
        )
    diff = av[:, None, :] - bv[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def min_separation(points: PointSet) -> float:
    """Minimum off-diagonal pairwise distance; 0 signals duplicates."""
    if points.n < 2:
        raise DomainError("min_separation needs at least 2 points")
    d = pairwise_distances(points, points)
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def _csv_header(dim: int, with_values: bool) -> list[str]:
    cols = [f"x{j + 1}" for j in range(dim)]
    if with_values:
        cols.append("value")
    return cols


def write_points_csv(target, points: PointSet) -> None:
    """Write a PointSet as CSV: header ``x1,...,xs[,value]``, one row per point."""
    if hasattr(target, "write"):
        _write_points(target, points)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            _write_points(fh, points)


def _write_points(fh, points: PointSet) -> None:
    writer = csv.writer(fh)
    writer.writerow(_csv_header(points.dim, points.values is not None))
    for i in range(points.n):
        row = [FLOAT_FMT % c for c in points.coords[i]]
        if points.values is not None:
            row.append(FLOAT_FMT % points.values[i])
        writer.writerow(row)


def read_points_table(source) -> tuple[np.ndarray, np.ndarray | None]:
    """Parse a points CSV into (coords, values-or-None); may be empty.

    The header fixes the arity; any row with a different field count is
    rejected with its 1-based line number.
    """
    if hasattr(source, "read"):
        return _read_table(source, name="<stream>")
    path = Path(source)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return _read_table(fh, name=str(path))


def _read_table(fh, name: str) -> tuple[np.ndarray, np.ndarray | None]:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ConfigError(f"{name}: empty file, expected a header line") from None
    header = [h.strip() for h in header]
    with_values = bool(header) and header[-1] == "value"
    dim = len(header) - (1 if with_values else 0)
    if dim < 1 or header[:dim] != _csv_header(dim, False):
        raise ConfigError(
            f"{name}:1: header must be x1,...,xs[,value], got {','.join(header)!r}"
        )
    coords_rows: list[list[float]] = []
    values_rows: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if len(row) != len(header):
            raise ConfigError(
                f"{name}:{lineno}: expected {len(header)} fields, got {len(row)}"
            )
        try:
            nums = [float(c) for c in row]
        except ValueError:
            raise ConfigError(f"{name}:{lineno}: non-numeric field in {row!r}") from None
        coords_rows.append(nums[:dim])
        if with_values:
            values_rows.append(nums[dim])
    coords = np.array(coords_rows, dtype=float).reshape(len(coords_rows), dim)
    values = np.array(values_rows, dtype=float) if with_values else None
    return coords, values


def read_points_csv(source) -> PointSet:
    """Read a nonempty PointSet from CSV (see :func:`write_points_csv`)."""
    coords, values = read_points_table(source)
    if coords.shape[0] == 0:
        raise ConfigError(f"{source}: no data rows")
    return PointSet(coords, values)


def points_to_csv_text(points: PointSet) -> str:
    buf = io.StringIO()
    write_points_csv(buf, points)
    return buf.getvalue()
