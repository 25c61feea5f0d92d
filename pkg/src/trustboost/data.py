"""CSV ingestion, deterministic splits, and synthetic dataset generators."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DataIOError, DomainError

# Noise level of the regression generator; outlier magnitudes scale with the
# clean-label standard deviation, not with this.
NOISE_STD = 1.0


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class Dataset:
    """Dense numeric feature matrix with labels; immutable after construction."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=float)
        if X.ndim != 2:
            raise DomainError("features must be a 2-d matrix")
        n, m = X.shape
        if n < 1 or m < 1:
            raise DomainError("dataset needs at least one row and one feature")
        if y.shape != (n,):
            raise DomainError("labels must match the number of rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DomainError("dataset contains non-finite values")
        if self.feature_names is not None and len(self.feature_names) != m:
            raise DomainError("feature_names must match the number of columns")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.features[idx].copy(), self.labels[idx].copy(), self.feature_names)


def _parse_cell(cell: str, row: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DomainError(
            f"cell {cell!r} at row {row}, column {column} is not a decimal number",
            row=row,
            column=column,
        ) from None
    if not math.isfinite(value):
        raise DomainError(
            f"cell {cell!r} at row {row}, column {column} is not finite; "
            "missing values are not supported",
            row=row,
            column=column,
        )
    return value


def load_csv(path: str, label_column: str | int, has_header: bool = True) -> Dataset:
    """Load a comma-separated numeric file; the label column becomes ``labels``.

    ``label_column`` is a header name (requires a header) or a 0-based column
    index.  Every cell must parse as a finite decimal number; violations are
    reported with row/column coordinates (1-based, header excluded).
    """
    if not os.path.exists(path):
        raise DataIOError(f"no such file: {path}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r]
    if not rows:
        raise DomainError(f"{path} is empty")

    header: list[str] | None = None
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DomainError(f"{path} has a header but no data rows")
    width = len(rows[0])
    if width < 2:
        raise DomainError("need at least one feature column and one label column")

    if isinstance(label_column, str) and not isinstance(label_column, bool):
        text = label_column.strip()
        if header is not None and text in header:
            label_idx = header.index(text)
        else:
            try:
                label_idx = int(text)
            except ValueError:
                raise DomainError(
                    f"label column {label_column!r} not found"
                    + (f" in header {header}" if header is not None else " (file has no header)")
                ) from None
    else:
        label_idx = int(label_column)
    if not (0 <= label_idx < width):
        raise DomainError(f"label column index {label_idx} out of range for {width} columns")

    features = []
    labels = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DomainError(
                f"row {i + 1} has {len(row)} cells, expected {width}", row=i + 1
            )
        parsed = [_parse_cell(cell, i + 1, j + 1) for j, cell in enumerate(row)]
        labels.append(parsed.pop(label_idx))
        features.append(parsed)

    names = None
    if header is not None:
        names = [c for j, c in enumerate(header) if j != label_idx]
    return Dataset(np.asarray(features, dtype=float), np.asarray(labels, dtype=float), names)


def save_csv(dataset: Dataset, path: str, label_name: str = "y"):
    """Write a dataset with a header, using shortest round-trip float text."""
    names = dataset.feature_names or [f"f{j}" for j in range(dataset.n_features)]
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(names) + [label_name])
            for row, label in zip(dataset.features, dataset.labels):
                writer.writerow([repr(float(v)) for v in row] + [repr(float(label))])
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc}") from exc


def split(
    data: Dataset,
    test_fraction: float = 0.2,
    val_fraction: float = 0.2,
    seed: int = 0,
) -> tuple[Dataset, Dataset, Dataset]:
    """Deterministic shuffled (train, val, test) partition.

    ``test_fraction`` is taken from the whole set first, then
    ``val_fraction`` from the remainder.  Block sizes round to nearest with
    the remainder going to train; an empty block is an error.
    """
    if not (0.0 < test_fraction < 1.0 and 0.0 < val_fraction < 1.0):
        raise DomainError("fractions must lie in (0, 1)")
    n = data.n_rows
    n_test = _round_half_up(n * test_fraction)
    n_val = _round_half_up((n - n_test) * val_fraction)
    n_train = n - n_test - n_val
    if min(n_train, n_val, n_test) < 1:
        raise DomainError(
            f"split of {n} rows leaves an empty block (train={n_train}, val={n_val}, test={n_test})"
        )
    perm = np.random.default_rng(seed).permutation(n)
    test_idx = np.sort(perm[:n_test])
    val_idx = np.sort(perm[n_test : n_test + n_val])
    train_idx = np.sort(perm[n_test + n_val :])
    return data.take(train_idx), data.take(val_idx), data.take(test_idx)


def holdout(data: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Split off a seeded fraction of rows: returns (remainder, held-out)."""
    if not (0.0 < fraction < 1.0):
        raise DomainError("holdout fraction must lie in (0, 1)")
    n = data.n_rows
    n_held = _round_half_up(n * fraction)
    if n_held < 1 or n - n_held < 1:
        raise DomainError(f"holdout of {fraction} on {n} rows leaves an empty block")
    perm = np.random.default_rng(seed).permutation(n)
    held_idx = np.sort(perm[:n_held])
    main_idx = np.sort(perm[n_held:])
    return data.take(main_idx), data.take(held_idx)


def load_matrix_csv(path: str, has_header: bool = True) -> tuple[np.ndarray, list[str] | None]:
    """Load a label-free numeric CSV as a feature matrix (for prediction inputs)."""
    if not os.path.exists(path):
        raise DataIOError(f"no such file: {path}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r]
    if not rows:
        raise DomainError(f"{path} is empty")
    names = None
    if has_header:
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DomainError(f"{path} has a header but no data rows")
    width = len(rows[0])
    matrix = []
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DomainError(f"row {i + 1} has {len(row)} cells, expected {width}", row=i + 1)
        matrix.append([_parse_cell(cell, i + 1, j + 1) for j, cell in enumerate(row)])
    return np.asarray(matrix, dtype=float), names


def gen_two_gaussians(n: int, dims: int, separation: float, seed: int) -> Dataset:
    """Balanced binary classes from unit Gaussians with means +-separation/2 per axis."""
    if n < 2 or n % 2 != 0:
        raise DomainError(f"n must be even and >= 2, got {n}")
    if dims < 1:
        raise DomainError(f"dims must be >= 1, got {dims}")
    if separation < 0:
        raise DomainError(f"separation must be non-negative, got {separation}")
    rng = np.random.default_rng(seed)
    half = n // 2
    X = rng.standard_normal((n, dims))
    X[:half] -= separation / 2.0
    X[half:] += separation / 2.0
    y = np.concatenate([np.zeros(half), np.ones(half)])
    return Dataset(X, y)


def gen_noisy_regression(
    n: int,
    dims: int,
    outlier_fraction: float,
    outlier_scale: float,
    seed: int,
) -> Dataset:
    """Linear signal y = w.x + noise with a seeded fraction of shifted labels.

    Outliers are drawn from a separate stream after the clean data, so the
    same (n, dims, seed) with outlier_fraction=0 reproduces the identical
    clean dataset; that is what makes clean-holdout evaluation of corrupted
    training runs possible.
    """
    if n < 1 or dims < 1:
        raise DomainError("n and dims must be >= 1")
    if not (0.0 <= outlier_fraction < 1.0):
        raise DomainError(f"outlier_fraction must lie in [0, 1), got {outlier_fraction}")
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(dims)
    X = rng.standard_normal((n, dims))
    y = X @ w + NOISE_STD * rng.standard_normal(n)
    k = _round_half_up(n * outlier_fraction)
    if k > 0:
        spread = float(np.std(y))
        out_rng = np.random.default_rng([seed, 1])
        idx = out_rng.choice(n, size=k, replace=False)
        signs = out_rng.choice([-1.0, 1.0], size=k)
        y = y.copy()
        y[idx] += signs * outlier_scale * spread
    return Dataset(X, y)
