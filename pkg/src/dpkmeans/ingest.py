"""Loading, validating and normalizing numeric datasets.

A data matrix is a plain 2-D ``float64`` numpy array (n records by d
attributes). ``as_matrix`` is the single gate every public entry point
uses: it checks shape and finiteness and hands back a read-only array, so
a matrix that passed validation cannot be mutated behind a caller's back.
"""

from __future__ import annotations

import csv
import enum
import io
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DatasetShapeMismatch,
    DimensionMismatch,
    MissingValue,
    NonNumericCell,
    RaggedRows,
)


def as_matrix(values, name="data"):
    """Validate ``values`` as an n x d matrix of finite reals (n, d >= 1)."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must have at least one row and one column, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    arr.setflags(write=False)
    return arr


# --------------------------------------------------------------------------
# CSV loading
# --------------------------------------------------------------------------

def load_csv(path, has_header=False, label_column=None, delimiter=","):
    """Read a numeric CSV file into a data matrix.

    ``label_column`` (zero-based) is dropped before parsing, so class labels
    such as Iris species names never reach the numeric parser. Blank lines
    are skipped. ``delimiter=None`` splits on runs of whitespace, which is
    what tab-separated UCI files with irregular spacing need.
    """
    path = Path(path)
    if delimiter is not None and len(delimiter) != 1:
        raise ValueError(f"delimiter must be a single character, got {delimiter!r}")
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_csv_text(text, has_header=has_header, label_column=label_column,
                          delimiter=delimiter, source=str(path))


def parse_csv_text(text, has_header=False, label_column=None, delimiter=",", source="<string>"):
    if delimiter is None:
        records = [(i, line.split()) for i, line in enumerate(text.splitlines(), start=1)]
    else:
        reader = csv.reader(io.StringIO(text), delimiter=delimiter)
        records = [(reader.line_num, row) for row in reader]
    records = [(ln, row) for ln, row in records if any(cell.strip() for cell in row)]
    if has_header and records:
        records = records[1:]
    if not records:
        raise ValueError(f"{source}: no data rows")

    width = len(records[0][1])
    rows = []
    for line_no, row in records:
        if len(row) != width:
            raise RaggedRows(f"expected {width} cells, found {len(row)}", line=line_no)
        if label_column is not None:
            if not 0 <= label_column < width:
                raise IndexError(f"label_column {label_column} out of range for {width} columns")
            row = row[:label_column] + row[label_column + 1:]
        parsed = []
        for col, cell in enumerate(row):
            cell = cell.strip()
            if cell == "" or cell == "?":
                raise MissingValue("missing value", line=line_no, column=col)
            try:
                value = float(cell)
            except ValueError:
                raise NonNumericCell(f"non-numeric cell {cell!r}", line=line_no, column=col) from None
            if not np.isfinite(value):
                raise NonNumericCell(f"non-finite cell {cell!r}", line=line_no, column=col)
            parsed.append(value)
        rows.append(parsed)
    return as_matrix(rows)


# --------------------------------------------------------------------------
# Attribute statistics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AttributeStats:
    minimum: np.ndarray
    maximum: np.ndarray
    max_abs: np.ndarray
    mean: np.ndarray
    variance: np.ndarray  # population variance (divide by n)


def compute_stats(m):
    m = as_matrix(m)
    mean = m.mean(axis=0)
    return AttributeStats(
        minimum=m.min(axis=0),
        maximum=m.max(axis=0),
        max_abs=np.abs(m).max(axis=0),
        mean=mean,
        variance=((m - mean) ** 2).mean(axis=0),
    )


# --------------------------------------------------------------------------
# Normalization
# --------------------------------------------------------------------------

class Normalization(str, enum.Enum):
    NONE = "none"
    MAX_ABS = "max-abs"
    MIN_MAX = "min-max"
    GLOBAL_MAX_ABS = "global-max-abs"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"maxabs": "max-abs", "minmax": "min-max", "globalmax": "global-max-abs"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class NormalizationParams:
    """Per-attribute affine map ``normalized = (raw - offset) / scale``."""

    method: Normalization
    scale: np.ndarray
    offset: np.ndarray

    @property
    def dim(self):
        return self.scale.shape[0]

    def apply(self, points):
        points = _check_dim(points, self.dim)
        return as_matrix((points - self.offset) / self.scale)

    def to_dict(self):
        return {"method": self.method.value, "scale": self.scale.tolist(), "offset": self.offset.tolist()}


def _check_dim(points, dim):
    points = as_matrix(points, name="points")
    if points.shape[1] != dim:
        raise DimensionMismatch(f"points have {points.shape[1]} attributes, transform expects {dim}")
    return points


def normalize(m, method=Normalization.MAX_ABS):
    """Scale each attribute independently; returns (normalized, params).

    max-abs divides by the largest absolute value (result in [-1, 1]);
    min-max maps each attribute affinely onto [0, 1]. An attribute that
    would need a zero scale (all zeros for max-abs, constant for min-max)
    keeps scale 1 and passes through unchanged apart from the offset.

    global-max-abs is the one method that does not treat attributes
    independently: every cell is divided by the largest absolute value in
    the whole matrix, which preserves the relative spread of attributes.
    """
    m = as_matrix(m)
    method = Normalization.parse(method)
    d = m.shape[1]
    if method is Normalization.NONE:
        scale, offset = np.ones(d), np.zeros(d)
    elif method is Normalization.MAX_ABS:
        scale = np.abs(m).max(axis=0)
        offset = np.zeros(d)
    elif method is Normalization.GLOBAL_MAX_ABS:
        scale = np.full(d, np.abs(m).max())
        offset = np.zeros(d)
    else:
        offset = m.min(axis=0)
        scale = m.max(axis=0) - offset
    scale = np.where(scale > 0, scale, 1.0)
    scale.setflags(write=False)
    offset.setflags(write=False)
    params = NormalizationParams(method, scale, offset)
    return params.apply(m), params


def inverse_transform(points, params):
    """Map normalized-space points back to raw attribute units."""
    points = _check_dim(points, params.dim)
    return as_matrix(points * params.scale + params.offset)


# --------------------------------------------------------------------------
# Dataset registry
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    title: str
    n_attributes: int
    n_records: int
    label_column: int | None
    filename: str
    has_header: bool = False
    delimiter: str | None = ","

    def load(self, path):
        m = load_csv(path, has_header=self.has_header, label_column=self.label_column,
                     delimiter=self.delimiter)
        if m.shape != (self.n_records, self.n_attributes):
            raise DatasetShapeMismatch(
                f"{self.name}: expected {self.n_records}x{self.n_attributes}, "
                f"loaded {m.shape[0]}x{m.shape[1]} from {path}"
            )
        return m


REGISTRY = {
    d.name: d
    for d in (
        DatasetDescriptor("iris", "Iris", 4, 150, label_column=4, filename="iris.data"),
        DatasetDescriptor("ionosphere", "Ionosphere", 34, 351, label_column=34, filename="ionosphere.data"),
        DatasetDescriptor("seeds", "Seeds", 7, 210, label_column=7, filename="seeds_dataset.txt",
                          delimiter=None),
        # UCI "User Knowledge Modeling", training sheet exported to CSV with its header row
        DatasetDescriptor("user_modeling", "User Modeling", 5, 258, label_column=5,
                          filename="user_modeling.csv", has_header=True),
    )
}

BUNDLED = {"iris"}


def bundled_path(name):
    """Path of a dataset file shipped inside the package."""
    return resources.files("dpkmeans").joinpath("data").joinpath(REGISTRY[name].filename)


def locate_dataset(name, data_dir=None):
    """Find the file for a registry dataset.

    Looks in ``data_dir`` (or ``$DPKMEANS_DATA_DIR``) first, then falls back
    to the copy bundled with the package where one exists.
    """
    desc = REGISTRY[name]
    data_dir = data_dir or os.environ.get("DPKMEANS_DATA_DIR")
    if data_dir:
        candidate = Path(data_dir) / desc.filename
        if candidate.exists():
            return candidate
    if name in BUNDLED:
        return Path(str(bundled_path(name)))
    where = f" in {data_dir}" if data_dir else ""
    raise FileNotFoundError(f"dataset {name!r} not found{where}; expected file {desc.filename}")


def load_dataset(ref, data_dir=None):
    """Resolve a dataset reference to ``(name, matrix)``.

    ``ref`` is a registry name (``iris``), ``name=path`` to load a registry
    dataset from an explicit file, or a bare path to a headerless numeric CSV.
    """
    if "=" in ref:
        name, path = ref.split("=", 1)
        if name not in REGISTRY:
            raise KeyError(f"unknown dataset {name!r}; known: {', '.join(REGISTRY)}")
        return name, REGISTRY[name].load(path)
    if ref in REGISTRY:
        return ref, REGISTRY[ref].load(locate_dataset(ref, data_dir))
    path = Path(ref)
    for desc in REGISTRY.values():
        if path.name == desc.filename:
            return desc.name, desc.load(path)
    return path.stem, load_csv(path)
