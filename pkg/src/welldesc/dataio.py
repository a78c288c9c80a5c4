"""Ingest, clean, resample, label, split, and synthesize well-log tables.

A table is columnar: per-row well id, depth, a feature block, and one
real-valued target in [0, 1]. NaN marks a missing cell. Within each well the
rows are sorted by strictly increasing depth.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyInput,
    EmptyResult,
    EmptyRowSet,
    InvalidConfig,
    MalformedFile,
    NoMinorityTrainingData,
    NonNumericCell,
    SingleRowWell,
    UnknownWell,
)

SENTINEL = -999.25

LOW = 0
HIGH = 1
LABEL_NAMES = {LOW: "low", HIGH: "high"}

AUTO = None  # resample spacing: take the median observed step per well


@dataclass
class WellTable:
    """Columnar well-log table; NaN marks a missing cell."""

    wells: list            # unique well ids, first-appearance order
    well_ids: np.ndarray   # (n,) per-row well id
    depth: np.ndarray      # (n,)
    features: np.ndarray   # (n, d)
    target: np.ndarray     # (n,)
    feature_names: list
    target_name: str

    @property
    def n_rows(self) -> int:
        return int(self.depth.shape[0])

    def rows_of(self, well) -> np.ndarray:
        return np.flatnonzero(self.well_ids == well)


@dataclass
class LabeledDataset:
    """Feature matrix with binary labels and per-row well membership."""

    X: np.ndarray
    y: np.ndarray          # LOW / HIGH per row
    well_ids: np.ndarray
    feature_names: list
    wells: list


@dataclass
class SplitPlan:
    """Row indices of one leave-one-well-out blind test."""

    test_well: str
    train_rows: np.ndarray  # minority rows of the other wells
    test_rows: np.ndarray   # majority rows of the other wells + every row of test_well


@dataclass
class NormStats:
    """Per-feature z-score parameters (population convention)."""

    mean: np.ndarray
    std: np.ndarray

    @staticmethod
    def identity(d: int) -> "NormStats":
        return NormStats(np.zeros(d), np.ones(d))


def _parse_cell(text: str, line: int, column: str) -> float:
    text = text.strip().replace("−", "-")
    if text == "":
        return math.nan
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCell(line, column, text) from None
    if value == SENTINEL or math.isnan(value):
        return math.nan
    return value


def load_table(path, schema: list) -> WellTable:
    """Read a well CSV whose header carries well, depth, and the schema columns.

    The last schema column is the target. Empty cells and the -999.25 null
    sentinel are marked missing. Rows are grouped by well (first-appearance
    order) and sorted by depth; a duplicated depth within a well is an error.
    """
    if len(schema) < 2:
        raise MalformedFile("schema needs at least one feature column and a target column")
    feature_names = list(schema[:-1])
    target_name = schema[-1]

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MalformedFile(f"{path}: empty file")
        header = [h.strip() for h in header]
        for name in ("well", "depth", *schema):
            if name not in header:
                raise MalformedFile(f"{path}: missing column {name!r}")
        col = {name: header.index(name) for name in header}

        well_col, depth_col, feat_rows, target_col = [], [], [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if len(row) < len(header):
                raise MalformedFile(f"{path}: line {line_no} has {len(row)} cells, expected {len(header)}")
            well_col.append(row[col["well"]].strip())
            depth = _parse_cell(row[col["depth"]], line_no, "depth")
            if math.isnan(depth):
                raise NonNumericCell(line_no, "depth", row[col["depth"]])
            depth_col.append(depth)
            feat_rows.append([_parse_cell(row[col[f]], line_no, f) for f in feature_names])
            tv = _parse_cell(row[col[target_name]], line_no, target_name)
            if not math.isnan(tv) and not 0.0 <= tv <= 1.0:
                raise MalformedFile(f"{path}: line {line_no}: target {tv} outside [0, 1]")
            target_col.append(tv)

    wells = list(dict.fromkeys(well_col))
    order: list = []
    for w in wells:
        idx = [i for i, wid in enumerate(well_col) if wid == w]
        idx.sort(key=lambda i: depth_col[i])
        for a, b in zip(idx, idx[1:]):
            if depth_col[a] >= depth_col[b]:
                raise MalformedFile(f"{path}: well {w!r} repeats depth {depth_col[b]}")
        order.extend(idx)

    return WellTable(
        wells=wells,
        well_ids=np.array([well_col[i] for i in order]),
        depth=np.array([depth_col[i] for i in order], dtype=float),
        features=np.array([feat_rows[i] for i in order], dtype=float).reshape(len(order), len(feature_names)),
        target=np.array([target_col[i] for i in order], dtype=float),
        feature_names=feature_names,
        target_name=target_name,
    )


def _format_value(v: float) -> str:
    if math.isnan(v):
        return ""
    return f"{v:.6g}"


def write_table(t: WellTable, path) -> None:
    """Write a table back to CSV with 6-significant-digit values."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["well", "depth", *t.feature_names, t.target_name])
        for i in range(t.n_rows):
            writer.writerow([
                t.well_ids[i],
                _format_value(t.depth[i]),
                *(_format_value(v) for v in t.features[i]),
                _format_value(t.target[i]),
            ])


def _subset(t: WellTable, idx: np.ndarray) -> WellTable:
    wid = t.well_ids[idx]
    return WellTable(
        wells=[w for w in t.wells if (wid == w).any()],
        well_ids=wid,
        depth=t.depth[idx],
        features=t.features[idx],
        target=t.target[idx],
        feature_names=list(t.feature_names),
        target_name=t.target_name,
    )


def drop_invalid(t: WellTable) -> WellTable:
    """Remove every row with a missing feature or a missing target."""
    keep = np.isfinite(t.features).all(axis=1) & np.isfinite(t.target)
    if not keep.any():
        raise EmptyResult("no rows with complete values")
    return _subset(t, np.flatnonzero(keep))


def resample_uniform(t: WellTable, spacing: float | None = AUTO) -> WellTable:
    """Re-grid each well onto uniformly spaced depths by linear interpolation.

    spacing=AUTO uses the median consecutive depth step of each well. The grid
    runs from the first to the last observed depth; nothing is extrapolated.
    Run drop_invalid first: missing values would bleed into their neighbors.
    """
    if spacing is not AUTO and not spacing > 0:
        raise InvalidConfig("spacing must be positive")
    blocks = []
    for w in t.wells:
        idx = t.rows_of(w)
        if idx.size < 2:
            raise SingleRowWell(f"well {w!r} has {idx.size} row(s); need at least 2 to interpolate")
        depths = t.depth[idx]
        step = float(np.median(np.diff(depths))) if spacing is AUTO else float(spacing)
        count = int(math.floor((depths[-1] - depths[0]) / step + 1e-9)) + 1
        grid = depths[0] + step * np.arange(count)
        feats = np.column_stack([np.interp(grid, depths, t.features[idx, j])
                                 for j in range(t.features.shape[1])])
        tgt = np.interp(grid, depths, t.target[idx])
        blocks.append((np.full(count, w, dtype=t.well_ids.dtype), grid, feats, tgt))
    return WellTable(
        wells=list(t.wells),
        well_ids=np.concatenate([b[0] for b in blocks]),
        depth=np.concatenate([b[1] for b in blocks]),
        features=np.vstack([b[2] for b in blocks]),
        target=np.concatenate([b[3] for b in blocks]),
        feature_names=list(t.feature_names),
        target_name=t.target_name,
    )


def binarize_target(t: WellTable, threshold: float = 0.7) -> LabeledDataset:
    """Label each row HIGH when target >= threshold, LOW otherwise."""
    if not 0.0 < threshold < 1.0:
        raise InvalidConfig(f"threshold must lie in (0, 1), got {threshold}")
    if not np.isfinite(t.target).all() or not np.isfinite(t.features).all():
        raise ValueError("table still has missing cells; run drop_invalid first")
    y = np.where(t.target >= threshold, HIGH, LOW)
    return LabeledDataset(
        X=t.features.copy(),
        y=y.astype(int),
        well_ids=t.well_ids.copy(),
        feature_names=list(t.feature_names),
        wells=list(t.wells),
    )


def split_leave_one_well_out(d: LabeledDataset, test_well) -> SplitPlan:
    """Hold one well out.

    Training rows are the minority (LOW) rows of the other wells. Test rows
    are the majority rows of those wells plus every row of the held-out well,
    so the blind well is scored in full.
    """
    if test_well not in d.wells:
        raise UnknownWell(f"unknown well {test_well!r}; have {d.wells}")
    in_test_well = d.well_ids == test_well
    train = np.flatnonzero(~in_test_well & (d.y == LOW))
    if train.size == 0:
        raise NoMinorityTrainingData(f"no LOW rows outside well {test_well!r}")
    test = np.flatnonzero(in_test_well | (d.y == HIGH))
    return SplitPlan(test_well=test_well, train_rows=train, test_rows=test)


def normalize_fit(X, rows=None) -> NormStats:
    """Per-feature mean and standard deviation over the given rows.

    Population convention (divide by n). A constant feature gets std 1 so that
    applying the stats maps it to zero instead of dividing by zero.
    """
    X = np.asarray(X, dtype=float)
    sub = X if rows is None else X[np.asarray(rows)]
    if sub.shape[0] == 0:
        raise EmptyRowSet("cannot fit normalization on zero rows")
    mean = sub.mean(axis=0)
    std = sub.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return NormStats(mean=mean, std=std)


def normalize_apply(stats: NormStats, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return (X - stats.mean) / stats.std


def histogram(values, bins: int):
    """Equal-width histogram over [min, max].

    Bins are half-open except the last, which also takes the maximum value.
    Returns (edges, counts) with len(edges) == bins + 1.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("histogram of nothing")
    if bins < 1:
        raise InvalidConfig("need at least one bin")
    vmin, vmax = float(v.min()), float(v.max())
    edges = np.linspace(vmin, vmax, bins + 1)
    counts = np.zeros(bins, dtype=int)
    if vmax == vmin:
        counts[0] = v.size
    else:
        pos = (v - vmin) / (vmax - vmin) * bins
        idx = np.minimum(pos.astype(int), bins - 1)
        np.add.at(counts, idx, 1)
    return edges, counts


@dataclass
class SynthConfig:
    """Shape of a generated benchmark table.

    The first n_features - 2 features carry the class structure; the last two
    are pure noise. Minority rows form one compact cluster shared by all
    wells; majority rows come from a broader distribution whose center drifts
    a little from well to well.
    """

    n_wells: int = 4
    rows_per_well: int = 500
    skew: float = 0.97
    n_features: int = 6
    seed: int = 1


def _well_names(k: int) -> list:
    if k <= 26:
        return [chr(ord("A") + i) for i in range(k)]
    return [f"W{i + 1:03d}" for i in range(k)]


def gen_synthetic(cfg: SynthConfig) -> WellTable:
    """Deterministic imbalanced multi-well table for benchmarks and tests."""
    if cfg.n_wells < 1:
        raise InvalidConfig("need at least one well")
    if cfg.rows_per_well < 2:
        raise InvalidConfig("need at least two rows per well")
    if not 0.0 < cfg.skew < 1.0:
        raise InvalidConfig(f"skew must lie in (0, 1), got {cfg.skew}")
    if cfg.n_features < 2:
        raise InvalidConfig("need at least two features")

    rng = np.random.default_rng(cfg.seed)
    d = cfg.n_features
    n_info = d - 2
    names = _well_names(cfg.n_wells)
    n = cfg.rows_per_well
    m = max(1, round(n * (1.0 - cfg.skew)))  # minority rows per well

    ids, depths, feats, targets = [], [], [], []
    for w in names:
        drift = rng.normal(0.0, 0.4, size=n_info)
        minority = np.zeros(n, dtype=bool)
        minority[rng.choice(n, size=m, replace=False)] = True

        X = np.empty((n, d))
        # Minority rows share a latent factor, so the cluster is a tight
        # correlated streak rather than an axis-aligned blob.
        u = rng.normal(0.0, 1.0, size=m)
        X[minority, :n_info] = 0.55 * u[:, None] + rng.normal(0.0, 0.25, size=(m, n_info))
        X[~minority, :n_info] = rng.normal(1.2 + drift, 1.8, size=(n - m, n_info))
        X[:, n_info:] = rng.normal(0.0, 1.0, size=(n, 2))

        t = np.empty(n)
        t[minority] = rng.uniform(0.02, 0.68, size=m)
        t[~minority] = rng.uniform(0.70, 1.0, size=n - m)

        ids.append(np.full(n, w))
        depths.append(1000.0 + 0.5 * np.arange(n))
        feats.append(X)
        targets.append(t)

    return WellTable(
        wells=names,
        well_ids=np.concatenate(ids),
        depth=np.concatenate(depths),
        features=np.vstack(feats),
        target=np.concatenate(targets),
        feature_names=[f"f{i + 1}" for i in range(d)],
        target_name="sw",
    )
