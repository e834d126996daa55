"""Dataset ingestion and preprocessing for the churn benchmark.

Implements the full protocol: CSV ingestion against the Telco schema,
one-hot encoding, correlation / variance-inflation diagnostics,
majority-class undersampling, z-score standardization, PCA with elbow
detection, and stratified train/test splitting.

All randomness flows through explicit seeds; fit-style objects
(OneHotEncoder, Standardizer, PcaModel) are fit on training data only
and applied to held-out rows with the training parameters.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    BalanceError,
    DataError,
    SchemaError,
    ShapeError,
    StratificationError,
)

TELCO_SCHEMA = (
    "customerID",
    "gender",
    "SeniorCitizen",
    "Partner",
    "Dependents",
    "tenure",
    "PhoneService",
    "MultipleLines",
    "InternetService",
    "OnlineSecurity",
    "OnlineBackup",
    "DeviceProtection",
    "TechSupport",
    "StreamingTV",
    "StreamingMovies",
    "Contract",
    "PaperlessBilling",
    "PaymentMethod",
    "MonthlyCharges",
    "TotalCharges",
    "Churn",
)

NUMERIC_COLUMNS = ("tenure", "MonthlyCharges", "TotalCharges")

CATEGORICAL_COLUMNS = tuple(
    c for c in TELCO_SCHEMA if c not in NUMERIC_COLUMNS + ("customerID", "Churn")
)

# Columns removed by the default profile: TotalCharges correlates ~0.83
# with tenure, PhoneService and MonthlyCharges carry high VIF.
DEFAULT_DROP_PROFILE = ("TotalCharges", "PhoneService", "MonthlyCharges")

VIF_CAP = 1e6


@dataclass
class LabeledDataset:
    """Named columns plus binary labels.

    Columns hold either float arrays (numeric) or string arrays
    (categorical, pre one-hot). `matrix()` is only available once every
    column is numeric.
    """

    columns: list[str]
    data: dict[str, np.ndarray]
    labels: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        for name in self.columns:
            if len(self.data[name]) != n:
                raise ShapeError(f"column {name!r} length != label length")

    @property
    def row_count(self) -> int:
        return len(self.labels)

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

    def matrix(self, columns: list[str] | None = None) -> np.ndarray:
        cols = columns if columns is not None else self.columns
        arrays = []
        for name in cols:
            arr = self.data[name]
            if not np.issubdtype(arr.dtype, np.number):
                raise DataError(f"column {name!r} is not numeric; one-hot encode first")
            arrays.append(arr.astype(float))
        return np.column_stack(arrays) if arrays else np.empty((self.row_count, 0))

    def subset(self, indices: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(
            columns=list(self.columns),
            data={name: self.data[name][indices] for name in self.columns},
            labels=self.labels[indices],
            meta=dict(self.meta),
        )

    def drop_columns(self, names) -> "LabeledDataset":
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise SchemaError(f"cannot drop missing columns: {missing}")
        keep = [c for c in self.columns if c not in set(names)]
        return LabeledDataset(
            columns=keep,
            data={name: self.data[name] for name in keep},
            labels=self.labels,
            meta=dict(self.meta),
        )


def load_churn_csv(path, blank_total_charges: str = "drop") -> LabeledDataset:
    """Ingest a Telco-schema churn CSV.

    customerID is dropped, Churn maps Yes->1 / No->0, and TotalCharges
    blanks are dropped or mean-imputed per `blank_total_charges`
    ("drop" | "impute"). meta records rows_ingested (pre-cleaning),
    rows_dropped and rows_imputed.
    """
    if blank_total_charges not in ("drop", "impute"):
        raise DataError(f"blank_total_charges must be 'drop' or 'impute', got {blank_total_charges!r}")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        missing = [c for c in TELCO_SCHEMA if c not in header]
        if missing:
            unknown = [c for c in header if c not in TELCO_SCHEMA]
            detail = f"; unexpected columns: {unknown}" if unknown else ""
            raise SchemaError(f"{path}: missing columns {missing}{detail}")
        col_index = {c: header.index(c) for c in TELCO_SCHEMA}
        rows = list(reader)

    n_ingested = len(rows)
    raw: dict[str, list] = {c: [] for c in TELCO_SCHEMA}
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"row {i}: expected {len(header)} fields, got {len(row)}")
        for c in TELCO_SCHEMA:
            raw[c].append(row[col_index[c]].strip())

    labels = np.empty(n_ingested, dtype=np.int8)
    for i, value in enumerate(raw["Churn"]):
        if value == "Yes":
            labels[i] = 1
        elif value == "No":
            labels[i] = 0
        else:
            raise DataError(f"row {i}: Churn value {value!r} is not Yes/No")

    def parse_numeric(name: str, allow_blank: bool) -> tuple[np.ndarray, np.ndarray]:
        values = np.empty(n_ingested)
        blank = np.zeros(n_ingested, dtype=bool)
        for i, text in enumerate(raw[name]):
            if text == "":
                if not allow_blank:
                    raise DataError(f"row {i}: blank value in column {name!r}")
                blank[i] = True
                values[i] = np.nan
                continue
            try:
                values[i] = float(text)
            except ValueError:
                raise DataError(f"row {i}: cannot parse {name}={text!r} as a number") from None
        return values, blank

    tenure, _ = parse_numeric("tenure", allow_blank=False)
    monthly, _ = parse_numeric("MonthlyCharges", allow_blank=False)
    total, total_blank = parse_numeric("TotalCharges", allow_blank=True)

    keep = np.ones(n_ingested, dtype=bool)
    n_imputed = 0
    if total_blank.any():
        if blank_total_charges == "drop":
            keep = ~total_blank
        else:
            total[total_blank] = float(np.nanmean(total))
            n_imputed = int(total_blank.sum())

    columns = [c for c in TELCO_SCHEMA if c not in ("customerID", "Churn")]
    data: dict[str, np.ndarray] = {}
    for name in columns:
        if name == "tenure":
            data[name] = tenure[keep]
        elif name == "MonthlyCharges":
            data[name] = monthly[keep]
        elif name == "TotalCharges":
            data[name] = total[keep]
        else:
            data[name] = np.array(raw[name], dtype=object)[keep]

    return LabeledDataset(
        columns=columns,
        data=data,
        labels=labels[keep],
        meta={
            "rows_ingested": n_ingested,
            "rows_dropped": int(n_ingested - keep.sum()),
            "rows_imputed": n_imputed,
        },
    )


class OneHotEncoder:
    """Categorical columns -> indicator columns named "col=value".

    Categories are learned at fit time (sorted for determinism). A value
    unseen at transform time maps to an all-zeros indicator group and is
    recorded in `unseen_report`.
    """

    def __init__(self, categorical_cols):
        self.categorical_cols = list(categorical_cols)
        self.categories: dict[str, list[str]] = {}
        self.unseen_report: list[tuple[str, str, int]] = []

    def fit(self, ds: LabeledDataset) -> "OneHotEncoder":
        missing = [c for c in self.categorical_cols if c not in ds.columns]
        if missing:
            raise SchemaError(f"categorical columns not in dataset: {missing}")
        for name in self.categorical_cols:
            self.categories[name] = sorted({str(v) for v in ds.data[name]})
        return self

    def transform(self, ds: LabeledDataset) -> LabeledDataset:
        if not self.categories:
            raise DataError("OneHotEncoder used before fit")
        columns: list[str] = []
        data: dict[str, np.ndarray] = {}
        unseen_counts: dict[tuple[str, str], int] = {}
        for name in ds.columns:
            if name not in self.categories:
                columns.append(name)
                data[name] = ds.data[name].astype(float)
                continue
            values = np.array([str(v) for v in ds.data[name]])
            known = set(self.categories[name])
            for v in values:
                if v not in known:
                    unseen_counts[(name, v)] = unseen_counts.get((name, v), 0) + 1
            for cat in self.categories[name]:
                col = f"{name}={cat}"
                columns.append(col)
                data[col] = (values == cat).astype(float)
        self.unseen_report = [(c, v, n) for (c, v), n in sorted(unseen_counts.items())]
        return LabeledDataset(columns=columns, data=data, labels=ds.labels, meta=dict(ds.meta))


def one_hot(ds: LabeledDataset, categorical_cols) -> LabeledDataset:
    """Fit-and-transform one-hot encoding of the listed columns."""
    return OneHotEncoder(categorical_cols).fit(ds).transform(ds)


def ordinal_matrix(ds: LabeledDataset) -> tuple[np.ndarray, list[str]]:
    """Numeric view with categoricals label-encoded by sorted category index.

    Used by the inspection report so correlations/VIFs are computed per
    original column rather than per indicator.
    """
    arrays = []
    for name in ds.columns:
        arr = ds.data[name]
        if np.issubdtype(arr.dtype, np.number):
            arrays.append(arr.astype(float))
        else:
            cats = sorted({str(v) for v in arr})
            index = {c: i for i, c in enumerate(cats)}
            arrays.append(np.array([index[str(v)] for v in arr], dtype=float))
    return np.column_stack(arrays), list(ds.columns)


def pearson_corr(matrix, return_flags: bool = False):
    """Pearson correlation matrix; zero-variance columns correlate 0
    (flagged) and keep a unit diagonal."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ShapeError("pearson_corr needs a 2-D matrix with at least 2 rows")
    centered = matrix - matrix.mean(axis=0)
    norms = np.sqrt(np.sum(centered**2, axis=0))
    degenerate = norms == 0
    safe = np.where(degenerate, 1.0, norms)
    unit = centered / safe
    corr = np.clip(unit.T @ unit, -1.0, 1.0)
    corr[degenerate, :] = 0.0
    corr[:, degenerate] = 0.0
    np.fill_diagonal(corr, 1.0)
    if return_flags:
        return corr, degenerate
    return corr


def vif_scores(matrix, return_flags: bool = False):
    """Variance inflation factors 1/(1 - R^2_j), capped at VIF_CAP.

    R^2_j comes from least-squares regression (with intercept) of column
    j on all other columns. Constant columns report the cap and are
    flagged degenerate.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] < 2:
        raise ShapeError("vif_scores needs a 2-D matrix with at least 2 columns")
    n, d = matrix.shape
    vifs = np.empty(d)
    degenerate = np.zeros(d, dtype=bool)
    intercept = np.ones((n, 1))
    for j in range(d):
        target = matrix[:, j]
        sst = float(np.sum((target - target.mean()) ** 2))
        if sst == 0.0:
            vifs[j] = VIF_CAP
            degenerate[j] = True
            continue
        design = np.hstack([intercept, np.delete(matrix, j, axis=1)])
        coef, *_ = np.linalg.lstsq(design, target, rcond=None)
        ssr = float(np.sum((target - design @ coef) ** 2))
        r_sq = 1.0 - ssr / sst
        vifs[j] = VIF_CAP if r_sq >= 1.0 - 1.0 / VIF_CAP else min(1.0 / (1.0 - r_sq), VIF_CAP)
    if return_flags:
        return vifs, degenerate
    return vifs


def undersample(ds: LabeledDataset, seed: int) -> LabeledDataset:
    """Balance classes by uniform, seeded, without-replacement sampling of
    the majority class down to the minority count. All minority rows are
    kept; output row order is a seeded shuffle."""
    n0, n1 = ds.class_counts()
    if n0 == 0 or n1 == 0:
        raise BalanceError("undersample needs both classes present")
    rng = np.random.default_rng(seed)
    idx0 = np.flatnonzero(ds.labels == 0)
    idx1 = np.flatnonzero(ds.labels == 1)
    if n0 > n1:
        idx0 = rng.choice(idx0, size=n1, replace=False)
    elif n1 > n0:
        idx1 = rng.choice(idx1, size=n0, replace=False)
    combined = np.concatenate([idx0, idx1])
    return ds.subset(combined[rng.permutation(len(combined))])


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise DataError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def train_test_split(ds: LabeledDataset, spec: SplitSpec) -> tuple[LabeledDataset, LabeledDataset]:
    """Disjoint, exhaustive, seeded split; floor convention sends the
    remainder to the test side. Stratified splits floor per class."""
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        train_parts, test_parts = [], []
        for cls in (0, 1):
            idx = np.flatnonzero(ds.labels == cls)
            if len(idx) < 2:
                raise StratificationError(f"class {cls} has {len(idx)} rows; needs >= 2 to stratify")
            perm = idx[rng.permutation(len(idx))]
            cut = int(np.floor(spec.train_fraction * len(idx)))
            train_parts.append(perm[:cut])
            test_parts.append(perm[cut:])
        train_idx = np.concatenate(train_parts)
        test_idx = np.concatenate(test_parts)
    else:
        perm = rng.permutation(ds.row_count)
        cut = int(np.floor(spec.train_fraction * ds.row_count))
        train_idx, test_idx = perm[:cut], perm[cut:]
    # Reshuffle so stratified outputs are not label-blocked.
    train_idx = train_idx[rng.permutation(len(train_idx))]
    test_idx = test_idx[rng.permutation(len(test_idx))]
    return ds.subset(train_idx), ds.subset(test_idx)


class Standardizer:
    """Per-column z-score fit on the training split; zero-variance columns
    pass through unscaled (flagged)."""

    def __init__(self):
        self.mean: np.ndarray | None = None
        self.scale: np.ndarray | None = None
        self.constant_columns: np.ndarray | None = None

    def fit(self, matrix: np.ndarray) -> "Standardizer":
        matrix = np.asarray(matrix, dtype=float)
        self.mean = matrix.mean(axis=0)
        std = matrix.std(axis=0)
        self.constant_columns = std == 0
        self.scale = np.where(self.constant_columns, 1.0, std)
        return self

    def transform(self, matrix: np.ndarray) -> np.ndarray:
        if self.mean is None:
            raise DataError("Standardizer used before fit")
        return (np.asarray(matrix, dtype=float) - self.mean) / self.scale


@dataclass(frozen=True)
class PcaModel:
    """Principal components (rows, descending eigenvalue order) with the
    training mean and per-component explained-variance fractions over the
    full rank."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance_ratio: np.ndarray


def pca_fit(matrix, n_components: int) -> PcaModel:
    """PCA via SVD of the centered matrix.

    The ratio denominator is the total variance over the full rank, so
    `explained_variance_ratio` of a truncated model sums to < 1.
    Component signs are fixed deterministically (largest-|entry|
    coordinate made positive).
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ShapeError(f"pca_fit expects a 2-D matrix, got shape {matrix.shape}")
    n, d = matrix.shape
    if not 1 <= n_components <= min(n, d):
        raise ShapeError(f"n_components must be in [1, {min(n, d)}], got {n_components}")
    mean = matrix.mean(axis=0)
    _, singulars, vt = np.linalg.svd(matrix - mean, full_matrices=False)
    variances = singulars**2 / max(n - 1, 1)
    total = float(variances.sum())
    ratios = variances / total if total > 0 else np.zeros_like(variances)
    components = vt[:n_components]
    flips = np.sign(components[np.arange(n_components), np.argmax(np.abs(components), axis=1)])
    flips[flips == 0] = 1.0
    return PcaModel(
        mean=mean,
        components=components * flips[:, None],
        explained_variance_ratio=ratios[:n_components],
    )


def pca_transform(model: PcaModel, matrix) -> np.ndarray:
    """Project centered rows onto the principal components."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape[1] != model.mean.shape[0]:
        raise ShapeError(
            f"matrix has {matrix.shape[1]} columns, model was fit on {model.mean.shape[0]}"
        )
    return (matrix - model.mean) @ model.components.T


def full_variance_ratios(matrix) -> np.ndarray:
    """Explained-variance ratios over the full rank (for elbow curves)."""
    matrix = np.asarray(matrix, dtype=float)
    model = pca_fit(matrix, min(matrix.shape))
    return model.explained_variance_ratio


def elbow_index(ratios) -> int:
    """Elbow of the cumulative explained-variance curve.

    Returns the index maximizing perpendicular distance to the chord
    joining the curve's endpoints; ties break toward the smaller index.
    """
    ratios = np.asarray(ratios, dtype=float)
    if ratios.ndim != 1 or ratios.size < 3:
        raise DataError(f"elbow detection needs >= 3 components, got {ratios.size}")
    if np.any(np.diff(ratios) > 1e-12):
        raise DataError("ratios must be sorted in descending order")
    cumulative = np.cumsum(ratios)
    m = ratios.size
    x = np.arange(m, dtype=float)
    dx, dy = m - 1.0, cumulative[-1] - cumulative[0]
    chord_len = float(np.hypot(dx, dy))
    distances = np.abs(dx * (cumulative - cumulative[0]) - dy * (x - x[0])) / chord_len
    return int(np.argmax(distances))
