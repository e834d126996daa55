"""Experiment-grid orchestrator.

Runs (encoding x model x PCA-dimension x seed) cells over the churn
pipeline: preprocess, balance, split, fit scaler/PCA/input-scaling on
the training split only, encode both splits, train, evaluate, time.

Cells sharing a (seed, pca_dim) prefix reuse the deterministic shared
stages (split, PCA, encodings), so encode_ms on a record is the cost of
the one shared encode its cell used. Groups are independent jobs and may
run in worker processes; results are merged in a fixed grid order, so
output is identical to a sequential run.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .encoders import EncoderConfig, FeatureScaler, encode_matrix
from .exceptions import ConfigError, QembenchError
from .learners import MODEL_KINDS, ModelSpec, UNSUPPORTED_KINDS
from .learners.metrics import MetricBundle, metrics
from .pipeline import (
    CATEGORICAL_COLUMNS,
    DEFAULT_DROP_PROFILE,
    LabeledDataset,
    PcaModel,
    SplitSpec,
    Standardizer,
    elbow_index,
    full_variance_ratios,
    load_churn_csv,
    one_hot,
    pca_fit,
    pca_transform,
    train_test_split,
    undersample,
)


@dataclass
class ExperimentConfig:
    """Grid axes plus pipeline and output settings."""

    data_path: str | None = None
    out_dir: str = "results"
    encodings: list[EncoderConfig] = field(
        default_factory=lambda: [EncoderConfig(method=m) for m in
                                 ("classical-passthrough", "iqp", "displacement", "squeezing")]
    )
    models: list[str] = field(default_factory=lambda: list(MODEL_KINDS))
    unsupported_models: list[str] = field(default_factory=list)
    model_overrides: dict[str, dict] = field(default_factory=dict)
    pca_dims: list[int] = field(default_factory=lambda: [5, 10, 15, 23])
    seeds: list[int] = field(default_factory=lambda: [0])
    train_fraction: float = 0.8
    stratified: bool = True
    drop_columns: tuple = DEFAULT_DROP_PROFILE
    blank_total_charges: str = "drop"
    workers: int = 1

    def validate(self):
        if not self.encodings:
            raise ConfigError("no encodings configured")
        if not self.models:
            raise ConfigError("no models configured")
        if not self.pca_dims or any(d < 1 for d in self.pca_dims):
            raise ConfigError(f"pca_dims must be positive, got {self.pca_dims}")
        if not self.seeds:
            raise ConfigError("no seeds configured")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        names = [e.method for e in self.encodings]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate encodings in grid: {names}")
        for kind in self.models:
            if kind in UNSUPPORTED_KINDS:
                raise ConfigError(
                    f"model {kind!r} is unsupported; list it under unsupported_models"
                )
            if kind not in MODEL_KINDS:
                raise ConfigError(f"unknown model kind {kind!r}")
        for kind, params in self.model_overrides.items():
            ModelSpec(kind=kind, hyperparameters=params)  # raises ConfigError if bad


@dataclass
class ExperimentRecord:
    """One grid cell: identity, metric bundle and wall-clock timings (ms)."""

    encoding: str
    model: str
    pca_dim: int
    seed: int
    metrics: MetricBundle | None = None
    encode_ms: float = 0.0
    train_ms: float = 0.0
    predict_ms: float = 0.0
    error: str | None = None


@dataclass
class GridResult:
    records: list[ExperimentRecord]
    variance_ratios: np.ndarray
    elbow: int
    skipped_unsupported: list[str]


def load_and_preprocess(cfg: ExperimentConfig) -> LabeledDataset:
    """Ingest, apply the drop profile, one-hot encode."""
    if cfg.data_path is None:
        raise ConfigError("no data path configured (flag --data, config [data] path, or QEMBENCH_DATA)")
    ds = load_churn_csv(cfg.data_path, blank_total_charges=cfg.blank_total_charges)
    if cfg.drop_columns:
        ds = ds.drop_columns(cfg.drop_columns)
    categorical = [c for c in CATEGORICAL_COLUMNS if c in ds.columns]
    return one_hot(ds, categorical)


def fit_preprocessing(train_matrix: np.ndarray, dim: int) -> tuple[Standardizer, PcaModel]:
    """Standardizer and PCA fit on the training matrix only."""
    scaler = Standardizer().fit(train_matrix)
    pca = pca_fit(scaler.transform(train_matrix), dim)
    return scaler, pca


def prepare_features(
    train_matrix: np.ndarray,
    test_matrix: np.ndarray,
    dim: int,
    enc_cfg: EncoderConfig,
):
    """Project both splits through train-fitted scaler/PCA/input-scaling
    and encode them. Returns (fitted, encoded_train, encoded_test) where
    `fitted` holds every train-derived parameter, for leakage checks."""
    scaler, pca = fit_preprocessing(train_matrix, dim)
    reduced_train = pca_transform(pca, scaler.transform(train_matrix))
    reduced_test = pca_transform(pca, scaler.transform(test_matrix))
    input_scaler = FeatureScaler(enc_cfg.input_scaling).fit(reduced_train)
    encoded_train = encode_matrix(input_scaler.transform(reduced_train), enc_cfg)
    encoded_test = encode_matrix(input_scaler.transform(reduced_test), enc_cfg)
    fitted = {
        "scaler_mean": scaler.mean,
        "scaler_scale": scaler.scale,
        "pca_mean": pca.mean,
        "pca_components": pca.components,
        "input_mins": input_scaler.mins,
        "input_spans": input_scaler.spans,
    }
    return fitted, encoded_train, encoded_test


def _run_group(args) -> list[ExperimentRecord]:
    """All cells for one (seed, pca_dim): encodings x models."""
    cfg, ds, seed, dim = args
    records: list[ExperimentRecord] = []
    balanced = undersample(ds, seed)
    train, test = train_test_split(
        balanced, SplitSpec(cfg.train_fraction, seed=seed, stratified=cfg.stratified)
    )
    train_matrix = train.matrix()
    test_matrix = test.matrix()
    if dim > min(train_matrix.shape):
        raise ConfigError(
            f"pca_dim {dim} exceeds post-preprocessing width {min(train_matrix.shape)}"
        )
    scaler, pca = fit_preprocessing(train_matrix, dim)
    reduced_train = pca_transform(pca, scaler.transform(train_matrix))
    reduced_test = pca_transform(pca, scaler.transform(test_matrix))

    for enc_cfg in cfg.encodings:
        t0 = time.perf_counter()
        try:
            input_scaler = FeatureScaler(enc_cfg.input_scaling).fit(reduced_train)
            encoded_train = encode_matrix(input_scaler.transform(reduced_train), enc_cfg)
            encoded_test = encode_matrix(input_scaler.transform(reduced_test), enc_cfg)
            encode_error = None
        except QembenchError as exc:
            encode_error = f"encode failed: {exc}"
        encode_ms = (time.perf_counter() - t0) * 1000.0

        for kind in cfg.models:
            record = ExperimentRecord(
                encoding=enc_cfg.method, model=kind, pca_dim=dim, seed=seed,
                encode_ms=encode_ms,
            )
            records.append(record)
            if encode_error is not None:
                record.error = encode_error
                continue
            try:
                spec = ModelSpec(
                    kind=kind,
                    hyperparameters=cfg.model_overrides.get(kind, {}),
                    seed=seed,
                )
                t0 = time.perf_counter()
                model = spec.build().fit(encoded_train, train.labels)
                record.train_ms = (time.perf_counter() - t0) * 1000.0
                t0 = time.perf_counter()
                scores = model.predict_score(encoded_test)
                predictions = (scores >= 0.5).astype(int)
                record.predict_ms = (time.perf_counter() - t0) * 1000.0
                record.metrics = metrics(test.labels, predictions, scores)
            except Exception as exc:  # annotate the cell, keep the grid going
                record.error = f"{type(exc).__name__}: {exc}"
    return records


def run_grid_on_dataset(cfg: ExperimentConfig, ds: LabeledDataset) -> GridResult:
    """Run the grid on an already-preprocessed (all-numeric) dataset."""
    cfg.validate()
    width = len(ds.columns)
    bad_dims = [d for d in cfg.pca_dims if d > width]
    if bad_dims:
        raise ConfigError(f"pca_dims {bad_dims} exceed post-preprocessing width {width}")

    groups = [(cfg, ds, seed, dim) for seed in cfg.seeds for dim in cfg.pca_dims]
    if cfg.workers > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            group_records = list(pool.map(_run_group, groups))
    else:
        group_records = [_run_group(g) for g in groups]

    # Canonical order: encoding, model, pca_dim, seed (config axis order).
    flat = [r for group in group_records for r in group]
    enc_order = {e.method: i for i, e in enumerate(cfg.encodings)}
    model_order = {m: i for i, m in enumerate(cfg.models)}
    dim_order = {d: i for i, d in enumerate(cfg.pca_dims)}
    seed_order = {s: i for i, s in enumerate(cfg.seeds)}
    flat.sort(
        key=lambda r: (enc_order[r.encoding], model_order[r.model],
                       dim_order[r.pca_dim], seed_order[r.seed])
    )

    # Figure-1-style curve: full-rank ratios of the standardized balanced
    # data under the first seed (report-only).
    balanced = undersample(ds, cfg.seeds[0])
    standardized = Standardizer().fit(balanced.matrix()).transform(balanced.matrix())
    ratios = full_variance_ratios(standardized)
    return GridResult(
        records=flat,
        variance_ratios=ratios,
        elbow=elbow_index(ratios),
        skipped_unsupported=list(cfg.unsupported_models),
    )


def run_grid(cfg: ExperimentConfig) -> GridResult:
    """Load the configured data file and run the full grid."""
    cfg.validate()
    return run_grid_on_dataset(cfg, load_and_preprocess(cfg))
