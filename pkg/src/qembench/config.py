"""Experiment config files: flat INI-style key/value with sectioned lists.

A complete example matching the benchmark grid ships in
configs/full_grid.conf. Per-model hyperparameter overrides live in
[models.<kind>] sections and are parsed with simple literal rules
(int, float, true/false, none, else string).
"""

from __future__ import annotations

import configparser
import os

from .bench import ExperimentConfig
from .encoders import EncoderConfig
from .exceptions import ConfigError
from .learners import MODEL_KINDS, UNSUPPORTED_KINDS

ENV_DATA_PATH = "QEMBENCH_DATA"


def _parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_value(text: str):
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    if lowered in ("none", "null"):
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text.strip()


def _parse_bool(text: str, key: str) -> bool:
    value = _parse_value(text)
    if not isinstance(value, bool):
        raise ConfigError(f"{key} must be a boolean, got {text!r}")
    return value


def load_config(path) -> ExperimentConfig:
    """Parse an experiment config file into a validated ExperimentConfig."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None

    cfg = ExperimentConfig()

    if parser.has_section("data"):
        data = parser["data"]
        cfg.data_path = data.get("path", cfg.data_path)
        if "drop_columns" in data:
            cfg.drop_columns = tuple(_parse_list(data["drop_columns"]))
        if "blank_total_charges" in data:
            mode = data["blank_total_charges"].strip()
            if mode not in ("drop", "impute"):
                raise ConfigError(f"blank_total_charges must be drop|impute, got {mode!r}")
            cfg.blank_total_charges = mode
    if cfg.data_path is None:
        cfg.data_path = os.environ.get(ENV_DATA_PATH)

    if parser.has_section("split"):
        split = parser["split"]
        if "train_fraction" in split:
            try:
                cfg.train_fraction = float(split["train_fraction"])
            except ValueError:
                raise ConfigError(f"train_fraction must be a number, got {split['train_fraction']!r}") from None
        if "stratified" in split:
            cfg.stratified = _parse_bool(split["stratified"], "stratified")

    encoder_kwargs = {}
    if parser.has_section("encoders"):
        enc = parser["encoders"]
        for key in ("probs_per_mode", "iqp_block"):
            if key in enc:
                encoder_kwargs[key] = int(enc[key])
        for key in ("alpha_clamp", "r_clamp"):
            if key in enc:
                encoder_kwargs[key] = float(enc[key])
        dims = {}
        if "displacement_dim" in enc:
            dims["displacement"] = int(enc["displacement_dim"])
        if "squeezing_dim" in enc:
            dims["squeezing"] = int(enc["squeezing_dim"])
    else:
        dims = {}

    if parser.has_section("grid"):
        grid = parser["grid"]
        if "encodings" in grid:
            methods = _parse_list(grid["encodings"])
            cfg.encodings = [
                EncoderConfig(method=m, fock_dim=dims.get(m), **encoder_kwargs)
                for m in methods
            ]
        if "models" in grid:
            names = _parse_list(grid["models"])
            cfg.models = [m for m in names if m not in UNSUPPORTED_KINDS]
            cfg.unsupported_models = [m for m in names if m in UNSUPPORTED_KINDS]
            unknown = [m for m in cfg.models if m not in MODEL_KINDS]
            if unknown:
                raise ConfigError(f"unknown model kinds: {unknown}")
        if "pca_dims" in grid:
            cfg.pca_dims = [int(v) for v in _parse_list(grid["pca_dims"])]
        if "seeds" in grid:
            cfg.seeds = [int(v) for v in _parse_list(grid["seeds"])]

    for section in parser.sections():
        if section.startswith("models."):
            kind = section.split(".", 1)[1]
            cfg.model_overrides[kind] = {
                key: _parse_value(value) for key, value in parser[section].items()
            }

    if parser.has_section("output"):
        out = parser["output"]
        cfg.out_dir = out.get("dir", cfg.out_dir)
        if "workers" in out:
            cfg.workers = int(out["workers"])

    cfg.validate()
    return cfg
