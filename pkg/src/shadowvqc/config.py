"""Run configuration: flat TOML file, defaults, and CLI overrides.

The config file is a flat key/value TOML document; every key has a
default, unknown keys are rejected, and command-line flags win over file
values.  Relative paths are rebased onto the ``--out`` directory when one
is given, so a whole experiment can live in a single folder.

Keys and defaults::

    dataset  = "dataset.jsonl"     # measurement records (JSON Lines)
    features = "features.csv"      # per-sample encoded features
    model    = "pipeline.json"     # fitted feature pipeline
    report   = "report.json"       # training report

    n_samples_per_class = 10
    n_qubits   = 51
    n_shots    = 500
    flip_noise = 0.05

    mode = "paper"                 # density reconstruction: paper|unbiased
    n_components = 4

    learning_rate = 0.5
    perturbation  = 0.4
    decay         = 0.02
    max_iters     = 120
    shot_schedule = "0:50:256,50:120:512"   # start:stop:shots segments

    train_z2 = 7  train_z3 = 7
    val_z2   = 1  val_z3   = 2
    test_z2  = 2  test_z3  = 1

    seed = 7                       # global seed; all substreams derive from it
    eval_shots = 0                 # 0 = exact final evaluation
    dump_expectations = false      # also write expectations.csv on preprocess
    dump_amplitudes = false        # also write amplitudes.csv on evaluate
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .data import GenConfig
from .errors import ConfigError
from .shadows import MODES
from .training import SplitSpec, SpsaConfig


@dataclass
class RunConfig:
    dataset: str = "dataset.jsonl"
    features: str = "features.csv"
    model: str = "pipeline.json"
    report: str = "report.json"

    n_samples_per_class: int = 10
    n_qubits: int = 51
    n_shots: int = 500
    flip_noise: float = 0.05

    mode: str = "paper"
    n_components: int = 4

    learning_rate: float = 0.5
    perturbation: float = 0.4
    decay: float = 0.02
    max_iters: int = 120
    shot_schedule: str = "0:50:256,50:120:512"

    train_z2: int = 7
    train_z3: int = 7
    val_z2: int = 1
    val_z3: int = 2
    test_z2: int = 2
    test_z3: int = 1

    seed: int = 7
    eval_shots: int = 0
    dump_expectations: bool = False

    def gen_config(self) -> GenConfig:
        return GenConfig(
            n_samples_per_class=self.n_samples_per_class,
            n_qubits=self.n_qubits,
            n_shots=self.n_shots,
            flip_noise=self.flip_noise,
            seed=self.seed,
        )

    def spsa_config(self) -> SpsaConfig:
        try:
            return SpsaConfig(
                learning_rate=self.learning_rate,
                perturbation=self.perturbation,
                decay=self.decay,
                max_iters=self.max_iters,
                shot_schedule=parse_shot_schedule(self.shot_schedule),
                seed=self.seed,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def split_spec(self) -> SplitSpec:
        try:
            return SplitSpec(
                train_z2=self.train_z2,
                train_z3=self.train_z3,
                val_z2=self.val_z2,
                val_z3=self.val_z3,
                test_z2=self.test_z2,
                test_z3=self.test_z3,
                seed=self.seed,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def parse_shot_schedule(text: str) -> tuple[tuple[tuple[int, int], int], ...]:
    """Parse "start:stop:shots,..." into schedule segments."""
    segments = []
    for part in text.split(","):
        pieces = part.strip().split(":")
        if len(pieces) != 3:
            raise ConfigError(f"bad shot schedule segment {part!r}, want start:stop:shots")
        try:
            start, stop, shots = (int(p) for p in pieces)
        except ValueError:
            raise ConfigError(f"non-integer shot schedule segment {part!r}") from None
        segments.append(((start, stop), shots))
    return tuple(segments)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value):
    expected = _FIELD_TYPES[key]
    if expected == "str":
        if not isinstance(value, str):
            raise ConfigError(f"config key {key!r} must be a string, got {value!r}")
        return value
    if expected == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"config key {key!r} must be a boolean, got {value!r}")
        return value
    if expected == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
        return value
    if expected == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
        return float(value)
    raise ConfigError(f"unhandled config key type for {key!r}")


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from defaults, an optional TOML file, and overrides."""
    values: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML ({exc})") from exc
        for key, value in doc.items():
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{path}: unknown config key {key!r}")
            values[key] = _coerce(key, value)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config override {key!r}")
        values[key] = _coerce(key, value)
    cfg = RunConfig(**values)
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.eval_shots < 0:
        raise ConfigError("eval_shots must be >= 0")
    # Validate the derived configs eagerly so any command rejects a bad file.
    cfg.gen_config()
    cfg.spsa_config()
    cfg.split_spec()
    return cfg


def rebase_paths(cfg: RunConfig, out_dir: str | None) -> RunConfig:
    """Rebase every relative path in the config onto ``out_dir``."""
    if not out_dir:
        return cfg
    for name in ("dataset", "features", "model", "report"):
        value = getattr(cfg, name)
        if not os.path.isabs(value):
            setattr(cfg, name, os.path.join(out_dir, value))
    return cfg
