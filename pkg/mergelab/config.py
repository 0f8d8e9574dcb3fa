"""Scenario and run configuration, YAML loading, seed splitting and the run manifest."""

import json
import math
from enum import StrEnum
from pathlib import Path
from typing import Any, Literal

import numpy as np
import yaml
from expression import Error, Ok, Result, tagged_union
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from mergelab import __version__
from mergelab.sim.state import TrafficParams
from mergelab.utils.file_utils import FileError, read_file, write_file

HALF_PI = math.pi / 2
# flags such as --svo 1.5708 round π/2 upward
PHI_TOLERANCE = 1e-4

SECONDS_PER_HOUR = 3600.0
# periodic evaluation during training never reuses evaluation-command seeds
TRAINING_EVAL_SEED_OFFSET = 1_000_000_000


class Density(StrEnum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


class DensityConfig(BaseModel):
    """Inflow preset in vehicles per hour per highway lane."""

    name: Density
    right_inflow: float
    left_inflow: float

    model_config = ConfigDict(frozen=True)

    @property
    def p_right(self) -> float:
        return self.right_inflow / SECONDS_PER_HOUR

    @property
    def p_left(self) -> float:
        return self.left_inflow / SECONDS_PER_HOUR


DENSITIES: dict[Density, DensityConfig] = {
    Density.EASY: DensityConfig(name=Density.EASY, right_inflow=405, left_inflow=90),
    Density.MEDIUM: DensityConfig(name=Density.MEDIUM, right_inflow=810, left_inflow=180),
    Density.HARD: DensityConfig(name=Density.HARD, right_inflow=1013, left_inflow=225),
}

TRAINING_UNCOOPERATIVE_FRACTION = 0.5
EVALUATION_UNCOOPERATIVE_FRACTION = 0.25


def _snap_phi(value: Any) -> Any:
    if isinstance(value, int | float) and HALF_PI < value <= HALF_PI + PHI_TOLERANCE:
        return HALF_PI
    return value


class ScenarioConfig(BaseModel):
    svo_phi: float = Field(default=math.pi / 4, ge=0.0, le=HALF_PI)
    inflow_left: float = Field(default=0.1, ge=0.0, le=1.0)
    inflow_right: float = Field(default=0.3, ge=0.0, le=1.0)
    uncooperative_fraction: float = Field(default=TRAINING_UNCOOPERATIVE_FRACTION, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)
    warmup_s: float = Field(default=60.0, ge=0.0)
    timeout_s: float = Field(default=150.0, gt=0.0)
    continue_after_merge: bool = True

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("svo_phi", mode="before")
    @classmethod
    def snap_phi(cls, value: Any) -> Any:
        return _snap_phi(value)

    def traffic_params(self) -> TrafficParams:
        return TrafficParams(
            p_right=self.inflow_right,
            p_left=self.inflow_left,
            uncooperative_fraction=self.uncooperative_fraction,
            timeout_s=self.timeout_s,
        )


def training_scenario(svo_phi: float = math.pi / 4, seed: int = 0) -> ScenarioConfig:
    return ScenarioConfig(svo_phi=svo_phi, seed=seed)


def training_evaluation_scenario(training: ScenarioConfig) -> ScenarioConfig:
    """Periodic evaluation during training: training inflows, evaluation driver mix."""
    return training.model_copy(
        update={"uncooperative_fraction": EVALUATION_UNCOOPERATIVE_FRACTION}
    )


def evaluation_scenario(
    density: Density | str = Density.MEDIUM, svo_phi: float = math.pi / 4, seed: int = 0
) -> ScenarioConfig:
    preset = DENSITIES[Density(density)]
    return ScenarioConfig(
        svo_phi=svo_phi,
        inflow_left=preset.p_left,
        inflow_right=preset.p_right,
        uncooperative_fraction=EVALUATION_UNCOOPERATIVE_FRACTION,
        seed=seed,
    )


Command = Literal["train", "eval", "sweep", "density-sweep", "replay", "dqn"]
Backend = Literal["sequential", "process"]


class RunConfig(BaseModel):
    """Fully resolved settings of one CLI invocation."""

    command: Command
    svo_phi: float = Field(default=math.pi / 4, ge=0.0, le=HALF_PI)
    density: Density = Density.MEDIUM
    total_timesteps: int = Field(default=15_000_000, gt=0)
    n_envs: int = Field(default=20, ge=1)
    horizon: int = Field(default=2048, ge=1)
    merges: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    out: Path = Path("runs/default")
    checkpoint: Path | None = None
    checkpoints: list[Path] = Field(default_factory=list)
    resume: bool = False
    backend: Backend = "sequential"
    eval_every: int = Field(default=100_000, gt=0)
    eval_episodes: int = Field(default=50, ge=1)
    checkpoint_every: int = Field(default=1_000_000, gt=0)
    workers: int = Field(default=1, ge=1)

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("svo_phi", mode="before")
    @classmethod
    def snap_phi(cls, value: Any) -> Any:
        return _snap_phi(value)


@tagged_union
class ConfigError:
    """Configuration loading and validation errors."""

    tag: Literal["file", "format", "unknown_key", "out_of_range"]
    file: FileError | None = None
    format: tuple[str, str] | None = None
    unknown_key: tuple[str, ...] | None = None
    out_of_range: str | None = None

    @staticmethod
    def File(error: FileError) -> "ConfigError":
        return ConfigError(tag="file", file=error)

    @staticmethod
    def Format(path: str, message: str) -> "ConfigError":
        return ConfigError(tag="format", format=(path, message))

    @staticmethod
    def UnknownKey(keys: list[str]) -> "ConfigError":
        return ConfigError(tag="unknown_key", unknown_key=tuple(sorted(keys)))

    @staticmethod
    def OutOfRange(message: str) -> "ConfigError":
        return ConfigError(tag="out_of_range", out_of_range=message)

    @property
    def exit_code(self) -> int:
        return 2 if self.tag in ("out_of_range", "unknown_key") else 1

    @property
    def kind(self) -> str:
        return "config_range" if self.tag == "out_of_range" else f"config_{self.tag}"

    def __str__(self) -> str:
        match self:
            case ConfigError(tag="file") if self.file is not None:
                return str(self.file)
            case ConfigError(tag="format") if self.format is not None:
                return f"{self.format[0]}: {self.format[1]}"
            case ConfigError(tag="unknown_key") if self.unknown_key is not None:
                return f"unknown configuration keys: {', '.join(self.unknown_key)}"
            case ConfigError(tag="out_of_range") if self.out_of_range is not None:
                return self.out_of_range
            case _:
                return "Unknown configuration error"


def _describe(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
    )


def load_yaml_mapping(path: Path) -> Result[dict[str, Any], ConfigError]:
    def parse(text: str) -> Result[dict[str, Any], ConfigError]:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            return Error(ConfigError.Format(str(path), str(e)))
        match data:
            case None:
                return Ok({})
            case dict():
                return Ok(data)
            case _:
                return Error(ConfigError.Format(str(path), "expected a key-value mapping"))

    return read_file(path).map_error(ConfigError.File).bind(parse)


def _check_keys(values: dict[str, Any], model: type[BaseModel]) -> Result[dict[str, Any], ConfigError]:
    unknown = [k for k in values if k not in model.model_fields]
    return Error(ConfigError.UnknownKey(unknown)) if unknown else Ok(values)


def _build(model: type[BaseModel], values: dict[str, Any]) -> Result[Any, ConfigError]:
    try:
        return Ok(model.model_validate(values))
    except ValidationError as e:
        return Error(ConfigError.OutOfRange(_describe(e)))


def load_scenario(path: Path) -> Result[ScenarioConfig, ConfigError]:
    return (
        load_yaml_mapping(path)
        .bind(lambda d: _check_keys(d, ScenarioConfig))
        .bind(lambda d: _build(ScenarioConfig, d))
    )


def resolve_run_config(
    command: Command, flags: dict[str, Any], config_file: Path | None = None
) -> Result[RunConfig, ConfigError]:
    """Flags override file values, which override defaults; unset flags are None."""
    explicit = {k: v for k, v in flags.items() if v is not None}
    from_file: Result[dict[str, Any], ConfigError] = (
        Ok({}) if config_file is None else load_yaml_mapping(config_file)
    )
    return (
        from_file.bind(lambda d: _check_keys(d, RunConfig))
        .map(lambda d: {**d, **explicit, "command": command})
        .bind(lambda d: _build(RunConfig, d))
    )


def scenario_for(run: RunConfig) -> ScenarioConfig:
    """Training runs use the training inflows; everything else uses the density preset."""
    if run.command in ("train", "dqn"):
        return training_scenario(run.svo_phi, run.seed)
    return evaluation_scenario(run.density, run.svo_phi, run.seed)


class TrainingSeeds(BaseModel):
    """Every generator of a training run derived from one master seed."""

    master: int
    envs: list[int]
    shuffle: int
    init: int

    model_config = ConfigDict(frozen=True)

    def env_seeds_at(self, timestep: int) -> list[int]:
        """Environment seeds for collection starting at ``timestep``; a resumed run reseeds."""
        if timestep == 0:
            return list(self.envs)
        return [_word(np.random.SeedSequence([s, timestep])) for s in self.envs]

    @property
    def evaluation_seed0(self) -> int:
        """First seed of the periodic evaluation episodes during training."""
        return TRAINING_EVAL_SEED_OFFSET + self.master


def _word(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def split_seeds(master: int, n_envs: int) -> TrainingSeeds:
    words = [_word(c) for c in np.random.SeedSequence(master).spawn(n_envs + 2)]
    return TrainingSeeds(master=master, envs=words[:n_envs], shuffle=words[n_envs], init=words[-1])


def evaluation_seeds(seed0: int, n: int) -> list[int]:
    return [seed0 + i for i in range(n)]


class Manifest(BaseModel):
    package_version: str = __version__
    run: RunConfig
    scenario: ScenarioConfig
    formats: dict[str, int]
    seeds: dict[str, Any]

    model_config = ConfigDict(frozen=True)


def write_manifest(out_dir: Path, manifest: Manifest) -> Result[Path, FileError]:
    document = json.loads(manifest.model_dump_json())
    return write_file(out_dir / "manifest.json", json.dumps(document, indent=2, sort_keys=True) + "\n")
