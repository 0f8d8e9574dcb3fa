"""Self-describing JSON checkpoints for PPO and DQN networks."""

import json
from pathlib import Path
from typing import Any, Literal

import numpy as np
from expression import Error, Ok, Result, tagged_union
from pydantic import BaseModel, ConfigDict, ValidationError

from mergelab.utils.file_utils import FileError, read_file, write_file

from .network import Params, PolicyNetwork, QNetwork
from .optim import Adam

CHECKPOINT_FORMAT_VERSION = 1

Kind = Literal["ppo", "dqn"]


class ArrayDoc(BaseModel):
    shape: list[int]
    data: list[float]

    model_config = ConfigDict(frozen=True)

    @classmethod
    def of(cls, a: np.ndarray) -> "ArrayDoc":
        return cls(shape=list(a.shape), data=a.ravel(order="C").tolist())

    def array(self) -> np.ndarray:
        return np.asarray(self.data, dtype=np.float64).reshape(self.shape)


class OptimizerDoc(BaseModel):
    learning_rate: float
    beta1: float
    beta2: float
    eps: float
    t: int
    m: dict[str, ArrayDoc]
    v: dict[str, ArrayDoc]


class CheckpointDocument(BaseModel):
    format_version: int = CHECKPOINT_FORMAT_VERSION
    kind: Kind
    obs_dim: int
    n_actions: int
    hidden: list[int]
    params: dict[str, ArrayDoc]
    optimizer: OptimizerDoc
    timestep: int
    rng_state: dict[str, Any]
    svo_phi: float
    config: dict[str, Any]
    target_params: dict[str, ArrayDoc] | None = None
    episodes: int = 0


@tagged_union
class CheckpointError:
    tag: Literal["file", "format", "version", "kind"]
    file: FileError | None = None
    format: tuple[str, str] | None = None
    version: tuple[str, int] | None = None
    kind: tuple[str, str, str] | None = None

    @staticmethod
    def File(error: FileError) -> "CheckpointError":
        return CheckpointError(tag="file", file=error)

    @staticmethod
    def Format(path: str, message: str) -> "CheckpointError":
        return CheckpointError(tag="format", format=(path, message))

    @staticmethod
    def Version(path: str, found: int) -> "CheckpointError":
        return CheckpointError(tag="version", version=(path, found))

    @staticmethod
    def Kind(path: str, found: str, expected: str) -> "CheckpointError":
        return CheckpointError(tag="kind", kind=(path, found, expected))

    def __str__(self) -> str:
        match self:
            case CheckpointError(tag="file") if self.file is not None:
                return str(self.file)
            case CheckpointError(tag="format") if self.format is not None:
                return f"{self.format[0]} is not a checkpoint: {self.format[1]}"
            case CheckpointError(tag="version") if self.version is not None:
                return (
                    f"{self.version[0]} has checkpoint format version {self.version[1]}, "
                    f"this build reads version {CHECKPOINT_FORMAT_VERSION}"
                )
            case CheckpointError(tag="kind") if self.kind is not None:
                return f"{self.kind[0]} holds a {self.kind[1]} network, expected {self.kind[2]}"
            case _:
                return "Unknown checkpoint error"


def params_to_doc(params: Params) -> dict[str, ArrayDoc]:
    return {name: ArrayDoc.of(value) for name, value in params.items()}


def params_from_doc(doc: dict[str, ArrayDoc]) -> Params:
    return {name: a.array() for name, a in doc.items()}


def optimizer_to_doc(adam: Adam) -> OptimizerDoc:
    return OptimizerDoc(
        learning_rate=adam.learning_rate,
        beta1=adam.beta1,
        beta2=adam.beta2,
        eps=adam.eps,
        t=adam.t,
        m=params_to_doc(adam.m),
        v=params_to_doc(adam.v),
    )


def optimizer_from_doc(doc: OptimizerDoc) -> Adam:
    return Adam(
        learning_rate=doc.learning_rate,
        beta1=doc.beta1,
        beta2=doc.beta2,
        eps=doc.eps,
        t=doc.t,
        m=params_from_doc(doc.m),
        v=params_from_doc(doc.v),
    )


def make_checkpoint(
    kind: Kind,
    net: PolicyNetwork | QNetwork,
    adam: Adam,
    timestep: int,
    rng: np.random.Generator,
    svo_phi: float,
    config: BaseModel,
    target: QNetwork | None = None,
    episodes: int = 0,
) -> CheckpointDocument:
    return CheckpointDocument(
        kind=kind,
        obs_dim=net.obs_dim,
        n_actions=net.n_actions,
        hidden=list(net.hidden),
        params=params_to_doc(net.params),
        optimizer=optimizer_to_doc(adam),
        timestep=timestep,
        rng_state=rng.bit_generator.state,
        svo_phi=svo_phi,
        config=config.model_dump(mode="json"),
        target_params=None if target is None else params_to_doc(target.params),
        episodes=episodes,
    )


def restore_rng(doc: CheckpointDocument) -> np.random.Generator:
    rng = np.random.default_rng()
    rng.bit_generator.state = doc.rng_state
    return rng


def network_from(doc: CheckpointDocument) -> PolicyNetwork | QNetwork:
    cls = PolicyNetwork if doc.kind == "ppo" else QNetwork
    return cls(params_from_doc(doc.params), tuple(doc.hidden))


def save_checkpoint(path: Path, doc: CheckpointDocument) -> Result[Path, CheckpointError]:
    return write_file(path, doc.model_dump_json() + "\n").map_error(CheckpointError.File)


def load_checkpoint(path: Path, kind: Kind | None = None) -> Result[CheckpointDocument, CheckpointError]:
    def parse(text: str) -> Result[CheckpointDocument, CheckpointError]:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            return Error(CheckpointError.Format(str(path), e.msg))
        if not isinstance(data, dict) or "format_version" not in data:
            return Error(CheckpointError.Format(str(path), "missing format_version"))
        if data["format_version"] != CHECKPOINT_FORMAT_VERSION:
            return Error(CheckpointError.Version(str(path), data["format_version"]))
        try:
            doc = CheckpointDocument.model_validate(data)
        except ValidationError as e:
            return Error(CheckpointError.Format(str(path), str(e.errors()[0]["msg"])))
        if kind is not None and doc.kind != kind:
            return Error(CheckpointError.Kind(str(path), doc.kind, kind))
        return Ok(doc)

    return read_file(path).map_error(CheckpointError.File).bind(parse)
