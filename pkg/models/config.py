import os
import json
import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from core.errors import ConfigError
from core.scalar import parse_rational

logger = logging.getLogger("run_config")

INEQUALITY_IDS = (
    "lemma1",
    "lemma2",
    "lemma2_stated",
    "lemma2_inf",
    "lemma3_left",
    "lemma3_right",
    "corollary_lower",
    "corollary_upper",
    "interpolation",
    "interpolation_p",
)

# lemma2_stated carries the constant 2^(d-|J|), which fails for some sets
DEFAULT_INEQUALITIES = tuple(i for i in INEQUALITY_IDS if i != "lemma2_stated")


class SearchBudget(BaseModel):
    """Caps on the exact enumerations; exceeding one raises BudgetExceededError"""
    linf_candidates: int = Field(default=4225, ge=1)
    linf_star_candidates: int = Field(default=131585, ge=1)
    lambda_star_candidates: int = Field(default=50000, ge=1)
    cells: int = Field(default=20000, ge=1)
    shift_evaluations: int = Field(default=64, ge=1)
    escalations: int = Field(default=2, ge=0, le=8)
    max_dim: int = Field(default=4, ge=1, le=8)

    def escalated(self, step: int) -> "SearchBudget":
        """Budget after `step` escalations (shift evaluations grow fourfold each)"""
        return self.model_copy(update={"shift_evaluations": self.shift_evaluations * 4 ** step})


class GeneratorKind(str, Enum):
    RANDOM = "random"
    KOROBOV = "korobov"
    VAN_DER_CORPUT = "van_der_corput"
    HAMMERSLEY = "hammersley"
    EXPLICIT = "explicit"

    @classmethod
    def parse(cls, name: str) -> "GeneratorKind":
        aliases = {"vdc": cls.VAN_DER_CORPUT, "lattice": cls.KOROBOV, "file": cls.EXPLICIT}
        name = name.strip().lower().replace("-", "_")
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            raise ConfigError(f"Unknown generator family: {name!r}") from None


def _parse_kind(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return GeneratorKind.parse(value)
        except ConfigError as e:
            raise ValueError(str(e)) from None
    return value


class GeneratorSpec(BaseModel):
    kind: GeneratorKind
    n: Optional[int] = Field(default=None, ge=1, le=1_000_000)
    d: int = Field(default=1, ge=1, le=16)
    a: Optional[int] = Field(default=None, ge=1)
    denominator: int = Field(default=1 << 16, ge=2)
    seed: int = Field(default=0, ge=0)
    base: Optional[int] = Field(default=None, ge=2)
    bases: Optional[List[int]] = None
    path: Optional[str] = None

    @field_validator("kind", mode="before")
    @classmethod
    def known_kind(cls, value: Any) -> Any:
        return _parse_kind(value)

    @model_validator(mode="after")
    def required_parameters(self) -> "GeneratorSpec":
        if self.kind == GeneratorKind.EXPLICIT and not self.path:
            raise ValueError("explicit point sets need a path")
        if self.kind != GeneratorKind.EXPLICIT and self.n is None:
            raise ValueError(f"{self.kind.value} needs n")
        return self


class SweepConfig(BaseModel):
    """Parameter grid of a sweep: one family, several sizes"""
    family: GeneratorKind
    n_values: List[int] = Field(min_length=1)
    d: int = Field(default=2, ge=1, le=8)
    params: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("family", mode="before")
    @classmethod
    def known_family(cls, value: Any) -> Any:
        return _parse_kind(value)

    @field_validator("n_values")
    @classmethod
    def positive_sizes(cls, values: List[int]) -> List[int]:
        if any(n < 1 for n in values):
            raise ValueError("sweep sizes must be positive")
        return values


class RunConfig(BaseModel):
    command: Literal["gen", "eval", "identity", "extremal", "lq", "verify", "sweep"]
    input: Optional[str] = None
    generator: Optional[GeneratorSpec] = None
    q: List[str] = Field(default_factory=lambda: ["1", "2", "4"])
    inequalities: List[str] = Field(default_factory=lambda: list(DEFAULT_INEQUALITIES))
    budget: SearchBudget = Field(default_factory=SearchBudget)
    seed: int = Field(default=0, ge=0)
    jobs: int = Field(default=1, ge=1, le=256)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    anchor: List[str] = Field(default_factory=list)
    anchors: int = Field(default=100, ge=0, le=1_000_000)
    inject_fault: bool = False
    mc_samples: int = Field(default=20000, ge=2, le=10_000_000)
    timing: bool = False
    sweep: Optional[SweepConfig] = None
    # upper exponent of the finite interpolation check
    interpolation_p: str = "2"

    @field_validator("q", mode="before")
    @classmethod
    def positive_rationals(cls, values: Any) -> List[str]:
        if not isinstance(values, (list, tuple)):
            values = [values]
        canonical = []
        for text in values:
            value = parse_rational(str(text))
            if value <= 0:
                raise ValueError(f"q must be positive, got {text}")
            canonical.append(str(value))
        return canonical

    @field_validator("interpolation_p", mode="before")
    @classmethod
    def above_one(cls, value: Any) -> str:
        p = parse_rational(str(value))
        if p <= 1:
            raise ValueError(f"interpolation_p must exceed 1, got {value}")
        return str(p)

    @field_validator("inequalities")
    @classmethod
    def known_inequalities(cls, values: List[str]) -> List[str]:
        unknown = [v for v in values if v not in INEQUALITY_IDS]
        if unknown:
            raise ValueError(f"Unknown inequality ids: {', '.join(unknown)}")
        return values

    @property
    def q_values(self) -> List[Fraction]:
        return [parse_rational(t) for t in self.q]

    @property
    def p_value(self) -> Fraction:
        return parse_rational(self.interpolation_p)


def load_config(config_path: str) -> Dict[str, Any]:
    """
    Load a run configuration file

    Args:
        config_path: Path to a .yaml/.yml or .json file

    Returns:
        Configuration dictionary
    """
    if not os.path.exists(config_path):
        logger.error(f"Configuration file not found: {config_path}")
        raise ConfigError(f"Configuration file not found: {config_path}")

    _, ext = os.path.splitext(config_path)
    try:
        if ext.lower() in (".yaml", ".yml"):
            with open(config_path, "r") as f:
                config = yaml.safe_load(f)
        elif ext.lower() == ".json":
            with open(config_path, "r") as f:
                config = json.load(f)
        else:
            logger.error(f"Unsupported configuration file format: {ext}")
            raise ConfigError(f"Unsupported configuration file format: {ext}")
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        logger.error(f"Error loading configuration: {e}")
        raise ConfigError(f"Cannot parse {config_path}: {e}") from e

    if not isinstance(config, dict):
        raise ConfigError(f"{config_path} does not hold a mapping")
    logger.info(f"Loaded configuration from {config_path}")
    return config
