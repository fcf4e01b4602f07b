import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError

from core.errors import ConfigError, GeneratorError
from dao.pointset_dao import PointSetDAO
from generators.sequences import gen_hammersley, gen_korobov, gen_random, gen_van_der_corput
from models.config import GeneratorKind, GeneratorSpec, load_config
from models.geometry import PointSet

logger = logging.getLogger("pointset_factory")

SPEC_FILE_SUFFIXES = (".yaml", ".yml", ".json")


class PointSetFactory:
    """Factory for building point sets from generator specifications"""

    def __init__(self, defaults: Optional[Dict[str, Any]] = None):
        """
        Initialize point set factory

        Args:
            defaults: Parameter defaults merged under every spec (e.g. a seed)
        """
        self.defaults = dict(defaults or {})
        self.builders = {
            GeneratorKind.RANDOM: self._build_random,
            GeneratorKind.KOROBOV: self._build_korobov,
            GeneratorKind.VAN_DER_CORPUT: self._build_van_der_corput,
            GeneratorKind.HAMMERSLEY: self._build_hammersley,
            GeneratorKind.EXPLICIT: self._build_explicit,
        }
        logger.debug(f"Point set factory initialized with defaults={self.defaults}")

    @staticmethod
    def parse_spec(text: str) -> Dict[str, Any]:
        """
        Parse "kind:key=value,..." into a parameter dict

        Hammersley bases are written with slashes, e.g. "hammersley:n=8,d=3,bases=2/3".
        """
        kind, _, rest = text.partition(":")
        params: Dict[str, Any] = {"kind": GeneratorKind.parse(kind)}
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"Malformed generator parameter {item!r} in {text!r}")
            key = key.strip()
            if key == "bases":
                params[key] = [int(b) for b in value.split("/") if b]
            elif key == "path":
                params[key] = value.strip()
            else:
                try:
                    params[key] = int(value)
                except ValueError:
                    raise ConfigError(f"Generator parameter {key} must be an integer, got {value!r}") from None
        return params

    def spec_from(self, params: Dict[str, Any]) -> GeneratorSpec:
        merged = {**self.defaults, **params}
        try:
            return GeneratorSpec(**merged)
        except ValidationError as e:
            raise ConfigError(f"Invalid generator specification: {e}") from e

    def create(self, spec: GeneratorSpec) -> PointSet:
        """
        Build the point set described by a spec

        Args:
            spec: Validated generator spec

        Returns:
            PointSet labelled with its generator parameters
        """
        builder = self.builders.get(spec.kind)
        if builder is None:
            raise GeneratorError(f"No builder for generator kind {spec.kind}")
        point_set = builder(spec)
        logger.info(f"Generated {point_set!r}")
        return point_set

    def create_from_string(self, text: str) -> PointSet:
        return self.create(self.spec_from(self.parse_spec(text)))

    @staticmethod
    def is_spec_file(text: str) -> bool:
        return text.lower().endswith(SPEC_FILE_SUFFIXES)

    @classmethod
    def parse_file(cls, config_path: str) -> Dict[str, Any]:
        """Read a YAML/JSON file holding a generator mapping (or a run config with one)"""
        config = load_config(config_path)
        params = config.get("generator", config)
        if isinstance(params, str):
            return cls.parse_spec(params)
        if not isinstance(params, dict):
            raise ConfigError(f"No generator mapping in {config_path}")
        return dict(params)

    def create_from_file(self, config_path: str) -> PointSet:
        return self.create(self.spec_from(self.parse_file(config_path)))

    # --- builders ---

    @staticmethod
    def _build_random(spec: GeneratorSpec) -> PointSet:
        return gen_random(spec.n, spec.d, spec.denominator, spec.seed)

    @staticmethod
    def _build_korobov(spec: GeneratorSpec) -> PointSet:
        a = spec.a if spec.a is not None else (2 if spec.n > 2 else 1)
        return gen_korobov(spec.n, a, spec.d)

    @staticmethod
    def _build_van_der_corput(spec: GeneratorSpec) -> PointSet:
        if spec.d != 1:
            raise GeneratorError(f"van der Corput points are one-dimensional, got d={spec.d}")
        return gen_van_der_corput(spec.n, spec.base or 2)

    @staticmethod
    def _build_hammersley(spec: GeneratorSpec) -> PointSet:
        return gen_hammersley(spec.n, spec.d, spec.bases)

    @staticmethod
    def _build_explicit(spec: GeneratorSpec) -> PointSet:
        return PointSetDAO.load(spec.path)
