import logging

from core.errors import ConfigError
from dao.pointset_dao import PointSetDAO
from generators.factory import PointSetFactory
from models.config import RunConfig
from models.geometry import PointSet

logger = logging.getLogger("controllers")


def resolve_point_set(config: RunConfig) -> PointSet:
    """The point set a command works on: --input file or --generator spec"""
    if config.input:
        return PointSetDAO.load(config.input)
    if config.generator is not None:
        return PointSetFactory().create(config.generator)
    raise ConfigError(f"{config.command} needs --input or --generator")


def error_item(quantity: str, error: Exception) -> dict:
    logger.warning(f"{quantity}: {error}")
    return {"quantity": quantity, "error": str(error)}
