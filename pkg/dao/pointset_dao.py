import json
import logging

from core.errors import PointSetError
from models.geometry import PointSet

logger = logging.getLogger("pointset_dao")


class PointSetDAO:
    @staticmethod
    def from_json(text: str) -> PointSet:
        """Parse a point set document"""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise PointSetError(f"Point set is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise PointSetError("Point set document must be a JSON object")
        return PointSet.from_dict(data)

    @staticmethod
    def to_json(point_set: PointSet) -> str:
        """Serialize with coordinates as "p/q" strings"""
        return json.dumps(point_set.to_dict(), indent=2)

    @staticmethod
    def load(path: str) -> PointSet:
        """Load a point set file; coordinates are canonicalized to [0, 1)"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            logger.error(f"Cannot read point set {path}: {e}")
            raise
        point_set = PointSetDAO.from_json(text)
        logger.info(f"Loaded {point_set!r} from {path}")
        return point_set

    @staticmethod
    def save(point_set: PointSet, path: str) -> None:
        """Write a point set file"""
        with open(path, "w", encoding="utf-8") as f:
            f.write(PointSetDAO.to_json(point_set))
            f.write("\n")
        logger.info(f"Saved {point_set!r} to {path}")
