from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from core.errors import DimensionMismatchError, PointSetError
from core.scalar import (
    SidedValue,
    Side,
    format_rational,
    frac,
    parse_rational,
    sided,
    to_rational,
)


class TorusPoint:
    """A point of the d-torus stored by its residues in [0, 1)"""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords: Tuple[Fraction, ...] = tuple(frac(to_rational(c)) for c in coords)
        if not self.coords:
            raise PointSetError("A torus point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def sided(self) -> Tuple[SidedValue, ...]:
        return tuple(SidedValue(c) for c in self.coords)

    def to_list(self) -> List[str]:
        return [format_rational(c) for c in self.coords]

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, j: int) -> Fraction:
        return self.coords[j]

    def __eq__(self, other):
        return isinstance(other, TorusPoint) and self.coords == other.coords

    def __lt__(self, other: "TorusPoint"):
        return self.coords < other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"<TorusPoint ({', '.join(self.to_list())})>"


class PointSet:
    """
    Residues of a periodic point distribution, counted with multiplicity

    Immutable after construction; an empty set is rejected.
    """

    def __init__(self, dim: int, points: Iterable, label: str = ""):
        if dim < 1:
            raise PointSetError(f"Dimension must be positive, got {dim}")
        self.dim = dim
        self.points: Tuple[TorusPoint, ...] = tuple(
            p if isinstance(p, TorusPoint) else TorusPoint(p) for p in points
        )
        self.label = label
        if not self.points:
            raise PointSetError("Point set is empty (N = 0)")
        for point in self.points:
            if point.dim != dim:
                raise DimensionMismatchError(dim, point.dim)

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def coordinates(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(p.coords for p in self.points)

    def column(self, j: int) -> Tuple[Fraction, ...]:
        """Coordinate j (0-based) of every point"""
        return tuple(p.coords[j] for p in self.points)

    def to_dict(self) -> Dict:
        return {
            "dim": self.dim,
            "points": [p.to_list() for p in self.points],
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "PointSet":
        try:
            dim = int(data["dim"])
            points = [[parse_rational(str(c)) for c in row] for row in data["points"]]
        except (KeyError, TypeError) as e:
            raise PointSetError(f"Malformed point set document: {e}") from e
        return cls(dim, points, label=str(data.get("label", "")))

    def __len__(self):
        return len(self.points)

    def __iter__(self) -> Iterator[TorusPoint]:
        return iter(self.points)

    def __eq__(self, other):
        # multiset equality; the label is descriptive only
        return (
            isinstance(other, PointSet)
            and self.dim == other.dim
            and sorted(self.points) == sorted(other.points)
        )

    def __repr__(self):
        return f"<PointSet {self.label or 'unnamed'} d={self.dim} N={self.N}>"


def _validated_anchor_value(value: SidedValue) -> SidedValue:
    if not 0 <= value.value <= 1:
        raise ValueError(f"Anchor coordinate {value} outside [0, 1]")
    if value.value == 0 and value.side == Side.LEFT_LIMIT:
        raise ValueError("Anchor coordinate cannot approach 0 from the left")
    if value.value == 1 and value.side == Side.RIGHT_LIMIT:
        raise ValueError("Anchor coordinate cannot approach 1 from the right")
    return value


class Anchor:
    """Corner Y of an anchored box, coordinates in [0, 1] with side flags"""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords: Tuple[SidedValue, ...] = tuple(_validated_anchor_value(sided(c)) for c in coords)

    @classmethod
    def zeros(cls, dim: int) -> "Anchor":
        return cls([0] * dim)

    @classmethod
    def ones(cls, dim: int) -> "Anchor":
        return cls([1] * dim)

    @classmethod
    def parse(cls, text: str) -> "Anchor":
        """Parse "1/2,1/3+,3/4-" (trailing + / - mark right / left limits)"""
        coords = []
        for token in text.split(","):
            token = token.strip()
            side = Side.AT
            if token.endswith("+"):
                side, token = Side.RIGHT_LIMIT, token[:-1]
            elif token.endswith("-") and len(token) > 1:
                side, token = Side.LEFT_LIMIT, token[:-1]
            coords.append(SidedValue(parse_rational(token), side))
        return cls(coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_limit(self) -> bool:
        return any(c.side != Side.AT for c in self.coords)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    def at(self) -> "Anchor":
        return Anchor(c.at() for c in self.coords)

    def to_dict(self) -> List[Dict[str, str]]:
        return [c.to_dict() for c in self.coords]

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[SidedValue]:
        return iter(self.coords)

    def __getitem__(self, j: int) -> SidedValue:
        return self.coords[j]

    def __eq__(self, other):
        return isinstance(other, Anchor) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"<Anchor ({', '.join(str(c) for c in self.coords)})>"


class ShiftVector:
    """Torus shift Z, residues in [0, 1) with optional side flags"""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        self.coords: Tuple[SidedValue, ...] = tuple(
            SidedValue(frac(c.value), c.side) for c in (sided(c) for c in coords)
        )

    @classmethod
    def zeros(cls, dim: int) -> "ShiftVector":
        return cls([0] * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_limit(self) -> bool:
        return any(c.side != Side.AT for c in self.coords)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    def at(self) -> "ShiftVector":
        return ShiftVector(c.at() for c in self.coords)

    def __add__(self, other: "ShiftVector") -> "ShiftVector":
        if other.dim != self.dim:
            raise DimensionMismatchError(self.dim, other.dim)
        return ShiftVector(a + b for a, b in zip(self.coords, other.coords))

    def to_dict(self) -> List[Dict[str, str]]:
        return [c.to_dict() for c in self.coords]

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[SidedValue]:
        return iter(self.coords)

    def __getitem__(self, j: int) -> SidedValue:
        return self.coords[j]

    def __eq__(self, other):
        return isinstance(other, ShiftVector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"<ShiftVector ({', '.join(str(c) for c in self.coords)})>"


class IndexSubset:
    """
    A subset J of the coordinate indexes [d] = (1, ..., d)

    Members are 1-based like the coordinate indexes they name; ``positions``
    gives the 0-based offsets used to index tuples.
    """

    __slots__ = ("dim", "members")

    def __init__(self, dim: int, members: Iterable[int] = ()):
        self.dim = dim
        self.members: Tuple[int, ...] = tuple(sorted(set(members)))
        for j in self.members:
            if not 1 <= j <= dim:
                raise ValueError(f"Index {j} outside [1, {dim}]")

    @classmethod
    def full(cls, dim: int) -> "IndexSubset":
        return cls(dim, range(1, dim + 1))

    @classmethod
    def empty(cls, dim: int) -> "IndexSubset":
        return cls(dim)

    @classmethod
    def all_subsets(cls, dim: int) -> List["IndexSubset"]:
        """Every J of [d], by size and then lexicographically"""
        return cls.full(dim).subsets()

    @classmethod
    def parse(cls, dim: int, text: str) -> "IndexSubset":
        text = text.strip().strip("{}")
        return cls(dim, (int(t) for t in text.split(",") if t.strip()))

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(j - 1 for j in self.members)

    def complement(self) -> "IndexSubset":
        return IndexSubset(self.dim, (j for j in range(1, self.dim + 1) if j not in self.members))

    def subsets(self) -> List["IndexSubset"]:
        return [
            IndexSubset(self.dim, chosen)
            for size in range(len(self.members) + 1)
            for chosen in combinations(self.members, size)
        ]

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, j: int):
        return j in self.members

    def __bool__(self):
        return bool(self.members)

    def __eq__(self, other):
        return isinstance(other, IndexSubset) and (self.dim, self.members) == (other.dim, other.members)

    def __hash__(self):
        return hash((self.dim, self.members))

    def __str__(self):
        return "{" + ",".join(str(j) for j in self.members) + "}"

    def __repr__(self):
        return f"<IndexSubset {self} of [{self.dim}]>"


def check_dims(expected: int, *objects: Sequence) -> None:
    """Raise DimensionMismatchError unless every object has the expected length"""
    for obj in objects:
        if len(obj) != expected:
            raise DimensionMismatchError(expected, len(obj))
