"""Static 2-d range successor / online sorted range reporting index."""

from .index import RangeSuccessorIndex
from .model import (
    DuplicateCoordinate,
    InvalidConfig,
    OutOfRange,
    Point,
    PointSet,
    QueryStats,
    RankSpaceMap,
    Rect,
    Space,
    rect_to_rank,
    reduce_to_rank,
    restore_point,
)
from .successor import SuccessorConfig
from .wavetree import BallInheritanceConfig

__all__ = [
    "BallInheritanceConfig",
    "DuplicateCoordinate",
    "InvalidConfig",
    "OutOfRange",
    "Point",
    "PointSet",
    "QueryStats",
    "RangeSuccessorIndex",
    "RankSpaceMap",
    "Rect",
    "Space",
    "SuccessorConfig",
    "rect_to_rank",
    "reduce_to_rank",
    "restore_point",
]

__version__ = "0.1.0"
