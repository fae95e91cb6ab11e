"""Tile identities, the canonical point-pattern atlas, and cell geometry.

The game board is an integer lattice carved into aligned 4x4 cells. A cell
whose points exactly match one of the 13 canonical patterns is a tile; any
other occupied cell is junk. Every pattern in the canonical atlas is a
combinatorial rectangle (a set of columns crossed with a set of rows) and
every pattern contains the cell-local origin (0, 0). The origin property
means the bottom-left point of any tile arrangement is always cell-aligned,
so recognition round-trips exactly through point reconstruction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

CELL = 4  # cells are 4x4 blocks of lattice points

Point = tuple[int, int]
CellAddr = tuple[int, int]


class TileType(Enum):
    TIP = "tip"
    TAPE = "tape"
    RULE = "rule"


class TileKind(Enum):
    """The 13 tile identities.

    Rule tiles fill packet slots R1..R5 in the fixed order read, status,
    write, change-status, movement. A movement value of 1 shifts the tape
    row left, 0 shifts it right.
    """

    TIP = "tip"
    TAPE_1 = "tape_1"
    TAPE_0 = "tape_0"
    READ_1 = "read_1"
    READ_0 = "read_0"
    STATUS_1 = "status_1"
    STATUS_0 = "status_0"
    WRITE_1 = "write_1"
    WRITE_0 = "write_0"
    CHANGE_1 = "change_status_1"
    CHANGE_0 = "change_status_0"
    MOVE_1 = "movement_1"
    MOVE_0 = "movement_0"

    @property
    def tile_type(self) -> TileType:
        return _TYPE[self]

    @property
    def family(self) -> str:
        """Identity with the constant stripped: tip, tape, read, ..."""
        return _FAMILY[self]

    @property
    def bit(self) -> int | None:
        """The 0/1 constant a tile represents; None for the tip."""
        return _BIT[self]

    @property
    def slot(self) -> int | None:
        """Packet slot index 1..5 for rule tiles, None otherwise."""
        return _SLOT.get(self)


_TYPE = {
    TileKind.TIP: TileType.TIP,
    TileKind.TAPE_1: TileType.TAPE,
    TileKind.TAPE_0: TileType.TAPE,
}
_TYPE.update({k: TileType.RULE for k in TileKind if k not in _TYPE})

_FAMILY = {
    TileKind.TIP: "tip",
    TileKind.TAPE_1: "tape",
    TileKind.TAPE_0: "tape",
    TileKind.READ_1: "read",
    TileKind.READ_0: "read",
    TileKind.STATUS_1: "status",
    TileKind.STATUS_0: "status",
    TileKind.WRITE_1: "write",
    TileKind.WRITE_0: "write",
    TileKind.CHANGE_1: "change_status",
    TileKind.CHANGE_0: "change_status",
    TileKind.MOVE_1: "movement",
    TileKind.MOVE_0: "movement",
}

_BIT = {k: (None if k is TileKind.TIP else int(k.value.rsplit("_", 1)[1])) for k in TileKind}

# Slot order R1..R5: read, status, write, change-status, movement.
_SLOT = {
    TileKind.READ_1: 1,
    TileKind.READ_0: 1,
    TileKind.STATUS_1: 2,
    TileKind.STATUS_0: 2,
    TileKind.WRITE_1: 3,
    TileKind.WRITE_0: 3,
    TileKind.CHANGE_1: 4,
    TileKind.CHANGE_0: 4,
    TileKind.MOVE_1: 5,
    TileKind.MOVE_0: 5,
}

_BY_FAMILY_BIT = {(_FAMILY[k], _BIT[k]): k for k in TileKind}


def tape_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("tape", value)]


def read_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("read", value)]


def status_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("status", value)]


def write_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("write", value)]


def change_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("change_status", value)]


def move_tile(value: int) -> TileKind:
    return _BY_FAMILY_BIT[("movement", value)]


def slot_tile(slot: int, value: int) -> TileKind:
    """Rule tile for packet slot 1..5 carrying the given bit."""
    family = ("read", "status", "write", "change_status", "movement")[slot - 1]
    return _BY_FAMILY_BIT[(family, value)]


class AtlasError(ValueError):
    """Raised for atlas files that violate the atlas invariants."""


@dataclass
class TileAtlas:
    """Mapping from tile kind to its 16-bit cell occupancy mask.

    Bit i of a mask is the point at (dx, dy) = (i % 4, i // 4), with dy
    counted upward from the cell's bottom edge.
    """

    patterns: dict[TileKind, int]
    _by_mask: dict[int, TileKind] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if set(self.patterns) != set(TileKind):
            raise AtlasError("atlas must define exactly the 13 tile kinds")
        if any(mask == 0 or mask >> 16 for mask in self.patterns.values()):
            raise AtlasError("atlas masks must be non-empty 16-bit values")
        self._by_mask = {mask: kind for kind, mask in self.patterns.items()}
        if len(self._by_mask) != len(self.patterns):
            raise AtlasError("atlas masks must be pairwise distinct")

    def kind_for_mask(self, mask: int) -> TileKind | None:
        return self._by_mask.get(mask)

    def points(self, kind: TileKind) -> frozenset[Point]:
        """Cell-local (dx, dy) offsets of the pattern's points."""
        mask = self.patterns[kind]
        return frozenset((i % CELL, i // CELL) for i in range(16) if mask >> i & 1)

    def to_json_obj(self) -> dict[str, str]:
        return {kind.value: _mask_to_string(mask) for kind, mask in self.patterns.items()}

    @classmethod
    def from_json_obj(cls, obj: dict[str, str]) -> "TileAtlas":
        names = {k.value for k in TileKind}
        if set(obj) != names:
            raise AtlasError(f"atlas file must map exactly the names {sorted(names)}")
        return cls({TileKind(name): _string_to_mask(text) for name, text in obj.items()})

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "TileAtlas":
        return cls.from_json_obj(json.loads(Path(path).read_text()))


def _mask_to_string(mask: int) -> str:
    # 16 chars, row-major, top row (dy = 3) first
    chars = []
    for row_from_top in range(CELL):
        dy = CELL - 1 - row_from_top
        for dx in range(CELL):
            chars.append("1" if mask >> (dy * CELL + dx) & 1 else "0")
    return "".join(chars)


def _string_to_mask(text: str) -> int:
    if len(text) != 16 or set(text) - {"0", "1"}:
        raise AtlasError(f"pattern string must be 16 chars of 0/1, got {text!r}")
    mask = 0
    for i, ch in enumerate(text):
        if ch == "1":
            dy = CELL - 1 - i // CELL
            dx = i % CELL
            mask |= 1 << (dy * CELL + dx)
    return mask


def atlas_default() -> TileAtlas:
    """The canonical atlas shipped with the package."""
    data = resources.files("debilandia").joinpath("data/atlas.json").read_text()
    return TileAtlas.from_json_obj(json.loads(data))


def classify_cell(mask: int, atlas: TileAtlas) -> TileKind | None:
    """Exact-match a cell occupancy mask; None means junk."""
    return atlas.kind_for_mask(mask)
