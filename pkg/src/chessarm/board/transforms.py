"""Cyclic placement translations used by the data-collection procedure."""

from __future__ import annotations

from .core import Placement


def shift_placement(placement: Placement, axis: str, steps: int) -> Placement:
    """Translate the grid cyclically by whole ranks or files.

    axis "row" moves piece content toward higher ranks (steps may be
    negative), axis "column" toward higher files; 8 steps is the identity.
    """
    if axis not in ("row", "column"):
        raise ValueError(f"axis must be 'row' or 'column', not {axis!r}")
    steps %= 8
    cells = [None] * 64
    for index, piece in enumerate(placement.cells):
        rank, file = index // 8, index % 8
        if axis == "row":
            rank = (rank + steps) % 8
        else:
            file = (file + steps) % 8
        cells[rank * 8 + file] = piece
    return Placement(tuple(cells))
