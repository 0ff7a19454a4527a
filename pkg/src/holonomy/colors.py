"""Edge color labels.

Graphs in this package carry a proper edge coloring with four colors,
written A, B, C, D. Internally a color is an int in ``range(4)``;
A < B < C < D fixes every canonical ordering used elsewhere.
"""

from __future__ import annotations

A: int = 0
B: int = 1
C: int = 2
D: int = 3

NUM_COLORS = 4
COLOR_NAMES = ("A", "B", "C", "D")
_NAME_TO_COLOR = {name: i for i, name in enumerate(COLOR_NAMES)}


def color_name(c: int) -> str:
    return COLOR_NAMES[c]


def color_from_name(name: str) -> int:
    try:
        return _NAME_TO_COLOR[name]
    except KeyError:
        raise ValueError(f"unknown edge color {name!r}") from None
