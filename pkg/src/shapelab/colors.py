"""Color values and the named palette.

PALETTE below is the single source of truth for named colors: the
typechecker, evaluator, docs, and the HTTP palette endpoint all read
from it. RGB values follow the CSS color keywords.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownColor, closest_names


@dataclass(frozen=True)
class Color:
    """Integer RGB in 0..255 plus alpha in 0..1."""

    red: int
    green: int
    blue: int
    alpha: float = 1.0

    def hex(self) -> str:
        return f"#{self.red:02X}{self.green:02X}{self.blue:02X}"


def _channel(v: float) -> int:
    # out-of-range components clamp, they are not errors
    if v < 0.0:
        return 0
    if v > 255.0:
        return 255
    return round(v)


def rgb(r: float, g: float, b: float) -> Color:
    return Color(_channel(r), _channel(g), _channel(b))


# name -> (red, green, blue). Order here is the documented order.
PALETTE: dict[str, tuple[int, int, int]] = {
    "red": (255, 0, 0),
    "orange": (255, 165, 0),
    "yellow": (255, 255, 0),
    "green": (0, 128, 0),
    "blue": (0, 0, 255),
    "purple": (128, 0, 128),
    "pink": (255, 192, 203),
    "brown": (165, 42, 42),
    "black": (0, 0, 0),
    "white": (255, 255, 255),
    "grey": (128, 128, 128),
    "gray": (128, 128, 128),
    "lightBlue": (173, 216, 230),
    "darkGreen": (0, 100, 0),
    "darkRed": (139, 0, 0),
    "darkBlue": (0, 0, 139),
}


def color_from_name(name: str) -> Color:
    try:
        r, g, b = PALETTE[name]
    except KeyError:
        raise UnknownColor(name, closest_names(name, PALETTE.keys())) from None
    return Color(r, g, b)
