import pytest

from shapelab.colors import PALETTE, Color, color_from_name, rgb
from shapelab.errors import UnknownColor


def test_palette_holds_sixteen_names():
    assert len(PALETTE) == 16
    assert PALETTE["red"] == (255, 0, 0)
    assert PALETTE["green"] == (0, 128, 0)
    assert PALETTE["blue"] == (0, 0, 255)
    assert PALETTE["grey"] == PALETTE["gray"]


def test_color_from_name_returns_opaque_palette_entry():
    c = color_from_name("purple")
    assert (c.red, c.green, c.blue, c.alpha) == (128, 0, 128, 1.0)


def test_lookup_is_case_sensitive():
    with pytest.raises(UnknownColor):
        color_from_name("Red")


def test_unknown_color_suggests_closest_names():
    with pytest.raises(UnknownColor) as info:
        color_from_name("rde")
    assert "red" in info.value.suggestions


def test_rgb_rounds_and_clamps():
    assert rgb(12.4, 12.6, 300) == Color(12, 13, 255)
    assert rgb(-5, 0, 255.4) == Color(0, 0, 255)


def test_hex_is_uppercase_six_digits():
    assert Color(0, 128, 0).hex() == "#008000"
    assert Color(173, 216, 230).hex() == "#ADD8E6"
