"""Canonical float formatting shared by the SVG backend and serializers.

One formatting everywhere is what makes emission byte-deterministic.
"""

from __future__ import annotations


def fmt(x: float) -> str:
    """Up to 9 significant digits, trailing zeros trimmed, no "-0"."""
    text = format(x, ".9g")
    if text == "-0":
        text = "0"
    return text
