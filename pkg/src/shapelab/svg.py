"""Deterministic SVG emission.

Collage coordinates put the origin at the center with y growing upward, so
the root group flips the y axis once and text elements flip themselves back.
Numbers go through one shared formatter and attributes keep a fixed order,
making output byte-stable across runs and platforms.
"""

from __future__ import annotations

import math

from .errors import BadRange
from .fmt import fmt
from .scene import (
    Circle,
    Filled,
    Geometry,
    Group,
    Leaf,
    Oval,
    Outlined,
    Rect,
    RoundedRect,
    SceneNode,
    Square,
    Style,
    Text,
    Triangle,
    triangle_vertices,
)
from .transform import IDENTITY, AffineTransform
from .values import VCollage, VNumber, VRecord, Value

TEXT_UNITS_PER_CHAR = 0.6


def _escape_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _matrix(t: AffineTransform) -> str:
    parts = ",".join(fmt(v) for v in (t.a, t.b, t.c, t.d, t.tx, t.ty))
    return f"matrix({parts})"


def _style_attrs(style: Style) -> list[str]:
    if isinstance(style, Filled):
        attrs = [f'fill="{style.color.hex()}"']
        if style.color.alpha != 1.0:
            attrs.append(f'fill-opacity="{fmt(style.color.alpha)}"')
        attrs.append('stroke="none"')
        return attrs
    assert isinstance(style, Outlined)
    attrs = ['fill="none"', f'stroke="{style.color.hex()}"']
    width = style.line.width
    attrs.append(f'stroke-width="{fmt(width)}"')
    if style.line.pattern == "dotted":
        attrs.append(f'stroke-dasharray="{fmt(width)} {fmt(2 * width)}"')
    elif style.line.pattern == "dashed":
        attrs.append(f'stroke-dasharray="{fmt(4 * width)} {fmt(4 * width)}"')
    return attrs


def _geometry_attrs(geom: Geometry) -> tuple[str, list[str]]:
    if isinstance(geom, Circle):
        return "circle", [f'r="{fmt(geom.radius)}"']
    if isinstance(geom, Square):
        s = geom.side
        return "rect", [
            f'x="{fmt(-s / 2)}"',
            f'y="{fmt(-s / 2)}"',
            f'width="{fmt(s)}"',
            f'height="{fmt(s)}"',
        ]
    if isinstance(geom, Rect):
        return "rect", [
            f'x="{fmt(-geom.width / 2)}"',
            f'y="{fmt(-geom.height / 2)}"',
            f'width="{fmt(geom.width)}"',
            f'height="{fmt(geom.height)}"',
        ]
    if isinstance(geom, RoundedRect):
        rx = min(geom.corner, geom.width / 2, geom.height / 2)
        return "rect", [
            f'x="{fmt(-geom.width / 2)}"',
            f'y="{fmt(-geom.height / 2)}"',
            f'width="{fmt(geom.width)}"',
            f'height="{fmt(geom.height)}"',
            f'rx="{fmt(max(rx, 0.0))}"',
        ]
    if isinstance(geom, Oval):
        return "ellipse", [f'rx="{fmt(geom.width / 2)}"', f'ry="{fmt(geom.height / 2)}"']
    if isinstance(geom, Triangle):
        points = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in triangle_vertices(geom.circumradius))
        return "polygon", [f'points="{points}"']
    raise AssertionError(f"unhandled geometry {geom!r}")


def _emit_leaf(leaf: Leaf, indent: str) -> list[str]:
    if isinstance(leaf.geometry, Text):
        attrs = [
            f'font-size="{fmt(leaf.geometry.size)}"',
            'text-anchor="middle"',
            'dominant-baseline="central"',
            'font-family="sans-serif"',
        ]
        attrs.extend(_style_attrs(leaf.style))
        if leaf.transform == IDENTITY:
            attrs.append('transform="scale(1,-1)"')
        else:
            attrs.append(f'transform="{_matrix(leaf.transform)} scale(1,-1)"')
        body = _escape_text(leaf.geometry.string)
        return [f"{indent}<text {' '.join(attrs)}>{body}</text>"]
    tag, attrs = _geometry_attrs(leaf.geometry)
    attrs.extend(_style_attrs(leaf.style))
    if leaf.transform != IDENTITY:
        attrs.append(f'transform="{_matrix(leaf.transform)}"')
    return [f"{indent}<{tag} {' '.join(attrs)}/>"]


def _emit_node(node: SceneNode, level: int) -> list[str]:
    indent = "  " * level
    if isinstance(node, Leaf):
        return _emit_leaf(node, indent)
    assert isinstance(node, Group)
    attr = "" if node.transform == IDENTITY else f' transform="{_matrix(node.transform)}"'
    if not node.children:
        return [f"{indent}<g{attr}/>"]
    lines = [f"{indent}<g{attr}>"]
    for child in node.children:
        lines.extend(_emit_node(child, level + 1))
    lines.append(f"{indent}</g>")
    return lines


def emit_svg(collage: VCollage) -> str:
    """Render a collage value to a complete SVG document."""
    w, h = collage.width, collage.height
    view_box = f"{fmt(-w / 2)} {fmt(-h / 2)} {fmt(w)} {fmt(h)}"
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view_box}"'
        f' width="{fmt(w)}" height="{fmt(h)}">',
        '  <g transform="scale(1,-1)">',
    ]
    root = collage.root
    assert isinstance(root, Group)
    if root.transform == IDENTITY:
        for child in root.children:
            lines.extend(_emit_node(child, 2))
    else:
        lines.extend(_emit_node(root, 2))
    lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def bind_time(model: Value, t: float) -> Value:
    """Give a model's time field the value t; other models pass through."""
    if isinstance(model, VRecord) and "time" in model.fields:
        fields = dict(model.fields)
        fields["time"] = VNumber(t)
        return VRecord(fields)
    return model


def frame_times(t0: float, t1: float, fps: float) -> list[float]:
    if not (t1 > t0) or not (fps > 0):
        raise BadRange("Animation needs t1 > t0 and fps > 0.")
    count = math.floor((t1 - t0) * fps + 1e-9) + 1
    return [t0 + k / fps for k in range(count)]


def frame_name(index: int) -> str:
    return f"frame_{index:06d}.svg"
