"""Scene graph: geometry, styles, handlers, nodes, flattening, bounds.

Nodes are immutable; transformers replace a node with a copy whose
transform is composed, so sharing subtrees is always safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .colors import Color
from .transform import IDENTITY, AffineTransform, compose


# --- geometry ---------------------------------------------------------------


class Geometry:
    pass


@dataclass(frozen=True)
class Circle(Geometry):
    radius: float


@dataclass(frozen=True)
class Square(Geometry):
    side: float


@dataclass(frozen=True)
class Triangle(Geometry):
    # equilateral, one vertex on the +x axis
    circumradius: float


@dataclass(frozen=True)
class Rect(Geometry):
    width: float
    height: float


@dataclass(frozen=True)
class Oval(Geometry):
    # full width and full height, not radii
    width: float
    height: float


@dataclass(frozen=True)
class RoundedRect(Geometry):
    width: float
    height: float
    corner: float


@dataclass(frozen=True)
class Text(Geometry):
    string: str
    size: float = 12.0


def triangle_vertices(r: float) -> list[tuple[float, float]]:
    return [
        (r * math.cos(2.0 * math.pi * k / 3.0), r * math.sin(2.0 * math.pi * k / 3.0))
        for k in range(3)
    ]


# --- style ------------------------------------------------------------------


@dataclass(frozen=True)
class LineType:
    pattern: str  # solid | dotted | dashed
    width: float


class Style:
    pass


@dataclass(frozen=True)
class Filled(Style):
    color: Color


@dataclass(frozen=True)
class Outlined(Style):
    line: LineType
    color: Color


# --- nodes ------------------------------------------------------------------


@dataclass(frozen=True)
class Handler:
    kind: str  # tap | tapAt | enter | leave
    payload: object  # a message value, or a callable value for tapAt


class SceneNode:
    pass


@dataclass(frozen=True)
class Leaf(SceneNode):
    geometry: Geometry
    style: Style
    transform: AffineTransform = IDENTITY
    handlers: tuple[Handler, ...] = ()


@dataclass(frozen=True)
class Group(SceneNode):
    children: tuple[SceneNode, ...]
    transform: AffineTransform = IDENTITY
    handlers: tuple[Handler, ...] = ()


def with_transform(node: SceneNode, prim: AffineTransform) -> SceneNode:
    return replace(node, transform=compose(prim, node.transform))


def with_handler(node: SceneNode, handler: Handler) -> SceneNode:
    return replace(node, handlers=node.handlers + (handler,))


# --- flattening -------------------------------------------------------------

# identity of one attached handler: (owner node path, attachment index)
HandlerId = tuple[tuple[int, ...], int]


@dataclass(frozen=True)
class FlatShape:
    path: tuple[int, ...]
    transform: AffineTransform  # absolute
    geometry: Geometry
    style: Style
    # own handlers first, then inherited ones outward to the root
    handlers: tuple[tuple[HandlerId, Handler], ...]


def flatten_scene(root: SceneNode) -> list[FlatShape]:
    """Depth-first leaves in paint order with absolute transforms.

    Handlers on a group apply to every descendant leaf.
    """
    out: list[FlatShape] = []

    def walk(
        node: SceneNode,
        path: tuple[int, ...],
        outer: AffineTransform,
        inherited: tuple[tuple[HandlerId, Handler], ...],
    ) -> None:
        absolute = compose(outer, node.transform)
        own = tuple(((path, i), h) for i, h in enumerate(node.handlers))
        handlers = own + inherited
        if isinstance(node, Leaf):
            out.append(FlatShape(path, absolute, node.geometry, node.style, handlers))
        else:
            assert isinstance(node, Group)
            for i, child in enumerate(node.children):
                walk(child, path + (i,), absolute, handlers)

    walk(root, (), IDENTITY, ())
    return out


# --- analytic bounds --------------------------------------------------------


def _disk_extents(t: AffineTransform, rx: float, ry: float) -> tuple[float, float]:
    """Half-extents of an origin-centered ellipse with radii rx, ry under t."""
    hx = math.hypot(t.a * rx, t.c * ry)
    hy = math.hypot(t.b * rx, t.d * ry)
    return hx, hy


def _corner_points(geometry: Geometry) -> list[tuple[float, float]]:
    if isinstance(geometry, Square):
        h = geometry.side / 2.0
        return [(-h, -h), (h, -h), (h, h), (-h, h)]
    if isinstance(geometry, Rect):
        w, h = geometry.width / 2.0, geometry.height / 2.0
        return [(-w, -h), (w, -h), (w, h), (-w, h)]
    if isinstance(geometry, Triangle):
        return triangle_vertices(geometry.circumradius)
    if isinstance(geometry, Text):
        w = 0.3 * geometry.size * len(geometry.string)
        h = geometry.size / 2.0
        return [(-w, -h), (w, -h), (w, h), (-w, h)]
    raise AssertionError(f"no corner points for {geometry!r}")


def shape_bounds(shape: FlatShape) -> tuple[float, float, float, float]:
    """Axis-aligned bounds of one flattened shape, stroke width included."""
    t = shape.transform
    geometry = shape.geometry
    if isinstance(geometry, Circle):
        hx, hy = _disk_extents(t, geometry.radius, geometry.radius)
        box = (t.tx - hx, t.ty - hy, t.tx + hx, t.ty + hy)
    elif isinstance(geometry, Oval):
        hx, hy = _disk_extents(t, geometry.width / 2.0, geometry.height / 2.0)
        box = (t.tx - hx, t.ty - hy, t.tx + hx, t.ty + hy)
    elif isinstance(geometry, RoundedRect):
        r = min(geometry.corner, geometry.width / 2.0, geometry.height / 2.0)
        iw, ih = geometry.width / 2.0 - r, geometry.height / 2.0 - r
        pts = [
            (t.a * x + t.c * y + t.tx, t.b * x + t.d * y + t.ty)
            for x, y in [(-iw, -ih), (iw, -ih), (iw, ih), (-iw, ih)]
        ]
        hx, hy = _disk_extents(t, r, r)
        box = (
            min(p[0] for p in pts) - hx,
            min(p[1] for p in pts) - hy,
            max(p[0] for p in pts) + hx,
            max(p[1] for p in pts) + hy,
        )
    else:
        pts = [
            (t.a * x + t.c * y + t.tx, t.b * x + t.d * y + t.ty)
            for x, y in _corner_points(geometry)
        ]
        box = (
            min(p[0] for p in pts),
            min(p[1] for p in pts),
            max(p[0] for p in pts),
            max(p[1] for p in pts),
        )
    if isinstance(shape.style, Outlined):
        half = shape.style.line.width / 2.0
        px, py = _disk_extents(t, half, half)
        box = (box[0] - px, box[1] - py, box[2] + px, box[3] + py)
    return box


def scene_bounds(shapes: list[FlatShape]) -> tuple[float, float, float, float] | None:
    if not shapes:
        return None
    boxes = [shape_bounds(s) for s in shapes]
    return (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        max(b[2] for b in boxes),
        max(b[3] for b in boxes),
    )
