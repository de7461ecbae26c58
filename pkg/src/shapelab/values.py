"""Runtime values, canonical serialization, and display rendering.

value_to_json is the wire form used by the HTTP service's modelDump;
serialize_collage is the golden-test scene form. Both are canonical:
equal values always serialize to equal bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .colors import Color
from .fmt import fmt
from .scene import (
    Circle,
    Filled,
    FlatShape,
    Geometry,
    Group,
    Leaf,
    LineType,
    Outlined,
    Oval,
    Rect,
    RoundedRect,
    SceneNode,
    Square,
    Style,
    Text,
    Triangle,
)
from .transform import AffineTransform


class Value:
    pass


@dataclass
class VNumber(Value):
    value: float


@dataclass
class VString(Value):
    value: str


@dataclass
class VBool(Value):
    value: bool


@dataclass
class VTuple(Value):
    items: tuple[Value, ...]


@dataclass
class VList(Value):
    items: tuple[Value, ...]


@dataclass
class VRecord(Value):
    fields: dict[str, Value]


@dataclass
class VColor(Value):
    color: Color


@dataclass
class VLineType(Value):
    line: LineType


@dataclass
class VStencil(Value):
    geometry: Geometry


@dataclass
class VShape(Value):
    node: SceneNode


@dataclass
class VCollage(Value):
    width: float
    height: float
    root: SceneNode


@dataclass
class VConstructor(Value):
    name: str
    args: tuple[Value, ...]


@dataclass
class VConstructorFn(Value):
    """A declared constructor still waiting for arguments."""

    name: str
    arity: int
    args: tuple[Value, ...]


@dataclass
class VClosure(Value):
    params: tuple[str, ...]
    body: object  # Expr
    env: object  # Environment; closures never mutate it
    bound: tuple[Value, ...] = ()
    name: str = ""


@dataclass
class VBuiltin(Value):
    name: str
    args: tuple[Value, ...]


@dataclass
class VKeyState(Value):
    keys: frozenset[str]


# --- canonical JSON ---------------------------------------------------------


def value_to_json(v: Value) -> object:
    if isinstance(v, VNumber):
        return v.value
    if isinstance(v, VString):
        return v.value
    if isinstance(v, VBool):
        return v.value
    if isinstance(v, VTuple):
        return {"tuple": [value_to_json(x) for x in v.items]}
    if isinstance(v, VList):
        return [value_to_json(x) for x in v.items]
    if isinstance(v, VRecord):
        return {"record": {k: value_to_json(v.fields[k]) for k in sorted(v.fields)}}
    if isinstance(v, VColor):
        c = v.color
        return {"color": [c.red, c.green, c.blue, c.alpha]}
    if isinstance(v, VLineType):
        return {"lineType": [v.line.pattern, v.line.width]}
    if isinstance(v, VStencil):
        return {"stencil": _geometry_text(v.geometry)}
    if isinstance(v, VShape):
        return {"shape": serialize_node(v.node)}
    if isinstance(v, VCollage):
        return {"collage": serialize_collage(v)}
    if isinstance(v, VConstructor):
        return {"ctor": v.name, "args": [value_to_json(a) for a in v.args]}
    if isinstance(v, VKeyState):
        return {"keys": sorted(v.keys)}
    if isinstance(v, VConstructorFn):
        return {"function": v.name}
    if isinstance(v, VClosure):
        return {"function": v.name or "<function>"}
    if isinstance(v, VBuiltin):
        return {"function": v.name}
    raise AssertionError(f"unhandled value {v!r}")


def dump_value(v: Value) -> str:
    return json.dumps(value_to_json(v), sort_keys=True, separators=(",", ":"))


# --- display (fired messages, handler payloads) -----------------------------


def display_value(v: Value) -> str:
    return _display(v, atom=False)


def _display(v: Value, atom: bool) -> str:
    if isinstance(v, VNumber):
        text = fmt(v.value)
        return f"({text})" if atom and text.startswith("-") else text
    if isinstance(v, VString):
        return json.dumps(v.value)
    if isinstance(v, VBool):
        return "True" if v.value else "False"
    if isinstance(v, VTuple):
        return "(" + ", ".join(_display(x, False) for x in v.items) + ")"
    if isinstance(v, VList):
        return "[" + ", ".join(_display(x, False) for x in v.items) + "]"
    if isinstance(v, VRecord):
        if not v.fields:
            return "{}"
        inner = ", ".join(f"{k} = {_display(v.fields[k], False)}" for k in sorted(v.fields))
        return "{ " + inner + " }"
    if isinstance(v, VColor):
        return v.color.hex()
    if isinstance(v, VLineType):
        return f"{v.line.pattern} {fmt(v.line.width)}"
    if isinstance(v, VStencil):
        return _geometry_text(v.geometry)
    if isinstance(v, VShape):
        return "<shape>"
    if isinstance(v, VCollage):
        return "<collage>"
    if isinstance(v, VConstructor):
        if not v.args:
            return v.name
        text = v.name + " " + " ".join(_display(a, True) for a in v.args)
        return f"({text})" if atom else text
    if isinstance(v, VKeyState):
        return "keys [" + ", ".join(sorted(v.keys)) + "]"
    if isinstance(v, (VConstructorFn, VClosure, VBuiltin)):
        return "<function>"
    raise AssertionError(f"unhandled value {v!r}")


# --- canonical scene text ---------------------------------------------------


def _matrix_text(t: AffineTransform) -> str:
    return f"matrix({fmt(t.a)} {fmt(t.b)} {fmt(t.c)} {fmt(t.d)} {fmt(t.tx)} {fmt(t.ty)})"


def _geometry_text(g: Geometry) -> str:
    if isinstance(g, Circle):
        return f"circle {fmt(g.radius)}"
    if isinstance(g, Square):
        return f"square {fmt(g.side)}"
    if isinstance(g, Triangle):
        return f"triangle {fmt(g.circumradius)}"
    if isinstance(g, Rect):
        return f"rect {fmt(g.width)} {fmt(g.height)}"
    if isinstance(g, Oval):
        return f"oval {fmt(g.width)} {fmt(g.height)}"
    if isinstance(g, RoundedRect):
        return f"roundedRect {fmt(g.width)} {fmt(g.height)} {fmt(g.corner)}"
    if isinstance(g, Text):
        return f"text {json.dumps(g.string)} {fmt(g.size)}"
    raise AssertionError(f"unhandled geometry {g!r}")


def _style_text(s: Style) -> str:
    if isinstance(s, Filled):
        base = f"filled {s.color.hex()}"
        if s.color.alpha != 1.0:
            base += f" a={fmt(s.color.alpha)}"
        return base
    assert isinstance(s, Outlined)
    return f"outlined {s.line.pattern} {fmt(s.line.width)} {s.color.hex()}"


def _handlers_text(node: SceneNode) -> str:
    if not node.handlers:
        return ""
    inner = ", ".join(f"{h.kind} {display_value(h.payload)}" for h in node.handlers)
    return f" notify[{inner}]"


def serialize_node(node: SceneNode, depth: int = 0) -> str:
    pad = "  " * depth
    if isinstance(node, Leaf):
        return (
            pad
            + f"leaf {_geometry_text(node.geometry)} {_style_text(node.style)} "
            + _matrix_text(node.transform)
            + _handlers_text(node)
        )
    assert isinstance(node, Group)
    head = pad + f"group {_matrix_text(node.transform)}" + _handlers_text(node)
    lines = [head] + [serialize_node(c, depth + 1) for c in node.children]
    return "\n".join(lines)


def serialize_collage(c: VCollage) -> str:
    return f"collage {fmt(c.width)} {fmt(c.height)}\n" + serialize_node(c.root, 1)


def flat_summary(shapes: list[FlatShape]) -> list[str]:
    """One-line-per-leaf digest used by structural tests."""
    out = []
    for s in shapes:
        out.append(
            f"{'.'.join(map(str, s.path)) or 'root'} "
            f"{_geometry_text(s.geometry)} {_style_text(s.style)} {_matrix_text(s.transform)}"
        )
    return out
