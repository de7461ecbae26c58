"""Type representations for the checker.

Types are plain immutable dataclasses compared by value. Display is
aimed at beginners: type variables print as "anything", never as
internal ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class Type:
    pass


@dataclass(frozen=True)
class PrimType(Type):
    name: str  # Float, String, Bool, Color, LineType, Stencil, KeyState, NoMsg


FLOAT = PrimType("Float")
STRING = PrimType("String")
BOOL = PrimType("Bool")
COLOR = PrimType("Color")
LINE_TYPE = PrimType("LineType")
STENCIL = PrimType("Stencil")
KEY_STATE = PrimType("KeyState")
NO_MSG = PrimType("NoMsg")


@dataclass(frozen=True)
class ShapeT(Type):
    msg: Type


@dataclass(frozen=True)
class CollageT(Type):
    msg: Type


@dataclass(frozen=True)
class ListT(Type):
    item: Type


@dataclass(frozen=True)
class Tuple2T(Type):
    first: Type
    second: Type


@dataclass(frozen=True)
class RecordT(Type):
    # Stored as a sorted tuple of (name, type) pairs so the type hashes.
    fields: tuple[tuple[str, Type], ...]

    @staticmethod
    def of(mapping: dict[str, Type]) -> "RecordT":
        return RecordT(tuple(sorted(mapping.items())))

    def as_dict(self) -> dict[str, Type]:
        return dict(self.fields)


@dataclass(frozen=True)
class FuncT(Type):
    params: tuple[Type, ...]
    result: Type


@dataclass(frozen=True)
class UnionT(Type):
    name: str


_next_var = 0


@dataclass(frozen=True)
class VarT(Type):
    id: int


def fresh_var() -> VarT:
    global _next_var
    _next_var += 1
    return VarT(_next_var)


def func(*types: Type) -> FuncT:
    """func(a, b, r) builds a -> b -> r as FuncT((a, b), r)."""
    if len(types) < 2:
        raise ValueError("func needs at least one parameter and a result")
    return FuncT(tuple(types[:-1]), types[-1])


def show_type(t: Type) -> str:
    """Render for diagnostics. Parenthesizes function arguments."""
    if isinstance(t, PrimType):
        return t.name
    if isinstance(t, VarT):
        return "anything"
    if isinstance(t, UnionT):
        return t.name
    if isinstance(t, ShapeT):
        return f"Shape {_show_atom(t.msg)}"
    if isinstance(t, CollageT):
        return f"Collage {_show_atom(t.msg)}"
    if isinstance(t, ListT):
        return f"List {_show_atom(t.item)}"
    if isinstance(t, Tuple2T):
        return f"({show_type(t.first)}, {show_type(t.second)})"
    if isinstance(t, RecordT):
        inner = ", ".join(f"{k} : {show_type(v)}" for k, v in t.fields)
        return "{ " + inner + " }" if inner else "{}"
    if isinstance(t, FuncT):
        parts = [_show_func_arg(p) for p in t.params] + [show_type(t.result)]
        return " -> ".join(parts)
    raise AssertionError(f"unhandled type {t!r}")


def _show_atom(t: Type) -> str:
    s = show_type(t)
    if isinstance(t, (ShapeT, CollageT, ListT, FuncT)):
        return f"({s})"
    return s


def _show_func_arg(t: Type) -> str:
    s = show_type(t)
    if isinstance(t, FuncT):
        return f"({s})"
    return s
