"""Builtin environment: every name the language provides out of the box.

The type schemes here are the contract between the checker and the
evaluator; BUILTIN_ARITY is derived from them so the two can't drift.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colors import PALETTE
from .types import (
    BOOL,
    COLOR,
    FLOAT,
    KEY_STATE,
    LINE_TYPE,
    STENCIL,
    STRING,
    CollageT,
    FuncT,
    ListT,
    ShapeT,
    Tuple2T,
    Type,
    VarT,
    fresh_var,
    func,
)

# the one polymorphic placeholder: the message type of Shape/Collage
MU = VarT(-1)


@dataclass(frozen=True)
class Scheme:
    vars: tuple[int, ...]
    type: Type


def _mono(t: Type) -> Scheme:
    return Scheme((), t)


def _poly(t: Type) -> Scheme:
    return Scheme((-1,), t)


_SHAPE = ShapeT(MU)
_PAIR = Tuple2T(FLOAT, FLOAT)

BUILTIN_SCHEMES: dict[str, Scheme] = {
    # stencils
    "circle": _mono(func(FLOAT, STENCIL)),
    "square": _mono(func(FLOAT, STENCIL)),
    "triangle": _mono(func(FLOAT, STENCIL)),
    "rect": _mono(func(FLOAT, FLOAT, STENCIL)),
    "oval": _mono(func(FLOAT, FLOAT, STENCIL)),
    "roundedRect": _mono(func(FLOAT, FLOAT, FLOAT, STENCIL)),
    "text": _mono(func(STRING, STENCIL)),
    "size": _mono(func(FLOAT, STENCIL, STENCIL)),
    # styling
    "filled": _poly(func(COLOR, STENCIL, _SHAPE)),
    "outlined": _poly(func(LINE_TYPE, STENCIL, _SHAPE)),
    "solid": _mono(func(FLOAT, LINE_TYPE)),
    "dotted": _mono(func(FLOAT, LINE_TYPE)),
    "dashed": _mono(func(FLOAT, LINE_TYPE)),
    "rgb": _mono(func(FLOAT, FLOAT, FLOAT, COLOR)),
    # transformers
    "move": _poly(func(_PAIR, _SHAPE, _SHAPE)),
    "scale": _poly(func(FLOAT, _SHAPE, _SHAPE)),
    "rotate": _poly(func(FLOAT, _SHAPE, _SHAPE)),
    # grouping and the drawing surface
    "group": _poly(func(ListT(_SHAPE), _SHAPE)),
    "collage": _poly(func(FLOAT, FLOAT, ListT(_SHAPE), CollageT(MU))),
    # notifications
    "notifyTap": _poly(func(MU, _SHAPE, _SHAPE)),
    "notifyEnter": _poly(func(MU, _SHAPE, _SHAPE)),
    "notifyLeave": _poly(func(MU, _SHAPE, _SHAPE)),
    "notifyTapAt": _poly(func(FuncT((_PAIR,), MU), _SHAPE, _SHAPE)),
    # numbers
    "sin": _mono(func(FLOAT, FLOAT)),
    "cos": _mono(func(FLOAT, FLOAT)),
    "degrees": _mono(func(FLOAT, FLOAT)),
    "pi": _mono(FLOAT),
    # keyboard
    "keyDown": _mono(func(STRING, KEY_STATE, BOOL)),
}

for _name in PALETTE:
    BUILTIN_SCHEMES[_name] = _mono(COLOR)

BUILTIN_NAMES = frozenset(BUILTIN_SCHEMES)

# names bound to plain values rather than functions
BUILTIN_CONSTANTS = frozenset(
    name for name, s in BUILTIN_SCHEMES.items() if not isinstance(s.type, FuncT)
)

BUILTIN_ARITY: dict[str, int] = {
    name: len(s.type.params)
    for name, s in BUILTIN_SCHEMES.items()
    if isinstance(s.type, FuncT)
}

STENCIL_MAKERS = frozenset(
    {"circle", "square", "triangle", "rect", "oval", "roundedRect"}
)


def instantiate(s: Scheme) -> Type:
    if not s.vars:
        return s.type
    mapping = {var_id: fresh_var() for var_id in s.vars}
    return _subst_vars(s.type, mapping)


def _subst_vars(t: Type, mapping: dict[int, Type]) -> Type:
    if isinstance(t, VarT):
        return mapping.get(t.id, t)
    if isinstance(t, ShapeT):
        return ShapeT(_subst_vars(t.msg, mapping))
    if isinstance(t, CollageT):
        return CollageT(_subst_vars(t.msg, mapping))
    if isinstance(t, ListT):
        return ListT(_subst_vars(t.item, mapping))
    if isinstance(t, Tuple2T):
        return Tuple2T(_subst_vars(t.first, mapping), _subst_vars(t.second, mapping))
    if isinstance(t, FuncT):
        return FuncT(
            tuple(_subst_vars(p, mapping) for p in t.params),
            _subst_vars(t.result, mapping),
        )
    return t
