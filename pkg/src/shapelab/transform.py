"""2D affine transforms.

A transform (a, b, c, d, tx, ty) maps (x, y) to
(a*x + c*y + tx, b*x + d*y + ty), the same layout as an SVG
matrix(a, b, c, d, tx, ty) attribute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Singular

SINGULAR_EPS = 1e-12


@dataclass(frozen=True)
class AffineTransform:
    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    tx: float = 0.0
    ty: float = 0.0

    def det(self) -> float:
        return self.a * self.d - self.b * self.c


IDENTITY = AffineTransform()


def translation(dx: float, dy: float) -> AffineTransform:
    return AffineTransform(1.0, 0.0, 0.0, 1.0, dx, dy)


def scaling(sx: float, sy: float | None = None) -> AffineTransform:
    if sy is None:
        sy = sx
    return AffineTransform(sx, 0.0, 0.0, sy, 0.0, 0.0)


def rotation(angle: float) -> AffineTransform:
    co = math.cos(angle)
    si = math.sin(angle)
    return AffineTransform(co, si, -si, co, 0.0, 0.0)


def compose(outer: AffineTransform, inner: AffineTransform) -> AffineTransform:
    """outer after inner: apply(compose(o, i), p) == apply(o, apply(i, p))."""
    return AffineTransform(
        outer.a * inner.a + outer.c * inner.b,
        outer.b * inner.a + outer.d * inner.b,
        outer.a * inner.c + outer.c * inner.d,
        outer.b * inner.c + outer.d * inner.d,
        outer.a * inner.tx + outer.c * inner.ty + outer.tx,
        outer.b * inner.tx + outer.d * inner.ty + outer.ty,
    )


def invert(t: AffineTransform) -> AffineTransform:
    det = t.det()
    if abs(det) < SINGULAR_EPS:
        raise Singular(f"transform determinant {det} is too close to zero")
    return AffineTransform(
        t.d / det,
        -t.b / det,
        -t.c / det,
        t.a / det,
        (t.c * t.ty - t.d * t.tx) / det,
        (t.b * t.tx - t.a * t.ty) / det,
    )


def apply_point(t: AffineTransform, p: tuple[float, float]) -> tuple[float, float]:
    x, y = p
    return (t.a * x + t.c * y + t.tx, t.b * x + t.d * y + t.ty)
