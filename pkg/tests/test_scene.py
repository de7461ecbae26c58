import numpy as np

from shapelab.colors import Color
from shapelab.scene import (
    Circle,
    Filled,
    Group,
    Handler,
    Leaf,
    LineType,
    Outlined,
    Oval,
    Rect,
    RoundedRect,
    Square,
    Text,
    Triangle,
    FlatShape,
    flatten_scene,
    scene_bounds,
    shape_bounds,
    with_handler,
    with_transform,
)
from shapelab.transform import AffineTransform, compose, rotation, scaling, translation
from oracles import transformed_polygon

RED = Filled(Color(255, 0, 0))
PEN = Outlined(LineType("solid", 4.0), Color(0, 0, 0))


def leaf(geom, style=RED) -> Leaf:
    return Leaf(geom, style)


# --- transformer composition ----------------------------------------------------


def test_with_transform_applies_outside_existing_transform():
    node = leaf(Circle(5))
    moved = with_transform(node, translation(3, 0))
    spun = with_transform(moved, rotation(np.pi / 2))
    t = spun.transform
    # the translation happened first, so the offset is rotated
    assert abs(t.tx) < 1e-12
    assert abs(t.ty - 3) < 1e-12


def test_transformed_nodes_share_no_state():
    node = leaf(Square(4))
    a = with_transform(node, translation(1, 0))
    b = with_transform(node, translation(2, 0))
    assert node.transform.tx == 0
    assert (a.transform.tx, b.transform.tx) == (1, 2)


def test_with_handler_appends():
    node = leaf(Circle(1))
    node = with_handler(node, Handler("tap", "A"))
    node = with_handler(node, Handler("enter", "B"))
    assert [h.kind for h in node.handlers] == ["tap", "enter"]


# --- flattening -------------------------------------------------------------------


def scene() -> Group:
    inner = Group(
        (leaf(Circle(5)), with_transform(leaf(Square(4)), translation(1, 1))),
        transform=scaling(2),
        handlers=(Handler("enter", "inner"),),
    )
    return Group(
        (leaf(Rect(10, 2)), inner),
        transform=translation(100, 0),
        handlers=(Handler("tap", "outer"),),
    )


def test_flatten_preserves_paint_order():
    flats = flatten_scene(scene())
    assert [type(f.geometry).__name__ for f in flats] == ["Rect", "Circle", "Square"]
    assert [f.path for f in flats] == [(0,), (1, 0), (1, 1)]


def test_flatten_accumulates_absolute_transforms():
    flats = flatten_scene(scene())
    square = flats[2]
    want = compose(compose(translation(100, 0), scaling(2)), translation(1, 1))
    assert square.transform == want


def test_handlers_inherit_own_first_then_outward():
    flats = flatten_scene(scene())
    circle = flats[1]
    assert [h.payload for _, h in circle.handlers] == ["inner", "outer"]
    rect = flats[0]
    assert [h.payload for _, h in rect.handlers] == ["outer"]


def test_handler_identity_is_path_plus_slot():
    node = leaf(Circle(1))
    node = with_handler(node, Handler("enter", "x"))
    node = with_handler(node, Handler("leave", "y"))
    root = Group((node, node))
    flats = flatten_scene(root)
    first, second = flats
    assert [hid for hid, _ in first.handlers] == [((0,), 0), ((0,), 1)]
    assert [hid for hid, _ in second.handlers] == [((1,), 0), ((1,), 1)]


def test_shared_subtrees_flatten_independently():
    shared = with_transform(leaf(Circle(3)), translation(5, 0))
    root = Group((shared, with_transform(shared, translation(0, 7))))
    a, b = flatten_scene(root)
    assert (a.transform.tx, a.transform.ty) == (5, 0)
    assert (b.transform.tx, b.transform.ty) == (5, 7)


# --- bounds against dense polygons ------------------------------------------------


GEOMETRIES = [
    Circle(7),
    Square(6),
    Rect(10, 4),
    Oval(12, 5),
    Triangle(8),
    RoundedRect(10, 8, 3),
    Text("hello", 12.0),
]


def random_transform(rng) -> AffineTransform:
    while True:
        a, b, c, d = rng.uniform(-3, 3, 4)
        if abs(a * d - b * c) > 1e-2:
            break
    tx, ty = rng.uniform(-40, 40, 2)
    return AffineTransform(a, b, c, d, tx, ty)


def test_filled_bounds_match_polygon_bounds():
    rng = np.random.default_rng(42)
    for geom in GEOMETRIES:
        for _ in range(40):
            t = random_transform(rng)
            flat = FlatShape((), t, geom, RED, ())
            got = shape_bounds(flat)
            want = transformed_polygon(geom, t).bounds
            for g, w in zip(got, want):
                # dense polygons inscribe curves, so they may be slightly inside
                assert abs(g - w) < 0.05, (geom, t)
            eps = 1e-9
            assert got[0] <= want[0] + eps and got[1] <= want[1] + eps
            assert got[2] >= want[2] - eps and got[3] >= want[3] - eps


def test_outlined_bounds_include_the_stroke():
    flat = FlatShape((), AffineTransform(), Square(10), PEN, ())
    assert shape_bounds(flat) == (-7, -7, 7, 7)


def test_scene_bounds_union_all_leaves():
    flats = [
        FlatShape((), translation(-10, 0), Circle(2), RED, ()),
        FlatShape((), translation(10, 5), Circle(2), RED, ()),
    ]
    assert scene_bounds(flats) == (-12, -2, 12, 7)


def test_scene_bounds_of_nothing_is_none():
    assert scene_bounds([]) is None
