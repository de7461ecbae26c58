import math

import pytest

from shapelab.errors import (
    BudgetExceeded,
    CyclicDefinition,
    DivideByZero,
    EvalError,
    RecursionLimit,
)
from shapelab.evaluator import DEPTH_LIMIT, Evaluator
from shapelab.scene import Circle, Filled, Group, Leaf, Outlined, Rect, Text
from shapelab.values import (
    VBool,
    VBuiltin,
    VCollage,
    VColor,
    VConstructor,
    VConstructorFn,
    VKeyState,
    VNumber,
    VShape,
    VStencil,
    VTuple,
    dump_value,
)
from conftest import compile_ok

MAIN = "\n\nmain = graphicsApp { view = collage 10 10 [] }\n"


def evaluator_for(defs: str) -> Evaluator:
    return Evaluator(compile_ok(defs + MAIN).typed)


def eval_name(defs: str, name: str = "it", **budget):
    ev = evaluator_for(defs)
    return ev.run_budgeted(lambda: ev.global_value(name, (0, 0)), **budget)


def num(defs: str, name: str = "it") -> float:
    v = eval_name(defs, name)
    assert isinstance(v, VNumber)
    return v.value


# --- arithmetic and control ----------------------------------------------------


def test_arithmetic_follows_precedence():
    assert num("it = 2 + 3 * 4 - 6 / 3") == 12.0


def test_unary_minus():
    assert num("it = -(2 + 3) * 2") == -10.0


def test_comparisons_yield_bools():
    v = eval_name("it = 2 + 2 == 4")
    assert v == VBool(True)
    assert eval_name("it = 3 < 2") == VBool(False)
    assert eval_name("it = 3 >= 3") == VBool(True)


def test_if_picks_a_branch_lazily():
    # the untaken branch would divide by zero if evaluated
    assert num("it = if True then 1 else 1 / 0") == 1.0


def test_case_dispatch_and_binders():
    src = (
        "type Shape2 = One Float | Two Float Float\n\n"
        "area v = case v of\n"
        "  One r -> r * r\n"
        "  Two w h -> w * h\n\n"
        "it = area (Two 3 4) + area (One 2)"
    )
    assert num(src) == 16.0


def test_divide_by_zero_reports_the_operator_position():
    with pytest.raises(DivideByZero) as info:
        eval_name("it = 1 / 0")
    assert info.value.message == "Cannot divide by zero."
    assert (info.value.line, info.value.column) == (1, 8)


def test_trig_builtins():
    assert num("it = sin 0") == 0.0
    assert abs(num("it = cos pi") + 1.0) < 1e-12
    assert abs(num("it = degrees 180") - math.pi) < 1e-12


def test_key_down_consults_the_key_state():
    ev = evaluator_for('f keys = keyDown "ArrowLeft" keys')
    f = ev.run_budgeted(lambda: ev.global_value("f", (0, 0)))
    down = ev.run_budgeted(lambda: ev.apply(f, [VKeyState(frozenset({"ArrowLeft"}))], (0, 0)))
    up = ev.run_budgeted(lambda: ev.apply(f, [VKeyState(frozenset())], (0, 0)))
    assert down == VBool(True)
    assert up == VBool(False)


# --- globals: laziness, caching, cycles -----------------------------------------


def test_unused_broken_definition_never_runs():
    assert num("boom = 1 / 0\n\nit = 7") == 7.0


def test_globals_are_cached():
    ev = evaluator_for("m = { x = 1 }")
    a = ev.run_budgeted(lambda: ev.global_value("m", (0, 0)))
    b = ev.run_budgeted(lambda: ev.global_value("m", (0, 0)))
    assert a is b


def test_cyclic_zero_parameter_definitions_are_caught():
    with pytest.raises(CyclicDefinition) as info:
        eval_name("a = b\n\nb = a", "a")
    assert "depends on itself" in info.value.message


def test_self_referential_constant_is_caught():
    with pytest.raises(CyclicDefinition):
        eval_name("a = a + 1", "a")


# --- functions -------------------------------------------------------------------


def test_user_function_application():
    assert num("add a b = a + b\n\nit = add 2 40") == 42.0


def test_partial_application_of_user_functions():
    src = "add a b = a + b\n\nplus2 = add 2\n\nit = plus2 40"
    assert num(src) == 42.0


def test_partial_application_of_builtins():
    ev = evaluator_for("half = rect 10")
    partial = ev.run_budgeted(lambda: ev.global_value("half", (0, 0)))
    assert isinstance(partial, VBuiltin)
    full = ev.run_budgeted(lambda: ev.apply(partial, [VNumber(20)], (0, 0)))
    assert full == VStencil(Rect(10, 20))


def test_constructors_apply_like_functions():
    src = "type T = Pair Float Float\n\nhalf = Pair 1\n\nit = half 2"
    ev = evaluator_for(src)
    half = ev.run_budgeted(lambda: ev.global_value("half", (0, 0)))
    assert isinstance(half, VConstructorFn)
    it = ev.run_budgeted(lambda: ev.global_value("it", (0, 0)))
    assert it == VConstructor("Pair", (VNumber(1), VNumber(2)))


def test_over_application_through_a_returned_function():
    # f returns a function; the extra argument lands on it
    src = "add a b = a + b\n\ngive = add\n\nit = give 1 2"
    assert num(src) == 3.0


# --- recursion depth ----------------------------------------------------------------


def test_tail_recursion_within_the_frame_limit():
    src = "spin n = if n <= 0 then 0 else spin (n - 1)\n\nit = spin 9000"
    assert num(src) == 0.0


def test_tail_frames_count_toward_the_limit():
    src = f"spin n = if n <= 0 then 0 else spin (n - 1)\n\nit = spin {DEPTH_LIMIT * 2}"
    with pytest.raises(RecursionLimit) as info:
        eval_name(src)
    assert "10000" in info.value.message


def test_non_tail_recursion_within_the_frame_limit():
    src = "deep n = if n <= 0 then 0 else deep (n - 1) + 1\n\nit = deep 9000"
    assert num(src) == 9000.0


def test_non_tail_recursion_beyond_the_limit():
    src = f"deep n = if n <= 0 then 0 else deep (n - 1) + 1\n\nit = deep {DEPTH_LIMIT * 2}"
    with pytest.raises(RecursionLimit):
        eval_name(src)


def test_depth_resets_between_runs():
    ev = evaluator_for(
        "spin n = if n <= 0 then 0 else spin (n - 1)\n\n"
        f"boom = spin {DEPTH_LIMIT * 2}\n\n"
        "ok = spin 9000"
    )
    with pytest.raises(RecursionLimit):
        ev.run_budgeted(lambda: ev.global_value("boom", (0, 0)))
    v = ev.run_budgeted(lambda: ev.global_value("ok", (0, 0)))
    assert v == VNumber(0)


# --- budgets ---------------------------------------------------------------------


def test_cpu_budget_stops_runaway_evaluation():
    src = "f n = if n <= 0 then 0 else f (n - 1) + f (n - 1)\n\nit = f 60"
    with pytest.raises(BudgetExceeded) as info:
        eval_name(src, cpu_seconds=0.1)
    assert info.value.message == "This program is too slow."


def test_alloc_budget_stops_runaway_building():
    src = (
        "go n m = if n <= 0 then m else go (n - 1) { m | x = m.x + 1 }\n\n"
        "it = go 2000 { x = 0 }"
    )
    with pytest.raises(BudgetExceeded) as info:
        eval_name(src, alloc_bytes=50_000)
    assert info.value.message == "This program is too large."


def test_budget_applies_per_run():
    ev = evaluator_for("go n = if n <= 0 then 0 else go (n - 1)\n\nit = go 5000")
    for _ in range(3):
        ev._globals.clear()
        v = ev.run_budgeted(lambda: ev.global_value("it", (0, 0)), cpu_seconds=5.0)
        assert v == VNumber(0)


# --- shape builtins -----------------------------------------------------------------


def test_negative_dimensions_clamp_to_zero():
    v = eval_name("it = circle (-5)")
    assert v == VStencil(Circle(0.0))


def test_filled_builds_a_leaf():
    v = eval_name("it = circle 5 |> filled green")
    assert isinstance(v, VShape)
    leaf = v.node
    assert isinstance(leaf, Leaf)
    assert isinstance(leaf.style, Filled)
    assert leaf.style.color.hex() == "#008000"


def test_outlined_strokes_black_with_the_line_type():
    v = eval_name("it = square 10 |> outlined (dashed 2)")
    style = v.node.style
    assert isinstance(style, Outlined)
    assert style.line.pattern == "dashed"
    assert style.line.width == 2.0
    assert style.color.hex() == "#000000"


def test_hairline_widths_clamp():
    v = eval_name("it = square 10 |> outlined (solid 0)")
    assert v.node.style.line.width == 1e-3


def test_rgb_clamps_and_rounds():
    v = eval_name("it = rgb 300 (-5) 12.6")
    assert isinstance(v, VColor)
    c = v.color
    assert (c.red, c.green, c.blue) == (255, 0, 13)


def test_text_defaults_to_size_12_and_size_rewrites_it():
    v = eval_name('it = text "hi"')
    assert v == VStencil(Text("hi", 12.0))
    v = eval_name('it = text "hi" |> size 24')
    assert v == VStencil(Text("hi", 24.0))


def test_size_leaves_other_stencils_alone():
    v = eval_name("it = circle 5 |> size 24")
    assert v == VStencil(Circle(5.0))


def test_move_then_scale_compose_in_order():
    v = eval_name("it = circle 5 |> filled red |> move (3, 4) |> scale 2")
    t = v.node.transform
    assert (t.a, t.d) == (2.0, 2.0)
    assert (t.tx, t.ty) == (6.0, 8.0)


def test_rotate_is_counterclockwise_radians():
    v = eval_name("it = rect 10 4 |> filled red |> rotate (pi / 2)")
    t = v.node.transform
    assert abs(t.a) < 1e-12 and abs(t.b - 1) < 1e-12


def test_group_nests_shapes():
    v = eval_name("it = group [ circle 1 |> filled red, square 2 |> filled blue ]")
    node = v.node
    assert isinstance(node, Group)
    assert len(node.children) == 2


def test_collage_wraps_a_group():
    v = eval_name("it = collage 320 200 [ circle 1 |> filled red ]")
    assert isinstance(v, VCollage)
    assert (v.width, v.height) == (320.0, 200.0)
    assert isinstance(v.root, Group)


def test_notify_attaches_handlers_in_order():
    src = (
        "type Msg = A | B\n\n"
        "it = circle 5 |> filled red |> notifyTap A |> notifyTap B"
    )
    v = eval_name(src)
    assert [h.kind for h in v.node.handlers] == ["tap", "tap"]
    assert [h.payload.name for h in v.node.handlers] == ["A", "B"]


def test_tap_at_payload_is_a_function():
    src = "type Msg = At (Float, Float)\n\nit = square 4 |> filled red |> notifyTapAt At"
    v = eval_name(src)
    (handler,) = v.node.handlers
    assert handler.kind == "tapAt"
    ev = evaluator_for(src)
    got = ev.run_budgeted(
        lambda: ev.apply(
            ev.global_value("it", (0, 0)).node.handlers[0].payload,
            [VTuple((VNumber(3), VNumber(-4)))],
            (0, 0),
        )
    )
    assert got == VConstructor("At", (VTuple((VNumber(3), VNumber(-4))),))


# --- value serialization -------------------------------------------------------------


def test_dump_value_is_canonical_for_records():
    a = eval_name("it = { b = 1, a = 2 }")
    b = eval_name("it = { a = 2, b = 1 }")
    assert dump_value(a) == dump_value(b)


def test_dump_value_handles_every_shape_of_data():
    src = (
        "type Msg = At (Float, Float) | Go\n\n"
        'it = { n = 1.5, s = "hey", flag = True, pair = (1, 2), xs = [1, 2], msg = At (3, 4) }'
    )
    text = dump_value(eval_name(src))
    for fragment in ('"n":1.5', '"s":"hey"', '"flag":true', '"ctor":"At"'):
        assert fragment in text


def test_application_error_carries_the_call_position():
    with pytest.raises(EvalError) as info:
        eval_name("f x = x / 0\n\nit = f 3")
    assert info.value.line == 1
