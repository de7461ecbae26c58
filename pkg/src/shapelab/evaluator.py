"""Expression evaluation over checked programs.

Globals evaluate lazily so definition order never matters; a zero-argument
definition that reaches itself while being forced reports a cycle. Calls in
tail position reuse the current interpreter frame, so the user-call depth
counter tracks language frames, not Python frames.
"""

from __future__ import annotations

import math
import sys
import threading
import time

from .ast import (
    App,
    BinOp,
    BoolLit,
    Case,
    Definition,
    Expr,
    FieldAccess,
    GraphicsApp,
    If,
    ListLit,
    Negate,
    NumberLit,
    Program,
    RecordLit,
    RecordUpdate,
    StringLit,
    TupleLit,
    Var,
)
from .colors import PALETTE, Color
from .errors import (
    BudgetExceeded,
    CyclicDefinition,
    DivideByZero,
    EvalError,
    RecursionLimit,
)
from .prelude import BUILTIN_ARITY
from .scene import (
    Filled,
    Group,
    Handler,
    Leaf,
    LineType,
    Oval,
    Rect,
    RoundedRect,
    Circle,
    Square,
    Text,
    Triangle,
    Outlined,
    with_handler,
    with_transform,
)
from .transform import rotation, scaling, translation
from .typecheck import TypedProgram
from .values import (
    VBool,
    VBuiltin,
    VClosure,
    VCollage,
    VColor,
    VConstructor,
    VConstructorFn,
    VKeyState,
    VLineType,
    VList,
    VNumber,
    VRecord,
    VShape,
    VStencil,
    VString,
    VTuple,
    Value,
)

DEPTH_LIMIT = 10_000

DEFAULT_CPU_SECONDS = 5.0
DEFAULT_ALLOC_BYTES = 64 * 1024 * 1024

_MIN_LINE_WIDTH = 1e-3

_BLACK = Color(0, 0, 0)


class EvalBudget:
    """Per-request ceilings on CPU time and estimated value allocation."""

    __slots__ = ("deadline", "alloc_limit", "allocated", "_ticks")

    def __init__(self, cpu_seconds: float, alloc_bytes: int):
        self.deadline = time.thread_time() + cpu_seconds
        self.alloc_limit = alloc_bytes
        self.allocated = 0
        self._ticks = 0

    def step(self) -> None:
        self._ticks += 1
        if self._ticks & 1023 == 0 and time.thread_time() > self.deadline:
            raise BudgetExceeded("slow")

    def charge(self, nbytes: int) -> None:
        self.allocated += nbytes
        if self.allocated > self.alloc_limit:
            raise BudgetExceeded("large")


class Env:
    __slots__ = ("frame", "parent")

    def __init__(self, frame: dict[str, Value], parent: "Env | None" = None):
        self.frame = frame
        self.parent = parent

    def lookup(self, name: str) -> Value | None:
        env: Env | None = self
        while env is not None:
            v = env.frame.get(name)
            if v is not None:
                return v
            env = env.parent
        return None


def _builtin_constants() -> dict[str, Value]:
    out: dict[str, Value] = {"pi": VNumber(math.pi)}
    for name, (r, g, b) in PALETTE.items():
        out[name] = VColor(Color(r, g, b))
    return out


_CONSTANTS = _builtin_constants()


class Evaluator:
    def __init__(self, typed: TypedProgram):
        self.typed = typed
        self.program: Program = typed.program
        self.defs: dict[str, Definition] = {d.name: d for d in self.program.definitions}
        self.ctor_arity = typed.ctor_arity
        self._globals: dict[str, Value] = {}
        self._forcing: set[str] = set()
        self.depth = 0
        self.budget: EvalBudget | None = None

    # --- entry points ---------------------------------------------------------

    def run_budgeted(self, fn, cpu_seconds: float = DEFAULT_CPU_SECONDS,
                     alloc_bytes: int = DEFAULT_ALLOC_BYTES):
        """Run fn on a big-stack thread under a fresh budget."""

        def task():
            self.budget = EvalBudget(cpu_seconds, alloc_bytes)
            try:
                return fn()
            finally:
                self.budget = None

        return run_deep(task)

    def initial_model(self) -> Value:
        form = self.program.main_form
        if isinstance(form, GraphicsApp):
            return VRecord({})
        return self.eval(None, form.model)

    def build_collage(self, model: Value) -> VCollage:
        form = self.program.main_form
        if isinstance(form, GraphicsApp):
            result = self.eval(None, form.view)
        else:
            result = self.apply(self.global_value(form.view_name, (0, 0)), [model], (0, 0))
        assert isinstance(result, VCollage)
        return result

    def apply_update(self, msg: Value, model: Value) -> Value:
        form = self.program.main_form
        assert not isinstance(form, GraphicsApp)
        fn = self.global_value(form.update_name, (0, 0))
        return self.apply(fn, [msg, model], (0, 0))

    # --- globals ----------------------------------------------------------------

    def global_value(self, name: str, pos: tuple[int, int]) -> Value:
        cached = self._globals.get(name)
        if cached is not None:
            return cached
        d = self.defs.get(name)
        if d is not None:
            if d.params:
                v: Value = VClosure(tuple(d.params), d.body, None, name=name)
            else:
                if name in self._forcing:
                    raise CyclicDefinition(name, *d.pos)
                self._forcing.add(name)
                try:
                    v = self.eval(None, d.body)
                finally:
                    self._forcing.discard(name)
            self._globals[name] = v
            return v
        if name in _CONSTANTS:
            return _CONSTANTS[name]
        if name in BUILTIN_ARITY:
            return VBuiltin(name, ())
        arity = self.ctor_arity.get(name)
        if arity is not None:
            v = VConstructor(name, ()) if arity == 0 else VConstructorFn(name, arity, ())
            self._globals[name] = v
            return v
        raise EvalError(f"There is no definition called '{name}'.", *pos)

    # --- evaluation -----------------------------------------------------------

    def eval(self, env: Env | None, e: Expr) -> Value:
        depth0 = self.depth
        budget = self.budget
        try:
            while True:
                if budget is not None:
                    budget.step()
                if isinstance(e, NumberLit):
                    return VNumber(e.value)
                if isinstance(e, Var):
                    if env is not None:
                        v = env.lookup(e.name)
                        if v is not None:
                            return v
                    return self.global_value(e.name, e.pos)
                if isinstance(e, App):
                    fn = self.eval(env, e.func)
                    args = [self.eval(env, a) for a in e.args]
                    tail = self._enter_call(fn, args, e.pos)
                    if tail is None:
                        continue_env, continue_body = self._pending
                        env, e = continue_env, continue_body
                        continue
                    return tail
                if isinstance(e, If):
                    cond = self.eval(env, e.cond)
                    assert isinstance(cond, VBool)
                    e = e.then if cond.value else e.orelse
                    continue
                if isinstance(e, Case):
                    scrut = self.eval(env, e.scrutinee)
                    assert isinstance(scrut, VConstructor)
                    for branch in e.branches:
                        if branch.ctor == scrut.name:
                            if branch.binders:
                                frame = dict(zip(branch.binders, scrut.args))
                                env = Env(frame, env)
                            e = branch.body
                            break
                    else:
                        raise EvalError(f"This case is missing: {scrut.name}", *e.pos)
                    continue
                if isinstance(e, BinOp):
                    return self._eval_binop(env, e)
                if isinstance(e, StringLit):
                    return VString(e.value)
                if isinstance(e, BoolLit):
                    return VBool(e.value)
                if isinstance(e, TupleLit):
                    return VTuple(tuple(self.eval(env, item) for item in e.items))
                if isinstance(e, ListLit):
                    items = tuple(self.eval(env, item) for item in e.items)
                    if budget is not None:
                        budget.charge(64 + 8 * len(items))
                    return VList(items)
                if isinstance(e, RecordLit):
                    fields = {k: self.eval(env, v) for k, v in e.fields.items()}
                    if budget is not None:
                        budget.charge(64 + 32 * len(fields))
                    return VRecord(fields)
                if isinstance(e, RecordUpdate):
                    base = self.eval(env, Var(e.base, pos=e.pos))
                    assert isinstance(base, VRecord)
                    fields = dict(base.fields)
                    for k, v in e.fields.items():
                        fields[k] = self.eval(env, v)
                    if budget is not None:
                        budget.charge(64 + 32 * len(fields))
                    return VRecord(fields)
                if isinstance(e, FieldAccess):
                    rec = self.eval(env, e.record)
                    assert isinstance(rec, VRecord)
                    return rec.fields[e.field_name]
                if isinstance(e, Negate):
                    operand = self.eval(env, e.operand)
                    assert isinstance(operand, VNumber)
                    return VNumber(-operand.value)
                raise AssertionError(f"unhandled expr {e!r}")
        finally:
            self.depth = depth0

    _pending: tuple[Env | None, Expr] = (None, NumberLit(0.0))

    def _enter_call(self, fn: Value, args: list[Value], pos) -> Value | None:
        """Apply fn to args. A saturated closure call with no leftover args
        becomes the caller's next frame (returns None, sets _pending)."""
        while True:
            if isinstance(fn, VClosure):
                have = list(fn.bound) + args
                if len(have) < len(fn.params):
                    return VClosure(fn.params, fn.body, fn.env, tuple(have), fn.name)
                take = len(fn.params)
                call_args, rest = have[:take], have[take:]
                self.depth += 1
                if self.depth > DEPTH_LIMIT:
                    raise RecursionLimit(*pos)
                frame = dict(zip(fn.params, call_args))
                if not rest:
                    self._pending = (Env(frame, fn.env), fn.body)
                    return None
                fn = self.eval(Env(frame, fn.env), fn.body)
                self.depth -= 1
                args = rest
            elif isinstance(fn, VBuiltin):
                have = list(fn.args) + args
                need = BUILTIN_ARITY[fn.name]
                if len(have) < need:
                    return VBuiltin(fn.name, tuple(have))
                call_args, rest = have[:need], have[need:]
                result = self._run_builtin(fn.name, call_args, pos)
                if not rest:
                    return result
                fn = result
                args = rest
            elif isinstance(fn, VConstructorFn):
                have = list(fn.args) + args
                if len(have) < fn.arity:
                    return VConstructorFn(fn.name, fn.arity, tuple(have))
                assert len(have) == fn.arity
                return VConstructor(fn.name, tuple(have))
            else:
                raise AssertionError(f"cannot apply {fn!r}")

    def apply(self, fn: Value, args: list[Value], pos) -> Value:
        result = self._enter_call(fn, args, pos)
        if result is not None:
            return result
        env, body = self._pending
        try:
            return self.eval(env, body)
        finally:
            self.depth -= 1

    def _eval_binop(self, env: Env | None, e: BinOp) -> Value:
        left = self.eval(env, e.left)
        right = self.eval(env, e.right)
        assert isinstance(left, VNumber) and isinstance(right, VNumber)
        a, b = left.value, right.value
        op = e.op
        if op == "+":
            return VNumber(a + b)
        if op == "-":
            return VNumber(a - b)
        if op == "*":
            return VNumber(a * b)
        if op == "/":
            if b == 0.0:
                raise DivideByZero(*e.pos)
            return VNumber(a / b)
        if op == "==":
            return VBool(a == b)
        if op == "<":
            return VBool(a < b)
        if op == "<=":
            return VBool(a <= b)
        if op == ">":
            return VBool(a > b)
        if op == ">=":
            return VBool(a >= b)
        raise AssertionError(f"unhandled operator {op}")

    # --- builtins ---------------------------------------------------------------

    def _run_builtin(self, name: str, args: list[Value], pos) -> Value:
        budget = self.budget
        if budget is not None:
            budget.charge(96)
        fn = _BUILTINS[name]
        return fn(self, args, pos)


def _num(v: Value) -> float:
    assert isinstance(v, VNumber)
    return v.value


def _dim(v: Value) -> float:
    return max(_num(v), 0.0)


def _stencil(v: Value):
    assert isinstance(v, VStencil)
    return v.geometry


def _shape(v: Value):
    assert isinstance(v, VShape)
    return v.node


def _bi_circle(ev, args, pos):
    return VStencil(Circle(_dim(args[0])))


def _bi_square(ev, args, pos):
    return VStencil(Square(_dim(args[0])))


def _bi_triangle(ev, args, pos):
    return VStencil(Triangle(_dim(args[0])))


def _bi_rect(ev, args, pos):
    return VStencil(Rect(_dim(args[0]), _dim(args[1])))


def _bi_oval(ev, args, pos):
    return VStencil(Oval(_dim(args[0]), _dim(args[1])))


def _bi_rounded_rect(ev, args, pos):
    return VStencil(RoundedRect(_dim(args[0]), _dim(args[1]), _dim(args[2])))


def _bi_text(ev, args, pos):
    assert isinstance(args[0], VString)
    return VStencil(Text(args[0].value, 12.0))


def _bi_size(ev, args, pos):
    geom = _stencil(args[1])
    if isinstance(geom, Text):
        return VStencil(Text(geom.string, _dim(args[0])))
    return args[1]


def _bi_filled(ev, args, pos):
    assert isinstance(args[0], VColor)
    return VShape(Leaf(_stencil(args[1]), Filled(args[0].color)))


def _bi_outlined(ev, args, pos):
    assert isinstance(args[0], VLineType)
    return VShape(Leaf(_stencil(args[1]), Outlined(args[0].line, _BLACK)))


def _line_type(pattern: str):
    def impl(ev, args, pos):
        return VLineType(LineType(pattern, max(_num(args[0]), _MIN_LINE_WIDTH)))

    return impl


def _bi_rgb(ev, args, pos):
    from .colors import rgb

    return VColor(rgb(_num(args[0]), _num(args[1]), _num(args[2])))


def _bi_move(ev, args, pos):
    offset = args[0]
    assert isinstance(offset, VTuple)
    dx, dy = _num(offset.items[0]), _num(offset.items[1])
    return VShape(with_transform(_shape(args[1]), translation(dx, dy)))


def _bi_scale(ev, args, pos):
    return VShape(with_transform(_shape(args[1]), scaling(_num(args[0]))))


def _bi_rotate(ev, args, pos):
    return VShape(with_transform(_shape(args[1]), rotation(_num(args[0]))))


def _shape_list(v: Value):
    assert isinstance(v, VList)
    return tuple(_shape(item) for item in v.items)


def _bi_group(ev, args, pos):
    return VShape(Group(_shape_list(args[0])))


def _bi_collage(ev, args, pos):
    return VCollage(_dim(args[0]), _dim(args[1]), Group(_shape_list(args[2])))


def _notify(kind: str):
    def impl(ev, args, pos):
        return VShape(with_handler(_shape(args[1]), Handler(kind, args[0])))

    return impl


def _bi_sin(ev, args, pos):
    return VNumber(math.sin(_num(args[0])))


def _bi_cos(ev, args, pos):
    return VNumber(math.cos(_num(args[0])))


def _bi_degrees(ev, args, pos):
    return VNumber(_num(args[0]) * math.pi / 180.0)


def _bi_key_down(ev, args, pos):
    key, state = args
    assert isinstance(key, VString) and isinstance(state, VKeyState)
    return VBool(key.value in state.keys)


_BUILTINS = {
    "circle": _bi_circle,
    "square": _bi_square,
    "triangle": _bi_triangle,
    "rect": _bi_rect,
    "oval": _bi_oval,
    "roundedRect": _bi_rounded_rect,
    "text": _bi_text,
    "size": _bi_size,
    "filled": _bi_filled,
    "outlined": _bi_outlined,
    "solid": _line_type("solid"),
    "dotted": _line_type("dotted"),
    "dashed": _line_type("dashed"),
    "rgb": _bi_rgb,
    "move": _bi_move,
    "scale": _bi_scale,
    "rotate": _bi_rotate,
    "group": _bi_group,
    "collage": _bi_collage,
    "notifyTap": _notify("tap"),
    "notifyTapAt": _notify("tapAt"),
    "notifyEnter": _notify("enter"),
    "notifyLeave": _notify("leave"),
    "sin": _bi_sin,
    "cos": _bi_cos,
    "degrees": _bi_degrees,
    "keyDown": _bi_key_down,
}


# --- deep-stack runner -----------------------------------------------------

_STACK_BYTES = 256 * 1024 * 1024
_PY_RECURSION_LIMIT = 200_000
_stack_lock = threading.Lock()


def run_deep(fn):
    """Run fn on a thread whose stack comfortably fits the language's frame
    limit; exceptions propagate to the caller."""
    box: dict[str, object] = {}

    def runner():
        if sys.getrecursionlimit() < _PY_RECURSION_LIMIT:
            sys.setrecursionlimit(_PY_RECURSION_LIMIT)
        try:
            box["value"] = fn()
        except BaseException as exc:  # noqa: BLE001 - re-raised below
            box["error"] = exc

    with _stack_lock:
        old = threading.stack_size(_STACK_BYTES)
        try:
            thread = threading.Thread(target=runner, daemon=True)
            thread.start()
        finally:
            threading.stack_size(old)
    thread.join()
    if "error" in box:
        raise box["error"]  # type: ignore[misc]
    return box["value"]
