"""Interactive sessions: hit testing, event dispatch, and replay traces.

Hit tests transform the pointer into each shape's local frame and apply a
per-geometry containment rule, so stroked and filled variants of a stencil
cover the same region. Tap goes to the topmost hit shape only; enter and
leave are edge-triggered per handler identity and fire bottom-to-top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import GameApp, GraphicsApp
from .errors import EvalError, ShapelabError, TickOnNonGameApp
from .evaluator import Evaluator
from .scene import (
    Circle,
    FlatShape,
    Geometry,
    HandlerId,
    Oval,
    Rect,
    RoundedRect,
    Square,
    Text,
    Triangle,
    flatten_scene,
    triangle_vertices,
)
from .svg import TEXT_UNITS_PER_CHAR, emit_svg
from .transform import apply_point, invert
from .typecheck import TypedProgram
from .values import (
    VConstructor,
    VKeyState,
    VNumber,
    VTuple,
    Value,
    display_value,
    value_to_json,
)


def geometry_contains(geom: Geometry, x: float, y: float) -> bool:
    if isinstance(geom, Circle):
        return x * x + y * y <= geom.radius * geom.radius
    if isinstance(geom, Square):
        half = geom.side / 2
        return abs(x) <= half and abs(y) <= half
    if isinstance(geom, Rect):
        return abs(x) <= geom.width / 2 and abs(y) <= geom.height / 2
    if isinstance(geom, Oval):
        if geom.width <= 0 or geom.height <= 0:
            return False
        nx = 2 * x / geom.width
        ny = 2 * y / geom.height
        return nx * nx + ny * ny <= 1
    if isinstance(geom, Triangle):
        v0, v1, v2 = triangle_vertices(geom.circumradius)
        d0 = _cross(v0, v1, (x, y))
        d1 = _cross(v1, v2, (x, y))
        d2 = _cross(v2, v0, (x, y))
        return d0 >= 0 and d1 >= 0 and d2 >= 0
    if isinstance(geom, RoundedRect):
        w, h = geom.width, geom.height
        r = min(max(geom.corner, 0.0), w / 2, h / 2)
        ax, ay = abs(x), abs(y)
        if ax > w / 2 or ay > h / 2:
            return False
        cx, cy = w / 2 - r, h / 2 - r
        if ax <= cx or ay <= cy:
            return True
        dx, dy = ax - cx, ay - cy
        return dx * dx + dy * dy <= r * r
    if isinstance(geom, Text):
        half_w = (TEXT_UNITS_PER_CHAR / 2) * geom.size * len(geom.string)
        return abs(x) <= half_w and abs(y) <= geom.size / 2
    raise AssertionError(f"unhandled geometry {geom!r}")


def _cross(a, b, p) -> float:
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


def shape_hit(flat: FlatShape, x: float, y: float) -> bool:
    """Whether the collage-space point lands inside the shape."""
    try:
        inverse = invert(flat.transform)
    except ShapelabError:
        return False
    lx, ly = apply_point(inverse, (x, y))
    return geometry_contains(flat.geometry, lx, ly)


def _coord(event: dict, key: str) -> float:
    v = event.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"Event field '{key}' must be a number.")
    return float(v)


def _key(event: dict) -> str:
    v = event.get("key")
    if not isinstance(v, str):
        raise ValueError("Event field 'key' must be a string.")
    return v


@dataclass
class StepRecord:
    event: dict
    fired: list[str]
    error: str | None = None

    def to_json(self, model: Value) -> dict:
        out = {"event": self.event, "fired": self.fired, "model": value_to_json(model)}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class Session:
    """One running program instance with its own model and input state."""

    typed: TypedProgram
    evaluator: Evaluator = field(init=False)
    model: Value = field(init=False)
    elapsed: float = 0.0
    keys_down: set[str] = field(default_factory=set)
    inside: set[HandlerId] = field(default_factory=set)
    steps: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.evaluator = Evaluator(self.typed)
        self.model = self.evaluator.run_budgeted(self.evaluator.initial_model)
        self._svg_cache: tuple[Value, str] | None = None

    # --- views ---------------------------------------------------------------

    def flat_view(self) -> list[FlatShape]:
        collage = self.evaluator.build_collage(self.model)
        return flatten_scene(collage.root)

    def view_svg(self) -> str:
        cached = self._svg_cache
        if cached is not None and cached[0] is self.model:
            return cached[1]
        svg = self.evaluator.run_budgeted(
            lambda: emit_svg(self.evaluator.build_collage(self.model))
        )
        self._svg_cache = (self.model, svg)
        return svg

    # --- events ----------------------------------------------------------------

    def handle_event(self, event: dict) -> dict:
        kind = event.get("type")
        record = StepRecord(event=event, fired=[])
        try:
            if kind == "tap":
                x, y = _coord(event, "x"), _coord(event, "y")
                self.evaluator.run_budgeted(lambda: self._tap(x, y, record))
            elif kind == "move":
                x, y = _coord(event, "x"), _coord(event, "y")
                self.evaluator.run_budgeted(lambda: self._move(x, y, record))
            elif kind == "tick":
                dt = _coord(event, "dt")
                self.evaluator.run_budgeted(lambda: self._tick(dt, record))
            elif kind == "keydown":
                self.keys_down.add(_key(event))
            elif kind == "keyup":
                self.keys_down.discard(_key(event))
            else:
                raise ValueError(f"Unknown event type: {kind!r}")
        except EvalError as err:
            record.error = err.message
        except TickOnNonGameApp as err:
            record.error = str(err)
        step = record.to_json(self.model)
        self.steps.append(step)
        return step

    def _is_static(self) -> bool:
        return isinstance(self.typed.program.main_form, GraphicsApp)

    def _apply_messages(self, messages: list[Value], record: StepRecord) -> None:
        before = self.model
        try:
            for msg in messages:
                record.fired.append(display_value(msg))
                self.model = self.evaluator.apply_update(msg, self.model)
        except EvalError:
            self.model = before
            record.fired.clear()
            raise

    def _tap(self, x: float, y: float, record: StepRecord) -> None:
        if self._is_static():
            return
        flats = self.flat_view()
        target: FlatShape | None = None
        for flat in reversed(flats):
            taps = [h for _, h in flat.handlers if h.kind in ("tap", "tapAt")]
            if taps and shape_hit(flat, x, y):
                target = flat
                break
        if target is None:
            return
        messages: list[Value] = []
        for _, handler in target.handlers:
            if handler.kind == "tap":
                messages.append(handler.payload)
            elif handler.kind == "tapAt":
                point = VTuple((VNumber(x), VNumber(y)))
                messages.append(self.evaluator.apply(handler.payload, [point], (0, 0)))
        self._apply_messages(messages, record)

    def _move(self, x: float, y: float, record: StepRecord) -> None:
        if self._is_static():
            return
        flats = self.flat_view()
        order: list[tuple[HandlerId, str, Value]] = []
        seen: set[HandlerId] = set()
        hit_ids: set[HandlerId] = set()
        present: set[HandlerId] = set()
        for flat in flats:
            hit = None
            for hid, handler in flat.handlers:
                if handler.kind not in ("enter", "leave"):
                    continue
                present.add(hid)
                if hid not in seen:
                    seen.add(hid)
                    order.append((hid, handler.kind, handler.payload))
                if hit is None:
                    hit = shape_hit(flat, x, y)
                if hit:
                    hit_ids.add(hid)
        # handler identities that left the scene are forgotten silently
        previous = self.inside & present
        messages: list[Value] = []
        for hid, kind, payload in order:
            if kind == "enter" and hid in hit_ids and hid not in previous:
                messages.append(payload)
            elif kind == "leave" and hid not in hit_ids and hid in previous:
                messages.append(payload)
        self._apply_messages(messages, record)
        self.inside = hit_ids

    def _tick(self, dt: float, record: StepRecord) -> None:
        form = self.typed.program.main_form
        if not isinstance(form, GameApp):
            raise TickOnNonGameApp()
        new_elapsed = self.elapsed + dt
        msg = VConstructor(
            form.tick_ctor,
            (VNumber(new_elapsed), VKeyState(frozenset(self.keys_down))),
        )
        self._apply_messages([msg], record)
        self.elapsed = new_elapsed

    # --- replay ------------------------------------------------------------------

    def trace(self) -> dict:
        return {
            "steps": self.steps,
            "finalModel": value_to_json(self.model),
            "elapsed": self.elapsed,
        }


def replay(typed: TypedProgram, events: list[dict]) -> Session:
    """Run a whole event list through a fresh session."""
    session = Session(typed)
    for event in events:
        session.handle_event(event)
    return session
