"""Syntax trees for the shape language.

Node equality ignores source positions so reparse round-trips compare
cleanly. Pipelines survive parsing as Pipeline nodes; desugar_program
rewrites them into plain application before type checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field


Pos = tuple[int, int]  # (line, column), 1-based


@dataclass
class Expr:
    pos: Pos = field(default=(0, 0), compare=False, kw_only=True)


@dataclass
class NumberLit(Expr):
    value: float


@dataclass
class StringLit(Expr):
    value: str


@dataclass
class BoolLit(Expr):
    value: bool


@dataclass
class Var(Expr):
    name: str


@dataclass
class TupleLit(Expr):
    # the grammar only admits pairs
    items: list[Expr]


@dataclass
class ListLit(Expr):
    items: list[Expr]


@dataclass
class RecordLit(Expr):
    fields: dict[str, Expr]


@dataclass
class RecordUpdate(Expr):
    base: str
    fields: dict[str, Expr]


@dataclass
class FieldAccess(Expr):
    record: Expr
    field_name: str


@dataclass
class App(Expr):
    func: Expr
    args: list[Expr]


@dataclass
class BinOp(Expr):
    op: str  # + - * / == < <= > >=
    left: Expr
    right: Expr


@dataclass
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass
class CaseBranch:
    ctor: str
    binders: list[str]
    body: Expr
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class Case(Expr):
    scrutinee: Expr
    branches: list[CaseBranch]


@dataclass
class Negate(Expr):
    operand: Expr


@dataclass
class Pipeline(Expr):
    value: Expr
    func: Expr


# A constructor argument type is a type name or a pair of type names:
# "Float" or ("Float", "Float"). The checker resolves the names.
TypeRef = str | tuple[str, str]


@dataclass
class CtorDecl:
    name: str
    arg_types: list[TypeRef]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class TypeDecl:
    name: str
    ctors: list[CtorDecl]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class Definition:
    name: str
    params: list[str]
    body: Expr
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class GraphicsApp:
    view: Expr
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class NotificationsApp:
    model: Expr
    view_name: str
    update_name: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass
class GameApp:
    tick_ctor: str
    model: Expr
    view_name: str
    update_name: str
    pos: Pos = field(default=(0, 0), compare=False)


AppForm = GraphicsApp | NotificationsApp | GameApp


@dataclass
class Program:
    type_decls: list[TypeDecl]
    definitions: list[Definition]
    main_form: AppForm


# ---------------------------------------------------------------------------
# pipeline desugaring


def desugar_expr(e: Expr) -> Expr:
    """Rewrite every `x |> f` into f applied last to x."""
    if isinstance(e, Pipeline):
        value = desugar_expr(e.value)
        func = desugar_expr(e.func)
        if isinstance(func, App):
            return App(func.func, func.args + [value], pos=e.pos)
        return App(func, [value], pos=e.pos)
    return _map_children(e, desugar_expr)


def desugar_program(p: Program) -> Program:
    defs = [Definition(d.name, d.params, desugar_expr(d.body), pos=d.pos) for d in p.definitions]
    return Program(p.type_decls, defs, _map_form(p.main_form, desugar_expr))


def _map_form(form: AppForm, fn) -> AppForm:
    if isinstance(form, GraphicsApp):
        return GraphicsApp(fn(form.view), pos=form.pos)
    if isinstance(form, NotificationsApp):
        return NotificationsApp(fn(form.model), form.view_name, form.update_name, pos=form.pos)
    return GameApp(form.tick_ctor, fn(form.model), form.view_name, form.update_name, pos=form.pos)


def _map_children(e: Expr, fn) -> Expr:
    if isinstance(e, (NumberLit, StringLit, BoolLit, Var)):
        return e
    if isinstance(e, TupleLit):
        return TupleLit([fn(x) for x in e.items], pos=e.pos)
    if isinstance(e, ListLit):
        return ListLit([fn(x) for x in e.items], pos=e.pos)
    if isinstance(e, RecordLit):
        return RecordLit({k: fn(v) for k, v in e.fields.items()}, pos=e.pos)
    if isinstance(e, RecordUpdate):
        return RecordUpdate(e.base, {k: fn(v) for k, v in e.fields.items()}, pos=e.pos)
    if isinstance(e, FieldAccess):
        return FieldAccess(fn(e.record), e.field_name, pos=e.pos)
    if isinstance(e, App):
        return App(fn(e.func), [fn(a) for a in e.args], pos=e.pos)
    if isinstance(e, BinOp):
        return BinOp(e.op, fn(e.left), fn(e.right), pos=e.pos)
    if isinstance(e, If):
        return If(fn(e.cond), fn(e.then), fn(e.orelse), pos=e.pos)
    if isinstance(e, Case):
        branches = [CaseBranch(b.ctor, b.binders, fn(b.body), pos=b.pos) for b in e.branches]
        return Case(fn(e.scrutinee), branches, pos=e.pos)
    if isinstance(e, Negate):
        return Negate(fn(e.operand), pos=e.pos)
    if isinstance(e, Pipeline):
        return Pipeline(fn(e.value), fn(e.func), pos=e.pos)
    raise AssertionError(f"unhandled expr {e!r}")


def free_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (NumberLit, StringLit, BoolLit)):
        return set()
    if isinstance(e, (TupleLit, ListLit)):
        out: set[str] = set()
        for x in e.items:
            out |= free_vars(x)
        return out
    if isinstance(e, RecordLit):
        out = set()
        for v in e.fields.values():
            out |= free_vars(v)
        return out
    if isinstance(e, RecordUpdate):
        out = {e.base}
        for v in e.fields.values():
            out |= free_vars(v)
        return out
    if isinstance(e, FieldAccess):
        return free_vars(e.record)
    if isinstance(e, App):
        out = free_vars(e.func)
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, BinOp):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, If):
        return free_vars(e.cond) | free_vars(e.then) | free_vars(e.orelse)
    if isinstance(e, Case):
        out = free_vars(e.scrutinee)
        for b in e.branches:
            out |= free_vars(b.body) - set(b.binders)
            out.add(b.ctor)
        return out
    if isinstance(e, Negate):
        return free_vars(e.operand)
    if isinstance(e, Pipeline):
        return free_vars(e.value) | free_vars(e.func)
    raise AssertionError(f"unhandled expr {e!r}")


# ---------------------------------------------------------------------------
# pretty printing
#
# Output reparses to an equal tree. Everything prints on one line except
# case expressions, whose branches must align at a common column.

_ATOM = 6
_APP = 5
_NEG = 4
_MUL = 3
_ADD = 2
_CMP = 1
_PIPE = 0
_OPEN = -1  # if/case: only valid as a whole expression

_OP_LEVEL = {"*": _MUL, "/": _MUL, "+": _ADD, "-": _ADD,
             "==": _CMP, "<": _CMP, "<=": _CMP, ">": _CMP, ">=": _CMP}


def pretty_program(p: Program) -> str:
    chunks = [_pretty_type_decl(t) for t in p.type_decls]
    chunks += [_pretty_definition(d) for d in p.definitions]
    chunks.append(_pretty_main(p.main_form))
    return "\n\n".join(chunks) + "\n"


def _pretty_type_ref(ref: TypeRef) -> str:
    if isinstance(ref, tuple):
        return f"({ref[0]}, {ref[1]})"
    return ref


def _pretty_type_decl(t: TypeDecl) -> str:
    ctors = " | ".join(
        " ".join([c.name] + [_pretty_type_ref(r) for r in c.arg_types]) for c in t.ctors
    )
    return f"type {t.name} = {ctors}"


def _pretty_definition(d: Definition) -> str:
    head = " ".join([d.name] + d.params)
    if isinstance(d.body, Case):
        return f"{head} =\n" + _indent(pretty_expr(d.body, indent=2), 2)
    return f"{head} = {pretty_expr(d.body, indent=2)}"


def _pretty_main(form: AppForm) -> str:
    if isinstance(form, GraphicsApp):
        return "main = graphicsApp { view = " + pretty_expr(form.view, indent=2) + " }"
    if isinstance(form, NotificationsApp):
        return ("main = notificationsApp { model = " + pretty_expr(form.model, indent=2)
                + f", view = {form.view_name}, update = {form.update_name}" + " }")
    return (f"main = gameApp {form.tick_ctor} " + "{ model = "
            + pretty_expr(form.model, indent=2)
            + f", view = {form.view_name}, update = {form.update_name}" + " }")


def pretty_expr(e: Expr, level: int = _OPEN, indent: int = 0) -> str:
    """Render e, parenthesizing when its own level is below `level`.

    `indent` is the column (0-based) where this expression begins; case
    branches are laid out relative to it.
    """
    own, text = _render(e, indent)
    if own < level:
        return "(" + text + ")"
    return text


def _render(e: Expr, indent: int) -> tuple[int, str]:
    if isinstance(e, NumberLit):
        text = repr(e.value)
        if text.endswith(".0"):
            text = text[:-2]
        if text.startswith("-"):
            return _NEG, text
        return _ATOM, text
    if isinstance(e, StringLit):
        escaped = (e.value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        return _ATOM, f'"{escaped}"'
    if isinstance(e, BoolLit):
        return _ATOM, "True" if e.value else "False"
    if isinstance(e, Var):
        return _ATOM, e.name
    if isinstance(e, TupleLit):
        inner = ", ".join(pretty_expr(x, _PIPE, indent + 1) for x in e.items)
        return _ATOM, f"({inner})"
    if isinstance(e, ListLit):
        inner = ", ".join(pretty_expr(x, _PIPE, indent + 1) for x in e.items)
        return _ATOM, f"[{inner}]"
    if isinstance(e, RecordLit):
        if not e.fields:
            return _ATOM, "{}"
        inner = ", ".join(f"{k} = {pretty_expr(v, _PIPE, indent + 2)}" for k, v in e.fields.items())
        return _ATOM, "{ " + inner + " }"
    if isinstance(e, RecordUpdate):
        inner = ", ".join(f"{k} = {pretty_expr(v, _PIPE, indent + 2)}" for k, v in e.fields.items())
        return _ATOM, "{ " + e.base + " | " + inner + " }"
    if isinstance(e, FieldAccess):
        return _ATOM, pretty_expr(e.record, _ATOM, indent) + "." + e.field_name
    if isinstance(e, App):
        parts = [pretty_expr(e.func, _ATOM, indent)]
        parts += [pretty_expr(a, _ATOM, indent) for a in e.args]
        return _APP, " ".join(parts)
    if isinstance(e, Negate):
        return _NEG, "-" + pretty_expr(e.operand, _APP, indent + 1)
    if isinstance(e, BinOp):
        lvl = _OP_LEVEL[e.op]
        left = pretty_expr(e.left, lvl, indent)
        right = pretty_expr(e.right, lvl + 1, indent)
        return lvl, f"{left} {e.op} {right}"
    if isinstance(e, Pipeline):
        left = pretty_expr(e.value, _PIPE, indent)
        right = pretty_expr(e.func, _PIPE + 1, indent)
        return _PIPE, f"{left} |> {right}"
    if isinstance(e, If):
        cond = pretty_expr(e.cond, _PIPE, indent)
        then = pretty_expr(e.then, _PIPE, indent)
        orelse = pretty_expr(e.orelse, _OPEN, indent)
        return _OPEN, f"if {cond} then {then} else {orelse}"
    if isinstance(e, Case):
        scrut = pretty_expr(e.scrutinee, _PIPE, indent + 5)
        bcol = indent + 2
        lines = [f"case {scrut} of"]
        for b in e.branches:
            head = " ".join([b.ctor] + b.binders)
            body = pretty_expr(b.body, _OPEN, bcol + 2)
            if "\n" in body:
                lines.append(" " * bcol + head + " ->")
                lines.append(_indent(body, bcol + 2))
            else:
                lines.append(" " * bcol + f"{head} -> {body}")
        return _OPEN, "\n".join(lines)
    raise AssertionError(f"unhandled expr {e!r}")


def _indent(text: str, by: int) -> str:
    pad = " " * by
    return "\n".join(pad + line for line in text.split("\n"))
