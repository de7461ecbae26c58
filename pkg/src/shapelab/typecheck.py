"""Type inference and program conformance checking.

Unification over the builtin environment plus user declarations. User
definitions are monomorphic; builtins instantiate fresh type variables
at every use. Diagnostics name types the way beginners see them (a
type variable renders as "anything", never an internal id).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    App,
    BinOp,
    BoolLit,
    Case,
    Expr,
    FieldAccess,
    GameApp,
    GraphicsApp,
    If,
    ListLit,
    Negate,
    NotificationsApp,
    NumberLit,
    Pipeline,
    Program,
    RecordLit,
    RecordUpdate,
    StringLit,
    TupleLit,
    Var,
)
from .errors import Diagnostic, closest_names, edit_distance
from .prelude import BUILTIN_SCHEMES, STENCIL_MAKERS, instantiate
from .types import (
    BOOL,
    COLOR,
    FLOAT,
    KEY_STATE,
    LINE_TYPE,
    NO_MSG,
    STENCIL,
    STRING,
    CollageT,
    FuncT,
    ListT,
    PrimType,
    RecordT,
    ShapeT,
    Tuple2T,
    Type,
    UnionT,
    VarT,
    fresh_var,
)

_PRIM_BY_NAME = {
    "Float": FLOAT,
    "String": STRING,
    "Bool": BOOL,
    "Color": COLOR,
    "LineType": LINE_TYPE,
    "Stencil": STENCIL,
    "KeyState": KEY_STATE,
}


class TypeCheckError(Exception):
    def __init__(self, kind: str, message: str, hint: str, pos: tuple[int, int]):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.hint = hint
        self.pos = pos

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.pos[0], self.pos[1], self.message, self.hint)


def message_name(t: Type) -> str:
    """A type name as shown in error prose."""
    if isinstance(t, PrimType):
        return t.name
    if isinstance(t, ShapeT):
        return "Shape"
    if isinstance(t, CollageT):
        return "Collage"
    if isinstance(t, UnionT):
        return t.name
    if isinstance(t, VarT):
        return "anything"
    if isinstance(t, ListT):
        return f"List of {message_name(t.item)}"
    if isinstance(t, Tuple2T):
        return f"({message_name(t.first)}, {message_name(t.second)}) pair"
    if isinstance(t, RecordT):
        return "record"
    if isinstance(t, FuncT):
        return "function"
    raise AssertionError(f"unhandled type {t!r}")


_HINTS = {
    ("Shape", "Stencil"): "Use filled or outlined to turn a Stencil into a Shape.",
    ("Stencil", "Shape"): "filled and outlined need a Stencil; apply them before move, scale, or rotate.",
    ("Collage", "Shape"): "Wrap your shapes in collage 500 500 [ ... ].",
    ("Collage", "Stencil"): "Use filled or outlined first, then wrap the result in collage 500 500 [ ... ].",
    ("List of Shape", "Shape"): "Put your shapes inside [ ... ] brackets.",
    ("Float", "String"): "Numbers are written without quotation marks.",
}


def _hint_for(expected: str, found: str) -> str:
    return _HINTS.get((expected, found), "")


class _UnifyFail(Exception):
    def __init__(self, occurs: bool = False):
        super().__init__()
        self.occurs = occurs


@dataclass
class TypedProgram:
    program: Program
    def_types: dict[str, Type]
    ctor_arity: dict[str, int]
    ctor_union: dict[str, str]
    union_ctors: dict[str, list[str]]
    msg_union: str | None


@dataclass
class CheckOutput:
    typed: TypedProgram | None
    diagnostics: list[Diagnostic] = field(default_factory=list)


@dataclass
class _FieldUse:
    def_name: str
    record_type: Type
    field_name: str
    result: VarT
    pos: tuple[int, int]


@dataclass
class _UpdateUse:
    def_name: str
    record_type: Type
    fields: dict[str, Type]
    base: str
    pos: tuple[int, int]


class _Checker:
    def __init__(self, program: Program):
        self.program = program
        self.subst: dict[int, Type] = {}
        self.errors: list[TypeCheckError] = []
        self.errored_defs: set[str] = set()
        self.deferred: list[_FieldUse | _UpdateUse] = []
        self.current_def = ""
        self.ctor_types: dict[str, Type] = {}
        self.ctor_args: dict[str, list[Type]] = {}
        self.ctor_union: dict[str, str] = {}
        self.union_ctors: dict[str, list[str]] = {}
        self.assumptions: dict[str, Type] = {}
        self.msg_union: str | None = None

    # --- substitution and unification --------------------------------------

    def resolve(self, t: Type) -> Type:
        while isinstance(t, VarT) and t.id in self.subst:
            t = self.subst[t.id]
        return t

    def apply(self, t: Type) -> Type:
        t = self.resolve(t)
        if isinstance(t, ShapeT):
            return ShapeT(self.apply(t.msg))
        if isinstance(t, CollageT):
            return CollageT(self.apply(t.msg))
        if isinstance(t, ListT):
            return ListT(self.apply(t.item))
        if isinstance(t, Tuple2T):
            return Tuple2T(self.apply(t.first), self.apply(t.second))
        if isinstance(t, RecordT):
            return RecordT(tuple((k, self.apply(v)) for k, v in t.fields))
        if isinstance(t, FuncT):
            return FuncT(tuple(self.apply(p) for p in t.params), self.apply(t.result))
        return t

    def _occurs(self, var_id: int, t: Type) -> bool:
        t = self.resolve(t)
        if isinstance(t, VarT):
            return t.id == var_id
        if isinstance(t, (ShapeT, CollageT)):
            return self._occurs(var_id, t.msg)
        if isinstance(t, ListT):
            return self._occurs(var_id, t.item)
        if isinstance(t, Tuple2T):
            return self._occurs(var_id, t.first) or self._occurs(var_id, t.second)
        if isinstance(t, RecordT):
            return any(self._occurs(var_id, v) for _, v in t.fields)
        if isinstance(t, FuncT):
            return any(self._occurs(var_id, p) for p in t.params) or self._occurs(
                var_id, t.result
            )
        return False

    def _unify(self, t1: Type, t2: Type) -> None:
        t1 = self.resolve(t1)
        t2 = self.resolve(t2)
        if isinstance(t1, VarT):
            if isinstance(t2, VarT) and t2.id == t1.id:
                return
            if self._occurs(t1.id, t2):
                raise _UnifyFail(occurs=True)
            self.subst[t1.id] = t2
            return
        if isinstance(t2, VarT):
            self._unify(t2, t1)
            return
        if isinstance(t1, PrimType) and isinstance(t2, PrimType) and t1.name == t2.name:
            return
        if isinstance(t1, UnionT) and isinstance(t2, UnionT) and t1.name == t2.name:
            return
        if isinstance(t1, ShapeT) and isinstance(t2, ShapeT):
            self._unify(t1.msg, t2.msg)
            return
        if isinstance(t1, CollageT) and isinstance(t2, CollageT):
            self._unify(t1.msg, t2.msg)
            return
        if isinstance(t1, ListT) and isinstance(t2, ListT):
            self._unify(t1.item, t2.item)
            return
        if isinstance(t1, Tuple2T) and isinstance(t2, Tuple2T):
            self._unify(t1.first, t2.first)
            self._unify(t1.second, t2.second)
            return
        if isinstance(t1, RecordT) and isinstance(t2, RecordT):
            if [k for k, _ in t1.fields] != [k for k, _ in t2.fields]:
                raise _UnifyFail()
            for (_, a), (_, b) in zip(t1.fields, t2.fields):
                self._unify(a, b)
            return
        if isinstance(t1, FuncT) and isinstance(t2, FuncT):
            k = min(len(t1.params), len(t2.params))
            for a, b in zip(t1.params[:k], t2.params[:k]):
                self._unify(a, b)
            rest1: Type = t1.result if len(t1.params) == k else FuncT(t1.params[k:], t1.result)
            rest2: Type = t2.result if len(t2.params) == k else FuncT(t2.params[k:], t2.result)
            self._unify(rest1, rest2)
            return
        raise _UnifyFail()

    def unify(self, expected: Type, found: Type, pos: tuple[int, int], describe) -> None:
        """describe(expected_name, found_name) -> (kind, message) on failure."""
        try:
            self._unify(expected, found)
        except _UnifyFail as fail:
            if fail.occurs:
                raise TypeCheckError(
                    "OccursCheck",
                    "This expression's type would have to contain itself, which is not allowed.",
                    "",
                    pos,
                ) from None
            exp = self.apply(expected)
            fnd = self.apply(found)
            exp_name, fnd_name = message_name(exp), message_name(fnd)
            if (
                exp_name == "record"
                and fnd_name == "record"
                and isinstance(exp, RecordT)
                and isinstance(fnd, RecordT)
            ):
                exp_name = "record with fields { " + ", ".join(k for k, _ in exp.fields) + " }"
                fnd_name = "record with fields { " + ", ".join(k for k, _ in fnd.fields) + " }"
            kind, message = describe(exp_name, fnd_name)
            raise TypeCheckError(kind, message, _hint_for(exp_name, fnd_name), pos) from None

    # --- declarations --------------------------------------------------------

    def resolve_decls(self) -> None:
        for decl in self.program.type_decls:
            self.union_ctors[decl.name] = [c.name for c in decl.ctors]
        for decl in self.program.type_decls:
            for ctor in decl.ctors:
                try:
                    arg_types = [self._resolve_type_ref(r, ctor.pos) for r in ctor.arg_types]
                except TypeCheckError as err:
                    self._record(err, "type " + decl.name)
                    arg_types = []
                self.ctor_args[ctor.name] = arg_types
                self.ctor_union[ctor.name] = decl.name
                if arg_types:
                    self.ctor_types[ctor.name] = FuncT(tuple(arg_types), UnionT(decl.name))
                else:
                    self.ctor_types[ctor.name] = UnionT(decl.name)

    def _resolve_type_ref(self, ref, pos) -> Type:
        if isinstance(ref, tuple):
            return Tuple2T(
                self._resolve_type_ref(ref[0], pos), self._resolve_type_ref(ref[1], pos)
            )
        if ref in _PRIM_BY_NAME:
            return _PRIM_BY_NAME[ref]
        if ref in self.union_ctors:
            return UnionT(ref)
        suggestions = closest_names(ref, list(_PRIM_BY_NAME) + list(self.union_ctors))
        hint = f"Did you mean '{suggestions[0]}'?" if suggestions else ""
        raise TypeCheckError("UnknownName", f"There is no type called '{ref}'.", hint, pos)

    # --- inference -----------------------------------------------------------

    def _lookup(self, name: str, env: dict[str, Type], pos) -> Type:
        if name in env:
            return env[name]
        if name in self.assumptions:
            return self.assumptions[name]
        if name in self.ctor_types:
            return self.ctor_types[name]
        if name in BUILTIN_SCHEMES:
            return instantiate(BUILTIN_SCHEMES[name])
        candidates = (
            list(env) + list(self.assumptions) + list(self.ctor_types) + list(BUILTIN_SCHEMES)
        )
        close = [c for c in closest_names(name, candidates) if edit_distance(name, c) <= 2]
        hint = f"Did you mean '{close[0]}'?" if close else ""
        raise TypeCheckError(
            "UnknownName", f"There is no definition called '{name}'.", hint, pos
        )

    def infer(self, e: Expr, env: dict[str, Type]) -> Type:
        if isinstance(e, NumberLit):
            return FLOAT
        if isinstance(e, StringLit):
            return STRING
        if isinstance(e, BoolLit):
            return BOOL
        if isinstance(e, Var):
            return self._lookup(e.name, env, e.pos)
        if isinstance(e, TupleLit):
            return Tuple2T(self.infer(e.items[0], env), self.infer(e.items[1], env))
        if isinstance(e, ListLit):
            elem: Type = fresh_var()
            for item in e.items:
                t = self.infer(item, env)
                self.unify(
                    elem,
                    t,
                    item.pos,
                    lambda exp, fnd: (
                        "Mismatch",
                        f"Lists hold one kind of value: expected {exp}, but found {fnd}.",
                    ),
                )
            return ListT(elem)
        if isinstance(e, RecordLit):
            return RecordT.of({k: self.infer(v, env) for k, v in e.fields.items()})
        if isinstance(e, RecordUpdate):
            base_t = self._lookup(e.base, env, e.pos)
            new_fields = {k: self.infer(v, env) for k, v in e.fields.items()}
            resolved = self.resolve(base_t)
            if isinstance(resolved, RecordT):
                self._check_update(resolved, new_fields, e.base, e.pos)
                return resolved
            if isinstance(resolved, VarT):
                self.deferred.append(
                    _UpdateUse(self.current_def, resolved, new_fields, e.base, e.pos)
                )
                return resolved
            raise TypeCheckError(
                "Mismatch",
                f"Only records can be updated, but '{e.base}' is a {message_name(resolved)}.",
                "",
                e.pos,
            )
        if isinstance(e, FieldAccess):
            rec_t = self.infer(e.record, env)
            resolved = self.resolve(rec_t)
            if isinstance(resolved, RecordT):
                return self._check_access(resolved, e.field_name, e.pos)
            if isinstance(resolved, VarT):
                result = fresh_var()
                self.deferred.append(
                    _FieldUse(self.current_def, resolved, e.field_name, result, e.pos)
                )
                return result
            raise TypeCheckError(
                "Mismatch",
                f"Only records have fields, but this is a {message_name(resolved)}.",
                "",
                e.pos,
            )
        if isinstance(e, App):
            return self._infer_app(e, env)
        if isinstance(e, BinOp):
            return self._infer_binop(e, env)
        if isinstance(e, If):
            cond_t = self.infer(e.cond, env)
            self.unify(
                BOOL,
                cond_t,
                e.cond.pos,
                lambda exp, fnd: (
                    "Mismatch",
                    f"if needs a Bool for its condition, but found a {fnd}.",
                ),
            )
            then_t = self.infer(e.then, env)
            else_t = self.infer(e.orelse, env)
            self.unify(
                then_t,
                else_t,
                e.pos,
                lambda exp, fnd: (
                    "Mismatch",
                    f"The two branches of this if make different types: {exp} and {fnd}.",
                ),
            )
            return then_t
        if isinstance(e, Case):
            return self._infer_case(e, env)
        if isinstance(e, Negate):
            t = self.infer(e.operand, env)
            self.unify(
                FLOAT,
                t,
                e.pos,
                lambda exp, fnd: ("Mismatch", f"Negation needs a Float, but found a {fnd}."),
            )
            return FLOAT
        if isinstance(e, Pipeline):
            raise AssertionError("pipelines must be desugared before checking")
        raise AssertionError(f"unhandled expr {e!r}")

    def _check_access(self, record: RecordT, field_name: str, pos) -> Type:
        fields = record.as_dict()
        if field_name not in fields:
            raise TypeCheckError(
                "Mismatch",
                f"This record has no field called '{field_name}'.",
                "It has: " + ", ".join(k for k, _ in record.fields) + "."
                if record.fields
                else "It has no fields.",
                pos,
            )
        return fields[field_name]

    def _check_update(self, record: RecordT, new_fields: dict[str, Type], base: str, pos) -> None:
        fields = record.as_dict()
        for name, t in new_fields.items():
            if name not in fields:
                raise TypeCheckError(
                    "Mismatch",
                    f"'{base}' has no field called '{name}'.",
                    "It has: " + ", ".join(k for k, _ in record.fields) + ".",
                    pos,
                )
            self.unify(
                fields[name],
                t,
                pos,
                lambda exp, fnd, _n=name: (
                    "Mismatch",
                    f"Field '{_n}' holds a {exp}, but this update gives it a {fnd}.",
                ),
            )

    @staticmethod
    def _head_name(e: Expr) -> str:
        if isinstance(e, Var):
            return e.name
        if isinstance(e, App):
            return _Checker._head_name(e.func)
        if isinstance(e, FieldAccess):
            return e.field_name
        return "this function"

    @staticmethod
    def _count_params(t: Type) -> int:
        if isinstance(t, FuncT):
            return len(t.params) + _Checker._count_params(t.result)
        return 0

    def _infer_app(self, e: App, env: dict[str, Type]) -> Type:
        name = self._head_name(e.func)
        fn_t = self.infer(e.func, env)
        known_fn = not isinstance(self.resolve(fn_t), VarT)
        total = self._count_params(self.resolve(fn_t)) if known_fn else None
        current = fn_t
        for arg in e.args:
            arg_t = self.infer(arg, env)
            current = self.resolve(current)
            if isinstance(current, FuncT):
                param = current.params[0]
                self.unify(
                    param,
                    arg_t,
                    arg.pos,
                    lambda exp, fnd: ("Mismatch", f"{name} needs a {exp}, but found a {fnd}."),
                )
                if len(current.params) > 1:
                    current = FuncT(current.params[1:], current.result)
                else:
                    current = current.result
            elif isinstance(current, VarT):
                result = fresh_var()
                self.unify(
                    current,
                    FuncT((arg_t,), result),
                    arg.pos,
                    lambda exp, fnd: ("Mismatch", f"{name} needs a {exp}, but found a {fnd}."),
                )
                current = result
            else:
                if total == 0:
                    raise TypeCheckError(
                        "ArityError",
                        f"'{name}' is not a function, so it cannot take arguments.",
                        "",
                        e.pos,
                    )
                plural = "argument" if total == 1 else "arguments"
                raise TypeCheckError(
                    "ArityError",
                    f"{name} takes {total} {plural}, but got {len(e.args)}.",
                    "",
                    e.pos,
                )
        return current

    def _infer_binop(self, e: BinOp, env: dict[str, Type]) -> Type:
        left_t = self.infer(e.left, env)
        right_t = self.infer(e.right, env)
        for side_t, side in ((left_t, e.left), (right_t, e.right)):
            self.unify(
                FLOAT,
                side_t,
                side.pos,
                lambda exp, fnd: (
                    "Mismatch",
                    f"'{e.op}' works on Floats, but found a {fnd}.",
                ),
            )
        return FLOAT if e.op in ("+", "-", "*", "/") else BOOL

    def _infer_case(self, e: Case, env: dict[str, Type]) -> Type:
        scrut_t = self.resolve(self.infer(e.scrutinee, env))
        union_name: str | None = None
        if isinstance(scrut_t, UnionT):
            union_name = scrut_t.name
        elif not isinstance(scrut_t, VarT):
            raise TypeCheckError(
                "Mismatch",
                f"case needs a value of a declared type, but found a {message_name(scrut_t)}.",
                "",
                e.scrutinee.pos,
            )
        result: Type = fresh_var()
        seen: dict[str, tuple[int, int]] = {}
        for branch in e.branches:
            if branch.ctor not in self.ctor_union:
                suggestions = closest_names(branch.ctor, self.ctor_union.keys())
                hint = f"Did you mean '{suggestions[0]}'?" if suggestions else ""
                raise TypeCheckError(
                    "UnknownName",
                    f"There is no constructor called '{branch.ctor}'.",
                    hint,
                    branch.pos,
                )
            branch_union = self.ctor_union[branch.ctor]
            if union_name is None:
                union_name = branch_union
                self.unify(
                    UnionT(union_name),
                    scrut_t,
                    e.scrutinee.pos,
                    lambda exp, fnd: (
                        "Mismatch",
                        f"This case matches {exp}, but the value is a {fnd}.",
                    ),
                )
            elif branch_union != union_name:
                raise TypeCheckError(
                    "Mismatch",
                    f"{branch.ctor} belongs to {branch_union}, but this case is about {union_name}.",
                    "",
                    branch.pos,
                )
            if branch.ctor in seen:
                raise TypeCheckError(
                    "DuplicateBranch",
                    f"This case matches {branch.ctor} twice.",
                    "",
                    branch.pos,
                )
            seen[branch.ctor] = branch.pos
            arg_types = self.ctor_args[branch.ctor]
            if len(branch.binders) != len(arg_types):
                plural = "value" if len(arg_types) == 1 else "values"
                raise TypeCheckError(
                    "ArityError",
                    f"{branch.ctor} carries {len(arg_types)} {plural}, "
                    f"but this pattern names {len(branch.binders)}.",
                    "",
                    branch.pos,
                )
            branch_env = dict(env)
            branch_env.update(zip(branch.binders, arg_types))
            body_t = self.infer(branch.body, branch_env)
            self.unify(
                result,
                body_t,
                branch.body.pos,
                lambda exp, fnd: (
                    "Mismatch",
                    f"The branches of this case make different types: {exp} and {fnd}.",
                ),
            )
        assert union_name is not None
        missing = [c for c in self.union_ctors[union_name] if c not in seen]
        if missing:
            raise TypeCheckError(
                "NonExhaustiveCase",
                "This case is missing: " + ", ".join(missing),
                "Every constructor of " + union_name + " needs a branch.",
                e.pos,
            )
        return result

    # --- program-level checking ---------------------------------------------

    def _record(self, err: TypeCheckError, def_name: str) -> None:
        if def_name in self.errored_defs:
            return
        self.errored_defs.add(def_name)
        self.errors.append(err)

    def check(self) -> None:
        self.resolve_decls()

        for d in self.program.definitions:
            if d.params:
                self.assumptions[d.name] = FuncT(
                    tuple(fresh_var() for _ in d.params), fresh_var()
                )
            else:
                self.assumptions[d.name] = fresh_var()

        for d in self.program.definitions:
            self.current_def = d.name
            assumed = self.assumptions[d.name]
            try:
                if d.params:
                    assert isinstance(assumed, FuncT)
                    env = dict(zip(d.params, assumed.params))
                    body_t = self.infer(d.body, env)
                    self.unify(
                        assumed.result,
                        body_t,
                        d.body.pos,
                        lambda exp, fnd: (
                            "Mismatch",
                            f"{d.name} is used as a {exp}, but its body is a {fnd}.",
                        ),
                    )
                else:
                    body_t = self.infer(d.body, {})
                    self.unify(
                        assumed,
                        body_t,
                        d.body.pos,
                        lambda exp, fnd: (
                            "Mismatch",
                            f"{d.name} is used as a {exp}, but its body is a {fnd}.",
                        ),
                    )
            except TypeCheckError as err:
                self._record(err, d.name)

        self.current_def = "main"
        try:
            self._check_main()
        except TypeCheckError as err:
            self._record(err, "main")

        self._resolve_deferred()
        self._default_residuals()

    def _defined(self, name: str, what: str, pos) -> Type:
        if name not in self.assumptions:
            raise TypeCheckError(
                "BadMain",
                f"main's {what} must name a definition; there is no '{name}'.",
                "",
                pos,
            )
        return self.assumptions[name]

    def _check_main(self) -> None:
        form = self.program.main_form
        if isinstance(form, GraphicsApp):
            view_t = self.infer(form.view, {})
            self.unify(
                CollageT(fresh_var()),
                view_t,
                form.pos,
                lambda exp, fnd: (
                    "BadMain",
                    f"main's view must be a Collage, but found a {fnd}.",
                ),
            )
            return

        if isinstance(form, NotificationsApp):
            msg_t: Type = fresh_var()
        else:
            assert isinstance(form, GameApp)
            if form.tick_ctor not in self.ctor_union:
                raise TypeCheckError(
                    "BadMain",
                    f"There is no constructor called '{form.tick_ctor}' for gameApp to use.",
                    "Declare it like: type Msg = " + form.tick_ctor + " Float KeyState",
                    form.pos,
                )
            if self.ctor_args[form.tick_ctor] != [FLOAT, KEY_STATE]:
                raise TypeCheckError(
                    "BadMain",
                    f"gameApp's {form.tick_ctor} constructor must carry (Float, KeyState).",
                    "Declare it like: type Msg = " + form.tick_ctor + " Float KeyState",
                    form.pos,
                )
            msg_t = UnionT(self.ctor_union[form.tick_ctor])

        update_t = self._defined(form.update_name, "update", form.pos)
        view_t = self._defined(form.view_name, "view", form.pos)
        model_t = self.infer(form.model, {})

        m_var = fresh_var()
        self.unify(
            FuncT((msg_t, m_var), m_var),
            update_t,
            form.pos,
            lambda exp, fnd: (
                "BadMain",
                f"main's update must take a message and the model and return the model; "
                f"{form.update_name} is a {fnd}.",
            ),
        )
        resolved_msg = self.resolve(msg_t)
        if isinstance(resolved_msg, VarT):
            if len(self.union_ctors) == 1:
                only = next(iter(self.union_ctors))
                self._unify(resolved_msg, UnionT(only))
                resolved_msg = UnionT(only)
            else:
                raise TypeCheckError(
                    "BadMain",
                    f"I can't tell which message type {form.update_name} handles; "
                    "add a case on its first parameter.",
                    "",
                    form.pos,
                )
        if not isinstance(resolved_msg, UnionT):
            raise TypeCheckError(
                "BadMain",
                f"{form.update_name}'s first parameter must be a declared message type, "
                f"but it is a {message_name(resolved_msg)}.",
                "",
                form.pos,
            )
        self.msg_union = resolved_msg.name

        self.unify(
            m_var,
            model_t,
            form.pos,
            lambda exp, fnd: (
                "BadMain",
                f"main's model is a {fnd}, but {form.update_name} works on a {exp}.",
            ),
        )
        self.unify(
            FuncT((m_var,), CollageT(UnionT(self.msg_union))),
            view_t,
            form.pos,
            lambda exp, fnd: (
                "BadMain",
                f"main's view must turn the model into a Collage; "
                f"{form.view_name} is a {fnd}.",
            ),
        )

    def _resolve_deferred(self) -> None:
        pending = self.deferred
        while pending:
            progress = False
            rest: list[_FieldUse | _UpdateUse] = []
            for use in pending:
                if use.def_name in self.errored_defs:
                    progress = True
                    continue
                t = self.resolve(use.record_type)
                if isinstance(t, VarT):
                    rest.append(use)
                    continue
                progress = True
                try:
                    if not isinstance(t, RecordT):
                        raise TypeCheckError(
                            "Mismatch",
                            f"Only records have fields, but this is a {message_name(t)}.",
                            "",
                            use.pos,
                        )
                    if isinstance(use, _FieldUse):
                        field_t = self._check_access(t, use.field_name, use.pos)
                        self.unify(
                            use.result,
                            field_t,
                            use.pos,
                            lambda exp, fnd, _n=use.field_name: (
                                "Mismatch",
                                f"Field '{_n}' holds a {fnd}, but it is used as a {exp}.",
                            ),
                        )
                    else:
                        self._check_update(t, use.fields, use.base, use.pos)
                except TypeCheckError as err:
                    self._record(err, use.def_name)
            if not progress:
                break
            pending = rest
        for use in pending:
            if use.def_name in self.errored_defs:
                continue
            what = use.field_name if isinstance(use, _FieldUse) else use.base
            self._record(
                TypeCheckError(
                    "Mismatch",
                    f"I can't tell which record '{what}' belongs to.",
                    "Give the record a literal value somewhere, like { time = 0 }.",
                    use.pos,
                ),
                use.def_name,
            )

    def _default_residuals(self) -> None:
        if self.msg_union is not None:
            default: Type = UnionT(self.msg_union)
        elif len(self.union_ctors) == 1:
            default = UnionT(next(iter(self.union_ctors)))
        else:
            default = NO_MSG
        for name in self.assumptions:
            self._bind_residuals(self.assumptions[name], default)

    def _bind_residuals(self, t: Type, default: Type) -> None:
        t = self.resolve(t)
        if isinstance(t, VarT):
            self.subst[t.id] = default
            return
        if isinstance(t, (ShapeT, CollageT)):
            self._bind_residuals(t.msg, default)
        elif isinstance(t, ListT):
            self._bind_residuals(t.item, default)
        elif isinstance(t, Tuple2T):
            self._bind_residuals(t.first, default)
            self._bind_residuals(t.second, default)
        elif isinstance(t, RecordT):
            for _, v in t.fields:
                self._bind_residuals(v, default)
        elif isinstance(t, FuncT):
            for p in t.params:
                self._bind_residuals(p, default)
            self._bind_residuals(t.result, default)

    # --- lint ----------------------------------------------------------------

    def size_warnings(self) -> list[Diagnostic]:
        out: list[Diagnostic] = []

        def walk(e: Expr) -> None:
            if isinstance(e, App):
                if (
                    isinstance(e.func, Var)
                    and e.func.name == "size"
                    and len(e.args) >= 2
                    and isinstance(e.args[1], App)
                    and isinstance(e.args[1].func, Var)
                    and e.args[1].func.name in STENCIL_MAKERS
                ):
                    out.append(
                        Diagnostic(
                            "warning",
                            e.args[1].pos[0],
                            e.args[1].pos[1],
                            "size only changes text; this stencil stays the same.",
                            "Apply size to a text stencil.",
                        )
                    )
                walk(e.func)
                for a in e.args:
                    walk(a)
                return
            for child in _children(e):
                walk(child)

        for d in self.program.definitions:
            walk(d.body)
        form = self.program.main_form
        if isinstance(form, GraphicsApp):
            walk(form.view)
        else:
            walk(form.model)
        return out


def _children(e: Expr) -> list[Expr]:
    if isinstance(e, (NumberLit, StringLit, BoolLit, Var)):
        return []
    if isinstance(e, (TupleLit, ListLit)):
        return list(e.items)
    if isinstance(e, RecordLit):
        return list(e.fields.values())
    if isinstance(e, RecordUpdate):
        return list(e.fields.values())
    if isinstance(e, FieldAccess):
        return [e.record]
    if isinstance(e, App):
        return [e.func] + list(e.args)
    if isinstance(e, BinOp):
        return [e.left, e.right]
    if isinstance(e, If):
        return [e.cond, e.then, e.orelse]
    if isinstance(e, Case):
        return [e.scrutinee] + [b.body for b in e.branches]
    if isinstance(e, Negate):
        return [e.operand]
    if isinstance(e, Pipeline):
        return [e.value, e.func]
    raise AssertionError(f"unhandled expr {e!r}")


def check_program(program: Program) -> CheckOutput:
    """Infer every definition and check app-form conformance.

    The program must already be desugared.
    """
    checker = _Checker(program)
    checker.check()
    diagnostics = [err.diagnostic() for err in checker.errors]
    warnings = checker.size_warnings()
    if diagnostics:
        merged = sorted(diagnostics + warnings, key=lambda d: (d.line, d.column))
        return CheckOutput(None, merged)
    def_types = {name: checker.apply(t) for name, t in checker.assumptions.items()}
    typed = TypedProgram(
        program=program,
        def_types=def_types,
        ctor_arity={name: len(args) for name, args in checker.ctor_args.items()},
        ctor_union=dict(checker.ctor_union),
        union_ctors=dict(checker.union_ctors),
        msg_union=checker.msg_union,
    )
    return CheckOutput(typed, warnings)
