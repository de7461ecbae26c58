"""Recursive-descent parser.

Layout rules: a top-level item starts at column 1 and owns every token
up to the next column-1 token; case branches align at one column and
branch bodies sit strictly to the right of it. Brackets relax the body
rule back to plain continuation indentation.

Precedence, loosest to tightest: |>, comparisons, + -, * /, unary
minus, application.
"""

from __future__ import annotations

from .ast import (
    App,
    AppForm,
    BinOp,
    BoolLit,
    Case,
    CaseBranch,
    CtorDecl,
    Definition,
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
    TypeDecl,
    TypeRef,
    Var,
)
from .errors import ParseError
from .lexer import Token, tokenize
from .prelude import BUILTIN_NAMES

KEYWORDS = frozenset({"type", "if", "then", "else", "case", "of"})

# type names students may not redeclare
RESERVED_TYPE_NAMES = frozenset(
    {"Float", "String", "Bool", "Color", "LineType", "Stencil", "Shape",
     "Collage", "KeyState", "NoMsg"}
)

_MUL_OPS = frozenset({"*", "/"})
_ADD_OPS = frozenset({"+", "-"})
_CMP_OPS = frozenset({"==", "<", "<=", ">", ">="})


def _describe(tok: Token) -> str:
    if tok.kind == "end":
        return "the end of the definition"
    if tok.kind == "string":
        return "a string"
    return f"'{tok.lexeme}'"


def _fail(message: str, tok: Token, expected: list[str] | None = None) -> None:
    raise ParseError(message, tok.line, tok.col, expected or [])


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.min_cols = [2]
        self.in_item = False

    # --- token access -------------------------------------------------------

    def _raw(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _end_token(self) -> Token:
        if self.tokens:
            last = self.tokens[min(self.i, len(self.tokens) - 1)]
            return Token("end", "", last.line, last.col)
        return Token("end", "", 1, 1)

    def peek(self) -> Token:
        tok = self._raw()
        if tok is None:
            return self._end_token()
        if self.in_item and tok.col < self.min_cols[-1]:
            return Token("end", "", tok.line, tok.col)
        return tok

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect_symbol(self, sym: str) -> Token:
        tok = self.peek()
        if tok.kind == "symbol" and tok.lexeme == sym:
            return self.advance()
        _fail(f"Expected '{sym}', found {_describe(tok)}.", tok, [f"'{sym}'"])

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind == "ident" and tok.lexeme == word:
            return self.advance()
        _fail(f"Expected '{word}', found {_describe(tok)}.", tok, [f"'{word}'"])

    def expect_lower_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind == "ident" and tok.lexeme not in KEYWORDS and tok.lexeme[0].islower():
            return self.advance()
        _fail(f"Expected {what}, found {_describe(tok)}.", tok, [what])

    def expect_upper_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind == "ident" and tok.lexeme[0].isupper():
            return self.advance()
        _fail(f"Expected {what}, found {_describe(tok)}.", tok, [what])

    # --- expressions ----------------------------------------------------------

    def parse_expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "ident" and tok.lexeme == "if":
            return self.parse_if()
        if tok.kind == "ident" and tok.lexeme == "case":
            return self.parse_case()
        return self.parse_pipeline()

    def parse_if(self) -> If:
        start = self.expect_keyword("if")
        cond = self.parse_expr()
        self.expect_keyword("then")
        then = self.parse_expr()
        self.expect_keyword("else")
        orelse = self.parse_expr()
        return If(cond, then, orelse, pos=(start.line, start.col))

    def parse_case(self) -> Case:
        start = self.expect_keyword("case")
        scrutinee = self.parse_expr()
        self.expect_keyword("of")
        first = self.peek()
        if first.kind != "ident" or not first.lexeme[0].isupper():
            _fail(
                f"Expected a case branch (a constructor name), found {_describe(first)}.",
                first,
                ["a constructor name"],
            )
        branch_col = first.col
        branches: list[CaseBranch] = []
        while True:
            tok = self.peek()
            if tok.kind != "ident" or tok.col != branch_col or not tok.lexeme[0].isupper():
                break
            branches.append(self._parse_branch(branch_col))
        return Case(scrutinee, branches, pos=(start.line, start.col))

    def _parse_branch(self, branch_col: int) -> CaseBranch:
        ctor = self.advance()
        binders: list[str] = []
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "->":
                break
            if tok.kind == "ident" and tok.lexeme not in KEYWORDS:
                if not tok.lexeme[0].islower():
                    _fail("Pattern variables must be lowercase names.", tok)
                if tok.lexeme in binders:
                    _fail(f"Pattern variable '{tok.lexeme}' is repeated.", tok)
                binders.append(tok.lexeme)
                self.advance()
                continue
            _fail(f"Expected '->' or a pattern variable, found {_describe(tok)}.", tok, ["'->'"])
        self.expect_symbol("->")
        self.min_cols.append(branch_col + 1)
        try:
            body = self.parse_expr()
        finally:
            self.min_cols.pop()
        return CaseBranch(ctor.lexeme, binders, body, pos=(ctor.line, ctor.col))

    def parse_pipeline(self) -> Expr:
        left = self.parse_compare()
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "|>":
                self.advance()
                right = self.parse_compare()
                left = Pipeline(left, right, pos=(tok.line, tok.col))
            else:
                return left

    def _parse_binop_level(self, ops: frozenset[str], next_level) -> Expr:
        left = next_level()
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme in ops:
                self.advance()
                right = next_level()
                left = BinOp(tok.lexeme, left, right, pos=(tok.line, tok.col))
            else:
                return left

    def parse_compare(self) -> Expr:
        return self._parse_binop_level(_CMP_OPS, self.parse_add)

    def parse_add(self) -> Expr:
        return self._parse_binop_level(_ADD_OPS, self.parse_mul)

    def parse_mul(self) -> Expr:
        return self._parse_binop_level(_MUL_OPS, self.parse_unary)

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "symbol" and tok.lexeme == "-":
            self.advance()
            operand = self.parse_unary()
            if isinstance(operand, NumberLit):
                return NumberLit(-operand.value, pos=(tok.line, tok.col))
            return Negate(operand, pos=(tok.line, tok.col))
        return self.parse_app()

    def parse_app(self) -> Expr:
        head = self.parse_atom()
        if not isinstance(head, (Var, FieldAccess, App, If, Case)):
            return head
        args: list[Expr] = []
        while self._starts_atom():
            args.append(self.parse_atom())
        if args:
            return App(head, args, pos=head.pos)
        return head

    def _starts_atom(self) -> bool:
        tok = self.peek()
        if tok.kind in ("number", "string"):
            return True
        if tok.kind == "ident":
            return tok.lexeme not in KEYWORDS
        return tok.kind == "symbol" and tok.lexeme in ("(", "[", "{")

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            expr: Expr = NumberLit(tok.value, pos=(tok.line, tok.col))
        elif tok.kind == "string":
            self.advance()
            expr = StringLit(tok.value, pos=(tok.line, tok.col))
        elif tok.kind == "ident":
            if tok.lexeme in ("True", "False"):
                self.advance()
                expr = BoolLit(tok.lexeme == "True", pos=(tok.line, tok.col))
            elif tok.lexeme in KEYWORDS:
                _fail(f"Expected an expression, found {_describe(tok)}.", tok, ["an expression"])
            else:
                self.advance()
                expr = Var(tok.lexeme, pos=(tok.line, tok.col))
        elif tok.kind == "symbol" and tok.lexeme == "(":
            expr = self._parse_parenthesized()
        elif tok.kind == "symbol" and tok.lexeme == "[":
            expr = self._parse_list()
        elif tok.kind == "symbol" and tok.lexeme == "{":
            expr = self._parse_record()
        else:
            _fail(f"Expected an expression, found {_describe(tok)}.", tok, ["an expression"])
        # postfix field access binds tighter than anything else
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == ".":
                self.advance()
                name = self.expect_lower_ident("a field name")
                expr = FieldAccess(expr, name.lexeme, pos=(name.line, name.col))
            else:
                return expr

    def _parse_parenthesized(self) -> Expr:
        open_tok = self.expect_symbol("(")
        self.min_cols.append(2)
        try:
            first = self.parse_expr()
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == ",":
                self.advance()
                second = self.parse_expr()
                after = self.peek()
                if after.kind == "symbol" and after.lexeme == ",":
                    _fail("Tuples have exactly two components.", after)
                self.expect_symbol(")")
                return TupleLit([first, second], pos=(open_tok.line, open_tok.col))
            if tok.kind == "symbol" and tok.lexeme == ")":
                self.advance()
                return first
            _fail(f"Expected ',' or ')', found {_describe(tok)}.", tok, ["','", "')'"])
        finally:
            self.min_cols.pop()

    def _parse_list(self) -> ListLit:
        open_tok = self.expect_symbol("[")
        self.min_cols.append(2)
        try:
            items: list[Expr] = []
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "]":
                self.advance()
                return ListLit(items, pos=(open_tok.line, open_tok.col))
            while True:
                items.append(self.parse_expr())
                tok = self.peek()
                if tok.kind == "symbol" and tok.lexeme == ",":
                    self.advance()
                    continue
                if tok.kind == "symbol" and tok.lexeme == "]":
                    self.advance()
                    return ListLit(items, pos=(open_tok.line, open_tok.col))
                _fail(f"Expected ',' or ']', found {_describe(tok)}.", tok, ["','", "']'"])
        finally:
            self.min_cols.pop()

    def _parse_record(self) -> Expr:
        open_tok = self.expect_symbol("{")
        pos = (open_tok.line, open_tok.col)
        self.min_cols.append(2)
        try:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "}":
                self.advance()
                return RecordLit({}, pos=pos)
            first = self.expect_lower_ident("a field name")
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "|":
                self.advance()
                fields = self._parse_field_list()
                self.expect_symbol("}")
                return RecordUpdate(first.lexeme, fields, pos=pos)
            self.expect_symbol("=")
            fields = {first.lexeme: self.parse_expr()}
            while True:
                tok = self.peek()
                if tok.kind == "symbol" and tok.lexeme == ",":
                    self.advance()
                    name = self.expect_lower_ident("a field name")
                    if name.lexeme in fields:
                        _fail(f"Field '{name.lexeme}' is repeated.", name)
                    self.expect_symbol("=")
                    fields[name.lexeme] = self.parse_expr()
                    continue
                self.expect_symbol("}")
                return RecordLit(fields, pos=pos)
        finally:
            self.min_cols.pop()

    def _parse_field_list(self) -> dict[str, Expr]:
        fields: dict[str, Expr] = {}
        while True:
            name = self.expect_lower_ident("a field name")
            if name.lexeme in fields:
                _fail(f"Field '{name.lexeme}' is repeated.", name)
            self.expect_symbol("=")
            fields[name.lexeme] = self.parse_expr()
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == ",":
                self.advance()
                continue
            return fields

    # --- declarations ---------------------------------------------------------

    def parse_type_decl(self) -> TypeDecl:
        start = self.advance()  # 'type'
        self.in_item = True
        name = self.expect_upper_ident("a type name (starting uppercase)")
        self.expect_symbol("=")
        ctors = [self._parse_ctor()]
        while True:
            tok = self.peek()
            if tok.kind == "symbol" and tok.lexeme == "|":
                self.advance()
                ctors.append(self._parse_ctor())
            else:
                break
        return TypeDecl(name.lexeme, ctors, pos=(start.line, start.col))

    def _parse_ctor(self) -> CtorDecl:
        name = self.expect_upper_ident("a constructor name")
        arg_types: list[TypeRef] = []
        while True:
            tok = self.peek()
            if tok.kind == "ident" and tok.lexeme[0].isupper():
                self.advance()
                arg_types.append(tok.lexeme)
                continue
            if tok.kind == "symbol" and tok.lexeme == "(":
                self.advance()
                first = self.expect_upper_ident("a type name")
                self.expect_symbol(",")
                second = self.expect_upper_ident("a type name")
                self.expect_symbol(")")
                arg_types.append((first.lexeme, second.lexeme))
                continue
            if tok.kind == "ident" and tok.lexeme not in KEYWORDS:
                _fail("Expected a type name (starting uppercase).", tok)
            return CtorDecl(name.lexeme, arg_types, pos=(name.line, name.col))

    def parse_definition(self) -> Definition:
        name = self.advance()
        self.in_item = True
        if name.lexeme in KEYWORDS or not name.lexeme[0].islower():
            _fail("Definitions start with a lowercase name.", name)
        params: list[str] = []
        while True:
            tok = self.peek()
            if tok.kind == "ident" and tok.lexeme not in KEYWORDS:
                if not tok.lexeme[0].islower():
                    _fail("Parameters must be lowercase names.", tok)
                if tok.lexeme in params:
                    _fail(f"Parameter '{tok.lexeme}' is repeated.", tok)
                params.append(tok.lexeme)
                self.advance()
                continue
            break
        self.expect_symbol("=")
        body = self.parse_expr()
        tok = self.peek()
        if tok.kind != "end":
            _fail(
                f"Expected an operator or the end of the definition, found {_describe(tok)}.",
                tok,
            )
        return Definition(name.lexeme, params, body, pos=(name.line, name.col))

    # --- main forms -------------------------------------------------------------

    def parse_app_form(self) -> AppForm:
        tok = self.peek()
        if tok.kind != "ident" or tok.lexeme not in ("graphicsApp", "notificationsApp", "gameApp"):
            _fail(
                "main must be graphicsApp, notificationsApp, or gameApp.",
                tok,
                ["graphicsApp", "notificationsApp", "gameApp"],
            )
        self.advance()
        pos = (tok.line, tok.col)
        if tok.lexeme == "graphicsApp":
            fields = self._parse_form_fields({"view": "expr"})
            return GraphicsApp(fields["view"], pos=pos)
        if tok.lexeme == "notificationsApp":
            fields = self._parse_form_fields({"model": "expr", "view": "name", "update": "name"})
            return NotificationsApp(fields["model"], fields["view"], fields["update"], pos=pos)
        ctor = self.expect_upper_ident("the name of your Tick constructor")
        fields = self._parse_form_fields({"model": "expr", "view": "name", "update": "name"})
        return GameApp(ctor.lexeme, fields["model"], fields["view"], fields["update"], pos=pos)

    def _parse_form_fields(self, wanted: dict[str, str]) -> dict:
        open_tok = self.expect_symbol("{")
        self.min_cols.append(2)
        try:
            out: dict = {}
            while True:
                name = self.expect_lower_ident("a field name")
                if name.lexeme not in wanted:
                    _fail(
                        f"main does not take a field called '{name.lexeme}'.",
                        name,
                        sorted(wanted),
                    )
                if name.lexeme in out:
                    _fail(f"Field '{name.lexeme}' is repeated.", name)
                self.expect_symbol("=")
                if wanted[name.lexeme] == "expr":
                    out[name.lexeme] = self.parse_expr()
                else:
                    out[name.lexeme] = self.expect_lower_ident("a definition name").lexeme
                tok = self.peek()
                if tok.kind == "symbol" and tok.lexeme == ",":
                    self.advance()
                    continue
                self.expect_symbol("}")
                break
            for key in wanted:
                if key not in out:
                    _fail(f"main is missing '{key} = ...'.", open_tok, [key])
            return out
        finally:
            self.min_cols.pop()


def parse_program(source: str) -> Program:
    tokens = tokenize(source)
    parser = _Parser(tokens)
    type_decls: list[TypeDecl] = []
    definitions: list[Definition] = []
    main_form: AppForm | None = None

    while True:
        parser.in_item = False
        tok = parser._raw()
        if tok is None:
            break
        if tok.col != 1:
            _fail("Top-level definitions must start at column 1.", tok)
        if tok.kind == "ident" and tok.lexeme == "type":
            type_decls.append(parser.parse_type_decl())
        elif tok.kind == "ident" and tok.lexeme == "main":
            name = parser.advance()
            parser.in_item = True
            if main_form is not None:
                _fail("main is defined twice.", name)
            after = parser.peek()
            if after.kind == "ident":
                _fail("main takes no parameters.", after)
            parser.expect_symbol("=")
            main_form = parser.parse_app_form()
            trailing = parser.peek()
            if trailing.kind != "end":
                _fail(
                    f"Expected the end of main, found {_describe(trailing)}.",
                    trailing,
                )
        elif tok.kind == "ident":
            definitions.append(parser.parse_definition())
        else:
            _fail(f"Expected a definition, found {_describe(tok)}.", tok, ["a definition"])

    _validate(type_decls, definitions, main_form, tokens)
    assert main_form is not None
    return Program(type_decls, definitions, main_form)


def _validate(
    type_decls: list[TypeDecl],
    definitions: list[Definition],
    main_form: AppForm | None,
    tokens: list[Token],
) -> None:
    if main_form is None:
        line = tokens[-1].line if tokens else 1
        raise ParseError("This program has no main definition.", line, 1, ["main"])

    seen_types: set[str] = set()
    seen_ctors: set[str] = set()
    for decl in type_decls:
        if decl.name in RESERVED_TYPE_NAMES:
            _fail_at(f"'{decl.name}' is a builtin type name and cannot be redeclared.", decl.pos)
        if decl.name in seen_types:
            _fail_at(f"Type '{decl.name}' is declared twice.", decl.pos)
        seen_types.add(decl.name)
        for ctor in decl.ctors:
            if ctor.name in ("True", "False"):
                _fail_at(f"'{ctor.name}' is reserved.", ctor.pos)
            if ctor.name in seen_ctors:
                _fail_at(f"Constructor '{ctor.name}' is declared twice.", ctor.pos)
            seen_ctors.add(ctor.name)

    seen_defs: set[str] = set()
    for d in definitions:
        if d.name == "main":
            _fail_at("main is defined twice.", d.pos)
        if d.name in BUILTIN_NAMES:
            _fail_at(f"'{d.name}' is a builtin name and cannot be redefined.", d.pos)
        if d.name in seen_defs:
            _fail_at(f"'{d.name}' is defined twice.", d.pos)
        seen_defs.add(d.name)


def _fail_at(message: str, pos: tuple[int, int]) -> None:
    raise ParseError(message, pos[0], pos[1], [])
