"""Front-to-back compilation: tokens, syntax tree, desugaring, checking."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .ast import Program, desugar_program
from .errors import Diagnostic, LexError, ParseError
from .parser import parse_program
from .typecheck import TypedProgram, check_program


@dataclass
class CompiledProgram:
    source: str
    program_id: str
    typed: TypedProgram

    @property
    def program(self) -> Program:
        return self.typed.program


@dataclass
class CompileResult:
    compiled: CompiledProgram | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.compiled is not None


def program_id(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


def compile_source(source: str) -> CompileResult:
    """Compile source text; on failure the diagnostics say what went wrong."""
    try:
        program = parse_program(source)
    except (LexError, ParseError) as err:
        return CompileResult(None, [err.diagnostic()])
    except RecursionError:
        return CompileResult(
            None, [Diagnostic("error", 1, 1, "This program is nested too deeply.")]
        )
    program = desugar_program(program)
    output = check_program(program)
    if output.typed is None:
        return CompileResult(None, output.diagnostics)
    return CompileResult(
        CompiledProgram(source, program_id(source), output.typed), output.diagnostics
    )
