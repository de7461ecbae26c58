from __future__ import annotations

from pathlib import Path

import pytest

from shapelab.compiler import CompiledProgram, compile_source
from shapelab.errors import Diagnostic

CORPUS = Path(__file__).parent / "corpus"


def corpus_source(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


def compile_ok(source: str) -> CompiledProgram:
    result = compile_source(source)
    assert result.ok, "\n".join(d.render() for d in result.diagnostics)
    return result.compiled


def compile_errors(source: str) -> list[Diagnostic]:
    result = compile_source(source)
    assert not result.ok, "expected errors, program compiled"
    return result.diagnostics


def first_error(source: str) -> Diagnostic:
    return compile_errors(source)[0]


@pytest.fixture
def corpus():
    return corpus_source


@pytest.fixture
def compiled_corpus():
    def load(name: str) -> CompiledProgram:
        return compile_ok(corpus_source(name))

    return load
