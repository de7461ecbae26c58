"""A tiny shape language for teaching graphics: parser, checker, SVG renderer,
interactive runtime, HTTP service, and CLI."""

__version__ = "0.1.0"

from .compiler import CompiledProgram, compile_source
from .errors import Diagnostic

__all__ = ["CompiledProgram", "compile_source", "Diagnostic", "__version__"]
