"""Tokenizer.

Layout is not tokenized; the parser reads the 1-based line/column
carried on every token (top-level items start at column 1, continuation
lines are indented, case branches align).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LexError

TWO_CHAR_SYMBOLS = ("|>", "->", "==", "<=", ">=")
ONE_CHAR_SYMBOLS = set("()[]{},.=|+-*/<>")

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass
class Token:
    kind: str  # ident | number | string | symbol | end
    lexeme: str
    line: int
    col: int
    value: object = field(default=None, compare=False)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    for line_no, raw_line in enumerate(source.split("\n"), start=1):
        line = raw_line.rstrip("\r")
        i = 0
        n = len(line)
        while i < n:
            c = line[i]
            col = i + 1
            if c in " \t":
                i += 1
                continue
            if line.startswith("--", i):
                break  # comment runs to end of line
            if c.isdigit():
                j = i + 1
                while j < n and line[j].isdigit():
                    j += 1
                if j < n and line[j] == "." and j + 1 < n and line[j + 1].isdigit():
                    j += 1
                    while j < n and line[j].isdigit():
                        j += 1
                if j < n and line[j] in "eE":
                    k = j + 1
                    if k < n and line[k] in "+-":
                        k += 1
                    if k < n and line[k].isdigit():
                        j = k + 1
                        while j < n and line[j].isdigit():
                            j += 1
                lexeme = line[i:j]
                tokens.append(Token("number", lexeme, line_no, col, float(lexeme)))
                i = j
                continue
            if c.isalpha():
                j = i + 1
                while j < n and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                tokens.append(Token("ident", line[i:j], line_no, col))
                i = j
                continue
            if c == '"':
                j = i + 1
                chars: list[str] = []
                while j < n:
                    if line[j] == '"':
                        tokens.append(Token("string", line[i : j + 1], line_no, col, "".join(chars)))
                        break
                    if line[j] == "\\":
                        if j + 1 < n and line[j + 1] in _ESCAPES:
                            chars.append(_ESCAPES[line[j + 1]])
                            j += 2
                            continue
                        raise LexError(f"Unknown escape in string: \\{line[j + 1: j + 2]}.", line_no, j + 1)
                    chars.append(line[j])
                    j += 1
                else:
                    raise LexError("Unterminated string literal.", line_no, col)
                i = j + 1
                continue
            two = line[i : i + 2]
            if two in TWO_CHAR_SYMBOLS:
                tokens.append(Token("symbol", two, line_no, col))
                i += 2
                continue
            if c in ONE_CHAR_SYMBOLS:
                tokens.append(Token("symbol", c, line_no, col))
                i += 1
                continue
            raise LexError(f"Unexpected character {c!r}.", line_no, col)
    return tokens
