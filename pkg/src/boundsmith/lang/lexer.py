"""Hand-rolled lexer for the modeling language."""
from __future__ import annotations

from dataclasses import dataclass

from .ast import ParseError, Pos

KEYWORDS = {
    "sig", "abstract", "one", "lone", "some", "set", "all", "no", "extends",
    "pred", "fact", "run", "for", "in", "not", "and", "or", "implies", "iff",
    "none",
}

# longest match first
_PUNCT = [
    "<=>", "->", "!=", "<=", ">=", "&&", "||", "=>",
    "{", "}", "(", ")", ":", "|", ",", "+", "-", "&", ".", "~", "^", "*",
    "#", "=", "!", "<", ">",
]


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, EOF, keyword text, or punct text
    text: str
    pos: Pos
    offset: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def pos() -> Pos:
        return Pos(line, col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise ParseError("unterminated block comment", pos())
            for c in source[i : end + 2]:
                if c == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            i = end + 2
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            kind = text if text in KEYWORDS else "IDENT"
            tokens.append(Token(kind, text, pos(), start))
            col += i - start
            continue
        if ch.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("INT", source[start:i], pos(), start))
            col += i - start
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                tokens.append(Token(p, p, pos(), i))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", pos())
    tokens.append(Token("EOF", "", pos(), i))
    return tokens
