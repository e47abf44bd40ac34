"""Tokenizer and recursive-descent parser for the literal expression syntax.

Scalars are written with integers, ``p/q`` fractions and roots of unity
``z(N)`` (optionally raised to integer powers).  Paths are written head-first
with ``.`` between arrow names, and trivial paths as ``e(v)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable

NAME_CHARS = r"A-Za-z0-9_'#>"
_TOKEN_RE = re.compile(
    rf"(?P<ws>\s+)|(?P<num>\d+(?![{NAME_CHARS}]))|(?P<name>[{NAME_CHARS}]+)|(?P<op>[-+*/^().,])"
)


class ParseError(ValueError):
    def __init__(self, message: str, *, source: str = "<input>", line: int = 1,
                 column: int = 1, expected: str | None = None):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        self.expected = expected
        text = f"{source}:{line}:{column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    column: int


def tokenize(text: str, *, source: str = "<input>", line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", source=source,
                             line=line, column=pos + 1, expected="a name, number or operator")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class Builder:
    """Semantic actions used by the parser.  Subclasses pick the value domain."""

    def number(self, value: int) -> Any:
        raise NotImplementedError

    def zeta(self, order: int) -> Any:
        raise NotImplementedError

    def trivial(self, vertex: str) -> Any:
        raise NotImplementedError

    def path(self, names: list[str]) -> Any:
        raise NotImplementedError


class _Parser:
    def __init__(self, text: str, builder: Builder, source: str, line: int):
        self.tokens = tokenize(text, source=source, line=line)
        self.i = 0
        self.builder = builder
        self.source = source
        self.line = line

    def error(self, message: str, expected: str | None = None, token: Token | None = None):
        tok = token or self.peek()
        return ParseError(message, source=self.source, line=self.line,
                          column=tok.column, expected=expected)

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            tok = self.peek()
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", repr(text))

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "num":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", "an integer")
        self.i += 1
        return int(tok.text)

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}", "an operator or end of input")
        return value

    def expr(self):
        if self.accept("-"):
            value = -self.term()
        else:
            self.accept("+")
            value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.accept("/"):
                tok = self.peek()
                divisor = self.unary()
                try:
                    value = value / divisor
                except (TypeError, ZeroDivisionError) as exc:
                    raise self.error(f"cannot divide: {exc}", "a nonzero scalar divisor", tok)
            else:
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            negative = self.accept("-")
            tok = self.peek()
            exponent = self.expect_int()
            if negative:
                exponent = -exponent
            try:
                return base ** exponent
            except (TypeError, ZeroDivisionError, ValueError) as exc:
                raise self.error(f"cannot raise to power: {exc}", None, tok)
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return self.builder.number(int(tok.text))
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind == "name":
            nxt = self.tokens[self.i + 1]
            if tok.text in ("z", "e") and nxt.kind == "op" and nxt.text == "(":
                self.i += 2
                if tok.text == "z":
                    order = self.expect_int()
                    self.expect(")")
                    if order < 1:
                        raise self.error("root of unity order must be positive", None, tok)
                    return self.builder.zeta(order)
                arg = self.take()
                if arg.kind not in ("name", "num"):
                    raise self.error(f"unexpected {arg.text or 'end of input'!r}", "a vertex label", arg)
                self.expect(")")
                return self._wrap(lambda: self.builder.trivial(arg.text), arg)
            names = [self.take().text]
            while self.accept("."):
                nt = self.peek()
                if nt.kind not in ("name", "num"):
                    raise self.error(f"unexpected {nt.text or 'end of input'!r}", "an arrow name")
                names.append(self.take().text)
            return self._wrap(lambda: self.builder.path(names), tok)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}", "a number, path or '('")

    def _wrap(self, fn: Callable[[], Any], tok: Token):
        try:
            return fn()
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            msg = exc.args[0] if exc.args else str(exc)
            raise self.error(str(msg), None, tok)


def parse(text: str, builder: Builder, *, source: str = "<input>", line: int = 1):
    return _Parser(text, builder, source, line).parse()
