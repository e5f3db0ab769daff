"""Tokenizer shared by the FLIF and FO parsers."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import FlifSyntaxError

TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|\|\||[();,=|\-&!.\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "string", "op", "eof"
    text: str
    pos: int

    @property
    def value(self) -> str:
        if self.kind == "string":
            return json.loads(self.text)
        return self.text


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise FlifSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "string":
                try:
                    json.loads(m.group())
                except json.JSONDecodeError:
                    raise FlifSyntaxError("malformed string constant", text, pos) from None
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def quote(constant: str) -> str:
    return json.dumps(constant, ensure_ascii=False)


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind == "op" and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not (tok.kind == "op" and tok.text == text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def ident(self, what: str = "identifier") -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.next().text

    def error(self, message: str, tok: Token | None = None, cls=FlifSyntaxError):
        tok = tok or self.peek()
        raise cls(message, self.text, tok.pos)

    def end(self):
        if self.peek().kind != "eof":
            self.error(f"unexpected trailing input {self.peek().text!r}")
