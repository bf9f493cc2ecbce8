"""Parser for the text syntax of U(sv) elements.

Grammar (whitespace is ignored)::

    expr    := [sign] term (sign term)*
    term    := coeff ['*' product] | product
    coeff   := INT ['/' INT]
    product := factor ('*' factor)*
    factor  := GEN ['^' INT]
    GEN     := ('L' | 'M' | 'Y') ['+' | '-'] DIGITS      -- Y<n> is Y_{n+1/2}
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, NamedTuple, Tuple

from .lie import Generator
from .pbw import UEAElement, normal_form


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Token(NamedTuple):
    kind: str
    text: str
    pos: int


_GEN = re.compile(r"[LMY][+-]?\d+")
_INT = re.compile(r"\d+")


def tokenize(text: str) -> List[Token]:
    text = text.replace("−", "-")
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "LMY":
            m = _GEN.match(text, i)
            if not m:
                raise ExpressionError(f"malformed generator {text[i:i + 3]!r}", i)
            tokens.append(Token("GEN", m.group(), i))
            i = m.end()
        elif ch.isdigit():
            m = _INT.match(text, i)
            tokens.append(Token("INT", m.group(), i))
            i = m.end()
        elif ch in "+-*/^":
            tokens.append(Token(ch, ch, i))
            i += 1
        else:
            raise ExpressionError(f"unknown token {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, kind=None):
        if self.i < len(self.tokens):
            tok = self.tokens[self.i]
            if kind is None or tok.kind == kind:
                return tok
        return None

    def take(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise ExpressionError(f"expected {kind}, got end of input", len(self.text))
        if tok.kind != kind:
            raise ExpressionError(f"expected {kind}, got {tok.text!r}", tok.pos)
        self.i += 1
        return tok

    def expr(self) -> List[Tuple[Fraction, List[Generator]]]:
        if not self.tokens:
            raise ExpressionError("empty expression", 0)
        terms = []
        sign = 1
        if self.peek("+") or self.peek("-"):
            sign = -1 if self.take(self.peek().kind).kind == "-" else 1
        terms.append(self.term(sign))
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind not in "+-":
                raise ExpressionError(f"expected '+' or '-', got {tok.text!r}", tok.pos)
            self.i += 1
            terms.append(self.term(-1 if tok.kind == "-" else 1))
        return terms

    def term(self, sign: int):
        coeff = Fraction(sign)
        word: List[Generator] = []
        if self.peek("INT"):
            num = int(self.take("INT").text)
            den = 1
            if self.peek("/"):
                self.i += 1
                tok = self.take("INT")
                den = int(tok.text)
                if den == 0:
                    raise ExpressionError("zero denominator", tok.pos)
            coeff *= Fraction(num, den)
            if not self.peek("*"):
                return coeff, word
            self.i += 1
        word.extend(self.factor())
        while self.peek("*"):
            self.i += 1
            word.extend(self.factor())
        return coeff, word

    def factor(self) -> List[Generator]:
        tok = self.take("GEN")
        g = Generator(tok.text[0], int(tok.text[1:]))
        if self.peek("^"):
            self.i += 1
            return [g] * int(self.take("INT").text)
        return [g]


def parse_product(text: str) -> List[Generator]:
    """Parse a bare product of factors (``*`` or whitespace separated)."""
    out: List[Generator] = []
    for chunk in re.split(r"[\s*]+", text.strip()):
        if not chunk or chunk == "1":
            continue
        base, _, exp = chunk.partition("^")
        m = _GEN.fullmatch(base)
        if not m or (exp and not exp.isdigit()):
            raise ExpressionError(f"bad factor {chunk!r}", text.find(chunk))
        out.extend([Generator(base[0], int(base[1:]))] * (int(exp) if exp else 1))
    return out


def parse_word(text: str) -> Tuple[Generator, ...]:
    return tuple(parse_product(text))


def parse_expression(text: str) -> UEAElement:
    """Parse ``text`` and return the normal form of the expression."""
    acc = UEAElement.zero()
    for coeff, word in _Parser(text).expr():
        acc = acc + normal_form(word, coeff)
    return acc


def parse_lie(text: str):
    """Parse a linear combination of single generators into a LieElement."""
    from .lie import LieElement

    pairs = []
    for coeff, word in _Parser(text).expr():
        if len(word) > 1:
            raise ExpressionError("products are not Lie elements", 0)
        if word:
            pairs.append((word[0], coeff))
        elif coeff:
            raise ExpressionError("scalar term in a Lie element", 0)
    return LieElement(pairs)
