"""
多项式表达式解析

文法（递归下降）:
    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*        '/' 的除数必须是非零常数
    unary  := ('+'|'-') unary | power
    power  := atom ('^' uint)?
    atom   := number | 'i' | 'z' | '(' expr ')'

数值在解析过程中以低次在前的系数数组表示，借助 numpy.polynomial 做加减乘幂。
"""

import re
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.polynomial import polynomial as P

from ..core.exceptions import ParseError
from .polynomial import Polynomial

MAX_EXPONENT = 1024

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[zi])"
    r"|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"无法识别的字符 {text[pos]!r}", text=text, position=pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Token = None) -> ParseError:
        token = token or self.current
        return ParseError(message, text=self.text, position=token.position)

    def _expect(self, text: str) -> Token:
        if self.current.text != text:
            found = self.current.text or "输入结束"
            raise self._error(f"期望 {text!r}, 实际为 {found!r}")
        return self._advance()

    def parse(self) -> np.ndarray:
        if self.current.kind == "end":
            raise self._error("空表达式")
        value = self.expr()
        if self.current.kind != "end":
            raise self._error(f"多余的符号 {self.current.text!r}")
        return value

    def expr(self) -> np.ndarray:
        value = self.term()
        while self.current.text in ("+", "-"):
            op = self._advance().text
            rhs = self.term()
            value = P.polyadd(value, rhs) if op == "+" else P.polysub(value, rhs)
        return value

    def term(self) -> np.ndarray:
        value = self.unary()
        while self.current.text in ("*", "/"):
            op_token = self._advance()
            rhs = self.unary()
            if op_token.text == "*":
                value = P.polymul(value, rhs)
                continue
            divisor = P.polytrim(rhs)
            if len(divisor) != 1:
                raise self._error("只能除以常数", op_token)
            if divisor[0] == 0:
                raise self._error("除数为零", op_token)
            value = value / divisor[0]
        return value

    def unary(self) -> np.ndarray:
        if self.current.text == "-":
            self._advance()
            return -self.unary()
        if self.current.text == "+":
            self._advance()
            return self.unary()
        return self.power()

    def power(self) -> np.ndarray:
        base = self.atom()
        if self.current.text != "^":
            return base
        self._advance()
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self._error("'^' 之后必须是非负整数")
        self._advance()
        exponent = int(token.text)
        if exponent > MAX_EXPONENT:
            raise self._error(f"指数过大 (上限 {MAX_EXPONENT})", token)
        return P.polypow(base, exponent, maxpower=MAX_EXPONENT)

    def atom(self) -> np.ndarray:
        token = self.current
        if token.kind == "number":
            self._advance()
            return np.array([complex(float(token.text))])
        if token.text == "i":
            self._advance()
            return np.array([1j])
        if token.text == "z":
            self._advance()
            return np.array([0j, 1 + 0j])
        if token.text == "(":
            self._advance()
            value = self.expr()
            self._expect(")")
            return value
        found = token.text or "输入结束"
        raise self._error(f"期望数字、'i'、'z' 或 '(', 实际为 {found!r}")


def parse_poly(text: str) -> Polynomial:
    """
    把表达式文本解析为多项式

    Raises:
        ParseError: 语法错误（带行列位置）、零多项式或常数多项式
    """
    parser = _Parser(text)
    low_first = P.polytrim(np.asarray(parser.parse(), dtype=np.complex128))
    if not np.any(low_first):
        raise ParseError("零多项式不是合法的多项式", text=text, position=len(text))
    if len(low_first) < 2:
        raise ParseError("多项式次数必须 ≥ 1", text=text, position=len(text))
    return Polynomial(tuple(low_first[::-1]))


def _format_coefficient(c: complex) -> str:
    if c.imag == 0:
        return repr(abs(c.real))
    if c.real == 0:
        return f"{abs(c.imag)!r}*i"
    sign = "-" if c.imag < 0 else "+"
    return f"({c.real!r} {sign} {abs(c.imag)!r}*i)"


def _leading_sign(c: complex) -> str:
    if c.imag == 0:
        return "-" if c.real < 0 else "+"
    if c.real == 0:
        return "-" if c.imag < 0 else "+"
    return "+"


def format_poly(p: Polynomial) -> str:
    """格式化为可被 parse_poly 精确还原的文本"""
    parts = []
    for power, c in zip(range(p.degree, -1, -1), p.coeffs):
        if c == 0:
            continue
        sign = _leading_sign(c)
        coefficient = _format_coefficient(c)
        if power == 0:
            body = coefficient
        else:
            monomial = "z" if power == 1 else f"z^{power}"
            body = monomial if coefficient == "1.0" else f"{coefficient}*{monomial}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)
