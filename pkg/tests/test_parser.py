"""
多项式表达式解析与格式化测试
"""

import pytest

from src.core.exceptions import ParseError
from src.poly import Polynomial, format_poly, parse_poly, tokenize


class TestParsePoly:
    """解析测试"""

    @pytest.mark.parametrize("text, coeffs", [
        ("z^2", (1, 0, 0)),
        ("z^2 - 2", (1, 0, -2)),
        ("(0.5)*z^3 + i*z", (0.5, 0, 1j, 0)),
        ("z^2/3", (1 / 3, 0, 0)),
        ("-z", (-1, 0)),
        ("(z+1)^2", (1, 2, 1)),
        ("2*(z - i)*z", (2, -2j, 0)),
        ("1e-3*z^2 + .5", (1e-3, 0, 0.5)),
    ])
    def test_examples(self, text, coeffs):
        """测试典型表达式"""
        assert parse_poly(text).coeffs == tuple(complex(c) for c in coeffs)

    def test_leading_zeros_stripped(self):
        """测试抵消后的首项被去掉"""
        p = parse_poly("z^3 + z^2 - z^3")
        assert p.degree == 2

    @pytest.mark.parametrize("text", ["", "z^", "z^2 +", "(z", "z)", "2 $ z", "z^-1", "z^1.5", "z/z", "z/0"])
    def test_syntax_errors(self, text):
        """测试语法错误"""
        with pytest.raises(ParseError):
            parse_poly(text)

    @pytest.mark.parametrize("text", ["0", "z - z", "3", "i"])
    def test_degenerate(self, text):
        """测试零多项式与常数"""
        with pytest.raises(ParseError):
            parse_poly(text)

    def test_error_position(self):
        """测试错误位置"""
        with pytest.raises(ParseError) as info:
            parse_poly("z^2 + $")
        assert info.value.position == 6
        assert info.value.column == 7

    def test_exponent_limit(self):
        """测试指数上限"""
        with pytest.raises(ParseError):
            parse_poly("z^2000")

    def test_tokenize(self):
        """测试词法分析"""
        kinds = [t.kind for t in tokenize("2.5*z^2")]
        assert kinds == ["number", "op", "name", "op", "number", "end"]


class TestFormatPoly:
    """格式化测试"""

    @pytest.mark.parametrize("text", [
        "z^2", "z^2 - 2", "(0.5)*z^3 + i*z", "z^2/3", "z^4", "-z^2 + (1 - 2*i)*z - 0.1",
        "1e-20*z^5 + 3*z", "-i*z^2 + 7",
    ])
    def test_round_trip(self, text):
        """测试格式化后再解析得到相同的系数"""
        p = parse_poly(text)
        assert parse_poly(format_poly(p)) == p

    def test_readable_output(self):
        """测试输出形式"""
        assert format_poly(Polynomial((1, 0, -2))) == "z^2 - 2.0"
        assert format_poly(Polynomial((-1, 1j, 0))) == "-z^2 + 1.0*i*z"
        assert str(Polynomial((0.5, 0, 0))) == "0.5*z^2"
