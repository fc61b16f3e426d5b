import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from src.qpn.signs import Sign, combine_all, product_of, sign_combine, sign_product

P, M, Z, A = Sign.PLUS, Sign.MINUS, Sign.ZERO, Sign.AMBIGUOUS


class TestSignAlgebra:
    @pytest.mark.parametrize("a, b, expected", [
        (P, P, P), (P, M, M), (M, M, P),
        (Z, A, Z), (A, M, A), (P, Z, Z),
    ])
    def test_product(self, a, b, expected):
        assert sign_product(a, b) == expected
        assert sign_product(b, a) == expected

    @pytest.mark.parametrize("a, b, expected", [
        (P, P, P), (P, M, A), (Z, M, M),
        (Z, Z, Z), (A, Z, A), (A, P, A),
    ])
    def test_combine(self, a, b, expected):
        assert sign_combine(a, b) == expected
        assert sign_combine(b, a) == expected

    def test_folds(self):
        assert product_of([]) == P
        assert product_of([M, M, M]) == M
        assert combine_all([]) == Z
        assert combine_all([Z, P, Z]) == P
        assert combine_all([P, M]) == A

    def test_parse(self):
        assert Sign.parse("+") == P
        assert Sign.parse(" minus ") == M
        assert Sign.parse("Ambiguous") == A
        assert Sign.parse("0") == Z
        with pytest.raises(ValueError):
            Sign.parse("up")
