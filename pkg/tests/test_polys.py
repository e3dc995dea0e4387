import sympy
from hypothesis import given, settings, strategies as st

from strelkit import polys
from strelkit.exactla import GF, QQ

from _gen import random_invertible, rng


def charpoly_oracle(A):
    t = sympy.Symbol("t")
    c = sympy.Matrix(A.tolist()).charpoly(t).all_coeffs()
    return [QQ(sympy.Rational(x).p) / QQ(sympy.Rational(x).q) for x in reversed(c)]


def product(F, fs):
    out = [F.one]
    for f in fs:
        out = polys.mul(F, out, f)
    return out


def test_divmod_and_gcd():
    F = QQ
    a = [F(-1), F(0), F(1)]          # t^2 - 1
    b = [F(1), F(1)]                 # t + 1
    q, r = polys.divmod_(F, a, b)
    assert polys.trim(r) == [] and q == [F(-1), F(1)]
    assert polys.gcd(F, a, [F(1), F(-1)][::-1]) == [F(-1), F(1)]


def test_companion_round_trip():
    F = GF(5)
    f = [F(2), F(0), F(1)]           # t^2 + 2, irreducible mod 5
    assert polys.invariant_factors(F, polys.companion(F, f)) == [f]


def test_scalar_matrix_factors():
    F = QQ
    A = F.array([[2, 0], [0, 2]])
    assert polys.invariant_factors(F, A) == [[F(-2), F(1)], [F(-2), F(1)]]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_factors_multiply_to_charpoly(entries):
    F = QQ
    A = F.array([entries[i:i + 3] for i in (0, 3, 6)])
    fs = polys.invariant_factors(F, A)
    assert product(F, fs) == charpoly_oracle(A)
    for a, b in zip(fs, fs[1:]):
        assert polys.trim(polys.divmod_(F, b, a)[1]) == []


def test_similarity_invariance():
    F = GF(5)
    r = rng(3)
    for _ in range(30):
        A = F.random_matrix(r, 3, 3)
        S = random_invertible(F, r, 3)
        B = F.matmul(F.matmul(S, A), F.inverse(S))
        assert polys.invariant_factors(F, A) == polys.invariant_factors(F, B)
