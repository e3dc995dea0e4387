from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strelkit import exactla as la
from strelkit.exactla import GF, QQ, Subspace

FIELDS = [QQ, GF(2), GF(5)]


def small_matrix(max_rows=4, max_cols=4):
    return st.integers(0, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                               min_size=m, max_size=m).map(lambda rows: (rows, n))))


def test_parse_and_field_spec():
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert GF(5).parse("7") == 2
    assert GF(5).parse("1/2") == 3
    assert la.field_from_spec("F 7") == GF(7)
    assert la.field_name(GF(7)) == "F 7"
    with pytest.raises(ValueError):
        la.field_from_spec("R")


def test_rref_known():
    r, piv = QQ.rref(QQ.array([[2, 4], [1, 2]]))
    assert piv == [0]
    assert r.tolist() == [[1, 2]]


def test_inverse_rationals():
    a = QQ.array([[1, 2], [3, 4]])
    assert np.array_equal(QQ.matmul(a, QQ.inverse(a)), QQ.eye(2))
    with pytest.raises(ZeroDivisionError):
        QQ.inverse(QQ.array([[1, 2], [2, 4]]))


def test_integer_matmul_matches_fractions():
    a = QQ.array([["1/2", 3], [-2, "5/7"]])
    b = QQ.array([["2/3", 0], [1, "-1/5"]])
    expect = [[sum(a[i, k] * b[k, j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert QQ.matmul(a, b).tolist() == expect


@pytest.mark.parametrize("f", FIELDS, ids=str)
@settings(max_examples=60, deadline=None)
@given(data=small_matrix())
def test_kernel_and_rank(f, data):
    rows, n = data
    a = f.array(rows, (len(rows), n))
    k = f.kernel(a)
    assert k.shape[0] == n - f.rank(a)
    if a.shape[0] and k.shape[0]:
        assert not np.any(f.matmul(a, k.T))


@pytest.mark.parametrize("f", FIELDS, ids=str)
@settings(max_examples=60, deadline=None)
@given(d1=small_matrix(3, 4), d2=small_matrix(3, 4))
def test_dimension_formula(f, d1, d2):
    (r1, n1), (r2, _) = d1, d2
    n = n1
    r2 = [row[:n] + [0] * (n - len(row[:n])) for row in r2]
    a = Subspace(f, n, f.array(r1, (len(r1), n)) if r1 else None)
    b = Subspace(f, n, f.array(r2, (len(r2), n)) if r2 else None)
    s, i = la.sum_(a, b), la.intersect(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert s.contains(a) and s.contains(b)
    assert a.contains(i) and b.contains(i)
    c = la.complement(i, a)
    assert la.sum_(c, i) == a and la.intersect(c, i).dim == 0


def test_subspace_canonical_equality_and_hash():
    f = GF(5)
    a = Subspace(f, 3, [[1, 2, 0], [0, 1, 1]])
    b = Subspace(f, 3, [[1, 3, 1], [2, 4, 0]])
    assert a == b and hash(a) == hash(b)
    assert Subspace.full(f, 2).dim == 2 and Subspace.zero(f, 2).dim == 0


def test_image_preimage():
    f = QQ
    m = f.array([[0, 1], [0, 0]])
    u = Subspace(f, 2, [[0, 1]])
    assert la.image(m, u) == Subspace(f, 2, [[1, 0]])
    assert la.preimage(m, Subspace(f, 2)) == Subspace(f, 2, [[1, 0]])


def test_solve():
    f = GF(5)
    a = f.array([[1, 1], [0, 2]])
    x = la.solve(a, f.vector([3, 4]), f)
    assert np.array_equal(f.matmul(a, x.reshape(-1, 1))[:, 0], f.vector([3, 4]))
    assert la.solve(f.array([[1, 1], [1, 1]]), f.vector([0, 1]), f) is None


def test_field_mismatch():
    with pytest.raises(la.FieldMismatch):
        la.sum_(Subspace(QQ, 2), Subspace(GF(3), 2))
