import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strelkit import exactla as la
from strelkit import relations as rel
from strelkit.exactla import GF, QQ, Subspace

from _gen import F5, random_relation, rng


def mixed(f=QQ):
    return rel.from_pairs(f, 2, 2, [([1, 0], [1, 0]), ([0, 1], [0, 0]), ([0, 0], [0, 1])])


def nilpotent(f=QQ):
    # e2 -> e1 -> 0
    return rel.graph_of(f.array([[0, 1], [0, 0]]), f)


def span(f, *vs):
    return Subspace(f, len(vs[0]), list(vs))


# hand-computed fixtures -----------------------------------------------------


def test_apply_examples():
    f = QQ
    n = nilpotent()
    assert rel.apply(n, span(f, [0, 1])) == span(f, [1, 0])
    assert rel.apply(rel.identity(f, 2), span(f, [1, 1])) == span(f, [1, 1])
    assert rel.apply(rel.zero_relation(f, 2), Subspace.full(f, 2)).dim == 0


def test_sharp_flat_examples():
    f = QQ
    d = rel.sharp_flat(rel.graph_of(f.array([[3, 0], [0, 3]]), f))
    assert d.sharp.dim == 2 and d.flat.dim == 0
    d = rel.sharp_flat(nilpotent())
    assert d.sharp.dim == 0 and d.flat.dim == 0 and d.orbit.dim == 0
    assert d.co_stable == Subspace.full(f, 2)
    d = rel.sharp_flat(mixed())
    e2 = span(f, [0, 1])
    assert d.sharp.dim == 2 and d.flat == e2 and d.plus == e2 and d.minus == e2


def test_induced_T_examples():
    f = QQ
    t = rel.induced_T(mixed())
    assert t.dim == 1 and t.t_matrix.tolist() == [[1]]
    t = rel.induced_T(rel.graph_of(f.array([[7]]), f))
    assert t.t_matrix.tolist() == [[7]]
    assert rel.induced_T(nilpotent()).dim == 0


def test_restrict_examples():
    f = QQ
    C = mixed()
    assert rel.restrict(C, Subspace.full(f, 2)) == C
    r = rel.restrict(C, span(f, [0, 1]))
    assert r == rel.complete(f, 1)
    assert rel.restrict(C, Subspace(f, 2)).graph.ambient_dim == 0


def test_automorphic_examples():
    f = QQ
    assert rel.is_automorphic(rel.graph_of(f.array([[1, 1], [0, 1]]), f))
    assert not rel.is_automorphic(nilpotent())
    assert not rel.is_automorphic(rel.complete(f, 1))


def test_split_and_retraction_examples():
    f = QQ
    C = mixed()
    d = rel.sharp_flat(C)
    U = rel.split(C, d)
    assert la.sum_(U, d.flat) == d.sharp and la.intersect(U, d.flat).dim == 0
    assert rel.is_automorphic(rel.restrict(C, U))
    for W in (d.flat, d.sharp):
        phi = rel.find_retraction(C, W)
        assert phi is not None and rel.is_retraction(C, W, phi)
    N = nilpotent()
    assert rel.split(N).dim == 0
    assert rel.find_retraction(N, Subspace(f, 2)).shape == (0, 2)


def test_compose_graphs_matches_matmul():
    f = QQ
    r = rng(1)
    for _ in range(10):
        a, b = QQ.random_matrix(r, 3, 3), QQ.random_matrix(r, 3, 3)
        assert rel.compose(rel.graph_of(a, f), rel.graph_of(b, f)) == rel.graph_of(f.matmul(a, b), f)


def test_compose_with_empty_graph():
    # C 0-relation is C0 + 0, not the zero relation
    f = QQ
    C = rel.complete(f, 1)
    Z = rel.zero_relation(f, 1)
    out = rel.compose(C, Z)
    assert out.graph == Subspace(f, 2, [[1, 0]])
    assert rel.compose(Z, C).graph == Subspace(f, 2, [[0, 1]])


def test_inverse_of_invertible_graph():
    f = GF(5)
    a = f.array([[1, 2], [3, 3]])
    assert rel.inverse(rel.graph_of(a, f)) == rel.graph_of(f.inverse(a), f)
    C = mixed(f)
    assert rel.inverse(rel.inverse(C)) == C


def test_C_Cinv_C_contains_C():
    # C C^-1 C = C for every relation
    r = rng(2)
    for _ in range(150):
        C = random_relation(F5, r, 4)
        assert rel.compose(rel.compose(C, rel.inverse(C)), C) == C


# brute-force oracle over tiny fields -----------------------------------------


def points(f, n):
    return [tuple(v) for v in itertools.product(range(f.p), repeat=n)]


def graph_points(C):
    f = C.field
    basis = C.graph.basis
    out = set()
    for coeffs in itertools.product(range(f.p), repeat=basis.shape[0]):
        v = np.zeros(basis.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, basis):
            v = (v + c * row.astype(np.int64)) % f.p
        out.add(tuple(int(x) for x in v))
    return out


def chain_fixpoint(pairs, start, n):
    cur = set(start)
    while True:
        nxt = {o for o, i in pairs if i in cur}
        if nxt == cur:
            return cur
        cur = nxt


def as_set(S):
    return set(map(tuple, graph_points(rel.LinearRelation(S.field, S.ambient_dim, 0, S))))


def set_sum(f, a, b):
    return {tuple((x + y) % f.p for x, y in zip(u, v)) for u in a for v in b}


@pytest.mark.parametrize("p", [2, 3])
def test_sharp_flat_against_point_sets(p):
    f = GF(p)
    r = rng(10 + p)
    for _ in range(40):
        C = random_relation(f, r, 3 if p == 2 else 2)
        n = C.dim
        pts = graph_points(C)
        fwd = [(v[:n], v[n:]) for v in pts]
        bwd = [(i, o) for o, i in fwd]
        zero, allv = {tuple([0] * n)}, set(points(f, n))
        orbit, stable = chain_fixpoint(fwd, zero, n), chain_fixpoint(fwd, allv, n)
        co_orbit, co_stable = chain_fixpoint(bwd, zero, n), chain_fixpoint(bwd, allv, n)
        d = rel.sharp_flat(C)
        assert as_set(d.orbit) == orbit and as_set(d.stable) == stable
        assert as_set(d.co_orbit) == co_orbit and as_set(d.co_stable) == co_stable
        assert as_set(d.sharp) == stable & co_stable
        assert as_set(d.flat) == set_sum(f, stable & co_orbit, co_stable & orbit)


# invariants -----------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_sharp_flat_invariants(seed):
    r = np.random.default_rng(seed)
    C = random_relation(F5, r, 5)
    d = rel.sharp_flat(C)
    assert d.sharp.contains(d.flat)
    assert d.flat == la.sum_(d.plus, d.minus)
    U = rel.split(C, d)
    assert la.sum_(U, d.flat) == d.sharp and U.dim + d.flat.dim == d.sharp.dim
    assert rel.is_automorphic(rel.restrict(C, U))


def test_T_of_invertible_map_is_similar():
    from strelkit import polys
    r = rng(4)
    f = F5
    for _ in range(30):
        from _gen import random_invertible
        a = random_invertible(f, r, 3)
        tm = rel.induced_T(rel.graph_of(a, f))
        assert tm.dim == 3
        assert polys.invariant_factors(f, tm.t_matrix) == polys.invariant_factors(f, a)
