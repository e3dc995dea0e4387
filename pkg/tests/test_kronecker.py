import itertools

import numpy as np
import pytest

from strelkit import kronecker as kr
from strelkit import relations as rel
from strelkit.exactla import GF, QQ

from _gen import F5, random_pencil, random_relation, rng, scramble

F2 = GF(2)


def mixed(f=QQ):
    return rel.from_pairs(f, 2, 2, [([1, 0], [1, 0]), ([0, 1], [0, 0]), ([0, 0], [0, 1])])


def names(dec):
    return [str(b) for b in dec.blocks]


def test_from_relation_examples():
    f = QQ
    M = kr.from_relation(rel.identity(f, 1))
    assert M.dims == (1, 1) and M.p.tolist() == [[1]] and M.q.tolist() == [[1]]
    assert kr.from_relation(mixed()).dims == (3, 2)
    assert kr.from_relation(rel.zero_relation(f, 1)).dims == (0, 1)


def test_to_relation():
    f = QQ
    assert kr.to_relation(kr.I(f, 0)) is None
    C = mixed()
    assert kr.to_relation(kr.from_relation(C)) == C
    # P(1): x1 -> (y1, y2) gives the relation spanned by (y2, y1)
    assert kr.to_relation(kr.P(f, 1)).graph == rel.from_pairs(f, 2, 2, [([0, 1], [1, 0])]).graph


def test_decompose_examples():
    f = QQ
    assert names(kr.decompose(kr.from_relation(mixed()))) == ["I(1)", "Aut(1,[1])"]
    nil = rel.graph_of(f.array([[0, 1], [0, 0]]), f)
    assert names(kr.decompose(kr.from_relation(nil))) == ["Z(2)"]
    assert names(kr.decompose(kr.module(f, f.zeros(1, 0), f.zeros(1, 0), 0, 1))) == ["P(0)"]


@pytest.mark.parametrize("f", [QQ, F5], ids=str)
def test_blocks_decompose_to_themselves(f):
    blocks = [kr.P(f, n) for n in range(4)] + [kr.I(f, n) for n in range(4)]
    blocks += [kr.Z(f, n) for n in range(1, 4)] + [kr.R(f, n) for n in range(1, 4)]
    expect = [f"P({n})" for n in range(4)] + [f"I({n})" for n in range(4)]
    expect += [f"Z({n})" for n in range(1, 4)] + [f"R({n})" for n in range(1, 4)]
    for b, e in zip(blocks, expect):
        assert names(kr.decompose(b)) == [e]


def test_aut_block_per_invariant_factor():
    f = QQ
    # t^2 - 3t + 1 companion: irreducible over Q, one block
    A = f.array([[0, -1], [1, 3]])
    dec = kr.decompose(kr.Aut(f, A))
    assert len(dec.blocks) == 1 and dec.blocks[0].kind == "Aut"
    # scalar 2 twice: two 1x1 blocks
    dec = kr.decompose(kr.Aut(f, f.array([[2, 0], [0, 2]])))
    assert names(dec) == ["Aut(1,[2])", "Aut(1,[2])"]


def test_scrambled_sums_recover_multiset():
    r = rng(5)
    f = F5
    for _ in range(25):
        parts = []
        for _ in range(int(r.integers(1, 4))):
            k = int(r.integers(0, 4))
            n = int(r.integers(0, 3))
            parts.append([kr.P(f, n), kr.I(f, n), kr.Z(f, n + 1), kr.R(f, n + 1)][k])
        M = scramble(kr.direct_sum(f, parts), r)
        expect = sorted(names(kr.decompose(p))[0] for p in parts)
        dec = kr.decompose(M)
        assert dec.multiset() == expect
        assert kr.verify(M, dec)


def test_decompose_is_deterministic_for_fixed_seed():
    r = rng(6)
    M = random_pencil(F5, r)
    a, b = kr.decompose(M, seed=3), kr.decompose(M, seed=3)
    assert np.array_equal(a.x_basis, b.x_basis) and names(a) == names(b)


# Hom and Ext ------------------------------------------------------------------


def brute_hom_count(M, N):
    f = M.field
    count = 0
    for t in itertools.product(range(f.p), repeat=N.x_dim * M.x_dim):
        theta = f.array(np.array(t).reshape(N.x_dim, M.x_dim)) if t else f.zeros(N.x_dim, M.x_dim)
        for s in itertools.product(range(f.p), repeat=N.y_dim * M.y_dim):
            phi = f.array(np.array(s).reshape(N.y_dim, M.y_dim)) if s else f.zeros(N.y_dim, M.y_dim)
            if (np.array_equal(f.matmul(phi, M.p), f.matmul(N.p, theta))
                    and np.array_equal(f.matmul(phi, M.q), f.matmul(N.q, theta))):
                count += 1
    return count


def test_hom_against_enumeration():
    r = rng(7)
    for _ in range(30):
        M, N = random_pencil(F2, r, 2), random_pencil(F2, r, 2)
        assert 2 ** kr.hom_dim(M, N) == brute_hom_count(M, N)


def test_hom_ext_examples():
    f = QQ
    assert kr.hom_dim(kr.P(f, 0), kr.from_relation(mixed())) == 2
    assert kr.ext_dim(kr.Z(f, 1), kr.from_relation(rel.identity(f, 1))) == 0
    assert kr.hom_dim(kr.Z(f, 1), kr.P(f, 0)) == 0
    assert kr.ext_dim(kr.Z(f, 1), kr.P(f, 0)) == 1
    for n in range(4):
        M = random_pencil(F5, rng(n), 4)
        assert kr.ext_dim(kr.P(F5, n), M) == 0
    M = kr.from_relation(mixed())
    hs = kr.hom_space(M, M)
    assert hs.dim >= 1


def test_euler_form():
    r = rng(8)
    for _ in range(60):
        M, N = random_pencil(F5, r, 5), random_pencil(F5, r, 5)
        assert kr.hom_dim(M, N) - kr.ext_dim(M, N) == kr.euler_form(M.dims, N.dims)


def test_rank_invariants():
    f = F5
    pts = kr.sample_points(f, 4)
    assert kr.rank_invariants(kr.P(f, 0), pts) == [0] * 4
    z = kr.rank_invariants(kr.Z(f, 1), pts)
    assert z == [1 if lam else 0 for lam, _ in pts]
    a, b = kr.R(f, 2), kr.I(f, 1)
    s = kr.rank_invariants(kr.direct_sum(f, [a, b]), pts)
    assert s == [u + v for u, v in zip(kr.rank_invariants(a, pts), kr.rank_invariants(b, pts))]


def test_relation_modules_have_no_I0():
    r = rng(9)
    for _ in range(60):
        dec = kr.decompose(kr.from_relation(random_relation(F5, r, 5)))
        assert "I(0)" not in names(dec)
