import itertools

import numpy as np
import pytest

from strelkit import fixtures
from strelkit import strmod as sm
from strelkit.exactla import GF, QQ
from strelkit.words import WordError, check_word, finite_words, inverse, parse_word

F5 = GF(5)


def word(text, P):
    return check_word(parse_word(text), P)


def test_string_module_examples():
    P = fixtures.lambda2()
    M = sm.string_module(word("1(v,+)", P), P)
    assert M.dim == 1 and not np.any(M.arrow_matrix("x")) and not np.any(M.arrow_matrix("y"))
    M = sm.string_module(word("x", P), P)
    assert M.arrow_matrix("x").tolist() == [[0, 1], [0, 0]]
    assert not np.any(M.arrow_matrix("y"))
    M = sm.string_module(word("x y", P), P)
    assert M.arrow_matrix("x").tolist() == [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    assert M.arrow_matrix("y").tolist() == [[0, 0, 0], [0, 0, 1], [0, 0, 0]]


def test_string_module_rejects_infinite():
    P = fixtures.lambda2()
    with pytest.raises((WordError, sm.ModuleError)):
        sm.string_module(word("(x- y)^inf", P), P)


def test_band_module_example():
    P = fixtures.lambda2(F5)
    C = word("(x y-)^-inf | (x y-)^inf", P)
    for lam in (1, 2, 3):
        M = sm.band_module(C, [[lam]], P)
        assert M.arrow_matrix("x").tolist() == [[0, 0], [lam, 0]]
        assert M.arrow_matrix("y").tolist() == [[0, 0], [1, 0]]
        assert M.relation_violations() == []
        assert sm.is_indecomposable(M)
    with pytest.raises(WordError):
        sm.band_module(word("x y-", P), [[1]], P)


def test_band_with_jordan_block():
    P = fixtures.lambda2(F5)
    C = word("(x y-)^-inf | (x y-)^inf", P)
    M = sm.band_module(C, [[2, 1], [0, 2]], P)
    assert M.dim == 4 and M.relation_violations() == []
    assert sm.is_indecomposable(M)
    # diagonal T splits
    assert not sm.is_indecomposable(sm.band_module(C, [[2, 0], [0, 2]], P))


def test_end_examples():
    P = fixtures.lambda2()
    Mx = sm.string_module(word("x", P), P)
    E = sm.endomorphism_algebra(Mx, check=True)
    assert E.dim == 2 and E.is_local
    S = sm.direct_sum([Mx, sm.string_module(word("1(v,+)", P), P)])
    assert not sm.is_indecomposable(S)
    MM = sm.direct_sum([Mx, Mx])
    assert sm.endomorphism_algebra(MM).dim == 8
    assert sm.direct_sum([Mx, sm.zero_module(P)]).dim == 2


def test_rotation_band_over_Q_is_local():
    P = fixtures.lambda2()
    C = word("(x y-)^-inf | (x y-)^inf", P)
    # t^2 + 1 is irreducible over Q
    M = sm.band_module(C, [[0, -1], [1, 0]], P)
    assert sm.endomorphism_algebra(M, check=True).is_local


def test_reversal_is_isomorphism():
    P = fixtures.lambda2()
    for C in finite_words(P, 4):
        M, N = sm.string_module(C, P), sm.string_module(inverse(C), P)
        assert sm.is_homomorphism(M, N, sm.reversal(M.dim, P.field))


# brute-force locality over tiny fields ----------------------------------------


def all_endomorphisms(M):
    f = M.field
    blocks = [(v, M.indices(v)) for v in M.presentation.vertices]
    sizes = [len(ix) ** 2 for _, ix in blocks]
    out = []
    for flat in itertools.product(range(f.p), repeat=sum(sizes)):
        h = f.zeros(M.dim, M.dim)
        k = 0
        for (_, ix), s in zip(blocks, sizes):
            n = len(ix)
            if n:
                h[np.ix_(ix, ix)] = f.array(np.array(flat[k:k + s]).reshape(n, n))
            k += s
        if sm.is_homomorphism(M, M, h):
            out.append(h)
    return out


def brute_local(M):
    f = M.field
    for h in all_endomorphisms(M):
        if f.is_invertible(h):
            continue
        if np.any(np.linalg.matrix_power(h.astype(np.int64), M.dim) % f.p):
            return False
    return True


@pytest.mark.parametrize("p", [2, 3])
def test_locality_against_enumeration(p):
    f = GF(p)
    P = fixtures.lambda2(f)
    Mx = sm.string_module(word("x", P), P)
    cases = [sm.string_module(w, P) for w in finite_words(P, 2)]
    cases += [sm.direct_sum([Mx, sm.string_module(word("1(v,-)", P), P)])]
    C = word("(x y-)^-inf | (x y-)^inf", P)
    cases += [sm.band_module(C, [[1]], P)]
    if p == 3:
        cases += [sm.band_module(C, [[2]], P)]
    for M in cases:
        E = sm.endomorphism_algebra(M, check=True)
        assert p ** E.dim == len(all_endomorphisms(M))
        assert E.is_local == brute_local(M)


def test_representation_round_trip():
    from strelkit.io import parse_representation
    P = fixtures.lambda2()
    M = sm.string_module(word("x y- x", P), P)
    N = parse_representation(sm.format_representation(M), P)
    assert N.vertex_dims() == M.vertex_dims()
    for a in P.arrows:
        assert np.array_equal(N.arrow_matrix(a.name), M.arrow_matrix(a.name))
