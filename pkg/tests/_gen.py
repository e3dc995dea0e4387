"""Random and structured inputs shared by the test modules."""

import os

import numpy as np

from strelkit import relations as rel
from strelkit import kronecker as kr
from strelkit.exactla import GF, Subspace
from strelkit.words import WordError, check_word, finite_words, make_word

F5 = GF(5)


def seed(default=20240611):
    return int(os.environ.get("STRELKIT_SEED", default))


def rng(offset=0):
    return np.random.default_rng(seed() + offset)


def random_relation(f, r, max_dim=6):
    """Mix of sparse, dense and map-like relations so every kind of block shows up."""
    n = int(r.integers(0, max_dim + 1))
    kind = r.integers(0, 4)
    if kind == 0 and n:
        m = f.random_matrix(r, n, n)
        # zero out a few columns to get nilpotent and degenerate parts
        for j in range(n):
            if r.random() < 0.3:
                m[:, j] = f.zero
        return rel.graph_of(m, f)
    if kind == 1 and n:
        m = f.random_matrix(r, n, n)
        return rel.inverse(rel.graph_of(m, f))
    k = int(r.integers(0, 2 * n + 1))
    rows = f.random_matrix(r, k, 2 * n)
    if kind == 3:
        # low-density entries
        for i in range(k):
            for j in range(2 * n):
                if r.random() < 0.6:
                    rows[i, j] = f.zero
    return rel.LinearRelation(f, n, n, Subspace(f, 2 * n, rows if k else None))


def random_pencil(f, r, max_dim=6):
    x = int(r.integers(0, max_dim + 1))
    y = int(r.integers(0, max_dim + 1))
    if r.random() < 0.4:
        # assemble from known blocks, then scramble with random base changes
        blocks = []
        budget = max_dim
        while budget > 0:
            kind = r.integers(0, 5)
            n = int(r.integers(0, 3))
            b = [kr.P(f, n), kr.I(f, n), kr.Z(f, n + 1), kr.R(f, n + 1),
                 kr.Aut(f, f.array([[int(r.integers(1, f.p if f.characteristic else 4))]]))][kind]
            if max(b.x_dim, b.y_dim) > budget:
                break
            blocks.append(b)
            budget -= max(b.x_dim, b.y_dim, 1)
        M = kr.direct_sum(f, blocks)
        return scramble(M, r)
    p = f.random_matrix(r, y, x)
    q = f.random_matrix(r, y, x)
    if r.random() < 0.5:
        for m in (p, q):
            for i in range(y):
                for j in range(x):
                    if r.random() < 0.5:
                        m[i, j] = f.zero
    return kr.KroneckerModule(f, x, y, p, q)


def random_invertible(f, r, n):
    while True:
        m = f.random_matrix(r, n, n)
        if f.is_invertible(m):
            return m


def scramble(M, r):
    f = M.field
    a = random_invertible(f, r, M.x_dim)
    b = random_invertible(f, r, M.y_dim)
    # N = b M a^-1 is isomorphic to M
    ai = f.inverse(a) if M.x_dim else a
    return kr.KroneckerModule(f, M.x_dim, M.y_dim, f.matmul(f.matmul(b, M.p), ai),
                              f.matmul(f.matmul(b, M.q), ai))


def n_words(P, max_total):
    """Valid N-words core (block)^inf with len(core) + len(block) <= max_total."""
    out = set()
    cores = [w for w in finite_words(P, max_total - 1)]
    blocks = [w for w in finite_words(P, max_total) if not w.is_trivial]
    for c in cores:
        for b in blocks:
            if len(c.core) + len(b.core) > max_total:
                continue
            try:
                out.add(check_word(make_word(c.core, (), b.core), P))
            except WordError:
                continue
    return sorted(out, key=str)
