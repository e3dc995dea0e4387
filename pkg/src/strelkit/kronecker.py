"""Kronecker modules X => Y (two maps p, q) and their decomposition.

A square relation C on V gives the module X = C, Y = V with p and q the
input and output projections.  Blocks use the index-set scheme
p(x_i) = y_i, q(x_i) = y_{i+1} (zero when the index leaves J):

    P(n): I = 1..n,   J = 1..n+1
    I(n): I = 0..n,   J = 1..n
    Z(n): I = J = 1..n
    R(n): I = 0..n-1, J = 1..n
    Aut(A): p = identity, q = A
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import exactla as la
from . import polys
from . import relations as rel
from .exactla import DimensionMismatch, Field, Subspace
from .relations import LinearRelation


@dataclass(frozen=True, eq=False)
class KroneckerModule:
    field: Field
    x_dim: int
    y_dim: int
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        shape = (self.y_dim, self.x_dim)
        if self.p.shape != shape or self.q.shape != shape:
            raise DimensionMismatch(f"p and q must be {self.y_dim}x{self.x_dim}")

    @property
    def dims(self) -> Tuple[int, int]:
        return self.x_dim, self.y_dim

    def stacked(self) -> np.ndarray:
        """(q; p): X -> Y + Y, matching the (output, input) pair order."""
        return np.vstack([self.q, self.p])

    def __repr__(self):
        return f"KroneckerModule(x={self.x_dim}, y={self.y_dim})"


def module(field: Field, p, q, x_dim=None, y_dim=None) -> KroneckerModule:
    p = np.asarray(p, dtype=field.dtype)
    q = np.asarray(q, dtype=field.dtype)
    if x_dim is not None:
        p = p.reshape(y_dim, x_dim)
        q = q.reshape(y_dim, x_dim)
    return KroneckerModule(field, p.shape[1], p.shape[0], field.normalize(p), field.normalize(q))


def from_relation(C: LinearRelation) -> KroneckerModule:
    if not C.is_square:
        raise rel.RelationError("Kronecker module needs a square relation")
    f = C.field
    n, g = C.dim, C.graph.dim
    if g == 0:
        return KroneckerModule(f, 0, n, f.zeros(n, 0), f.zeros(n, 0))
    return KroneckerModule(f, g, n, C.inputs().T.copy(), C.outputs().T.copy())


def to_relation(M: KroneckerModule) -> Optional[LinearRelation]:
    f = M.field
    s = M.stacked()
    if f.rank(s) != M.x_dim:
        return None
    graph = la.image(s, Subspace.full(f, M.x_dim))
    return LinearRelation(f, M.y_dim, M.y_dim, graph)


def direct_sum(field: Field, mods: Sequence[KroneckerModule]) -> KroneckerModule:
    mods = list(mods)
    if not mods:
        return KroneckerModule(field, 0, 0, field.zeros(0, 0), field.zeros(0, 0))
    return KroneckerModule(field, sum(m.x_dim for m in mods), sum(m.y_dim for m in mods),
                           la.block_diag(field, [m.p for m in mods]),
                           la.block_diag(field, [m.q for m in mods]))


# ---------------------------------------------------------------------------
# blocks


def _indexed(field: Field, I: Sequence[int], J: Sequence[int]) -> KroneckerModule:
    I, J = list(I), list(J)
    pos = {j: k for k, j in enumerate(J)}
    p = field.zeros(len(J), len(I))
    q = field.zeros(len(J), len(I))
    for c, i in enumerate(I):
        if i in pos:
            p[pos[i], c] = field.one
        if i + 1 in pos:
            q[pos[i + 1], c] = field.one
    return KroneckerModule(field, len(I), len(J), p, q)


def P(field: Field, n: int) -> KroneckerModule:
    return _indexed(field, range(1, n + 1), range(1, n + 2))


def I(field: Field, n: int) -> KroneckerModule:
    return _indexed(field, range(0, n + 1), range(1, n + 1))


def Z(field: Field, n: int) -> KroneckerModule:
    if n < 1:
        raise ValueError("Z(n) needs n >= 1")
    return _indexed(field, range(1, n + 1), range(1, n + 1))


def R(field: Field, n: int) -> KroneckerModule:
    if n < 1:
        raise ValueError("R(n) needs n >= 1")
    return _indexed(field, range(0, n), range(1, n + 1))


def Aut(field: Field, A) -> KroneckerModule:
    A = np.asarray(A, dtype=field.dtype)
    if not field.is_invertible(A):
        raise ValueError("Aut block needs an invertible matrix")
    d = A.shape[0]
    return KroneckerModule(field, d, d, field.eye(d), field.normalize(A.copy()))


@dataclass(frozen=True, eq=False)
class Block:
    kind: str                     # "P", "I", "Z", "R" or "Aut"
    n: int                        # size parameter (d for Aut)
    matrix: Optional[np.ndarray] = None

    def module(self, field: Field) -> KroneckerModule:
        if self.kind == "Aut":
            return Aut(field, self.matrix)
        return {"P": P, "I": I, "Z": Z, "R": R}[self.kind](field, self.n)

    def key(self):
        m = () if self.matrix is None else tuple(str(v) for v in self.matrix.ravel())
        return (self.kind, self.n, m)

    def __eq__(self, other):
        return isinstance(other, Block) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        if self.kind == "Aut":
            rows = ";".join(",".join(str(v) for v in r) for r in self.matrix)
            return f"Aut({self.n},[{rows}])"
        return f"{self.kind}({self.n})"

    __repr__ = __str__


_ORDER = {"P": 0, "I": 1, "Z": 2, "R": 3, "Aut": 4}


@dataclass(frozen=True, eq=False)
class KroneckerDecomposition:
    """Blocks plus base changes: M.p @ x_basis == y_basis @ canonical.p (same for q)."""

    field: Field
    blocks: Tuple[Block, ...]
    x_basis: np.ndarray
    y_basis: np.ndarray

    def canonical(self) -> KroneckerModule:
        return direct_sum(self.field, [b.module(self.field) for b in self.blocks])

    def multiset(self):
        return sorted((str(b) for b in self.blocks))

    def __str__(self):
        return " + ".join(str(b) for b in self.blocks) if self.blocks else "0"


def is_isomorphism(M: KroneckerModule, N: KroneckerModule, theta, phi) -> bool:
    """Whether (theta, phi): M -> N is an invertible morphism."""
    f = M.field
    if M.dims != N.dims:
        return False
    ok = (np.array_equal(f.matmul(phi, M.p), f.matmul(N.p, theta))
          and np.array_equal(f.matmul(phi, M.q), f.matmul(N.q, theta)))
    return ok and f.is_invertible(theta) and f.is_invertible(phi)


def verify(M: KroneckerModule, dec: KroneckerDecomposition) -> bool:
    return is_isomorphism(dec.canonical(), M, dec.x_basis, dec.y_basis)


# ---------------------------------------------------------------------------
# Hom and Ext


def _delta(M: KroneckerModule, N: KroneckerModule) -> np.ndarray:
    """(theta, phi) -> (phi p_M - p_N theta, phi q_M - q_N theta), row-major vecs."""
    f = M.field
    xm, ym, xn, yn = M.x_dim, M.y_dim, N.x_dim, N.y_dim
    rows = []
    for a, b in ((M.p, N.p), (M.q, N.q)):
        left = f.normalize(-np.kron(b, f.eye(xm))) if xn and xm and yn else f.zeros(yn * xm, xn * xm)
        right = f.normalize(np.kron(f.eye(yn), a.T)) if yn and ym and xm else f.zeros(yn * xm, yn * ym)
        rows.append(np.hstack([left.reshape(yn * xm, xn * xm), right.reshape(yn * xm, yn * ym)]))
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class HomSpace:
    dim: int
    basis: Tuple[Tuple[np.ndarray, np.ndarray], ...]   # (theta, phi) pairs


def hom_space(M: KroneckerModule, N: KroneckerModule) -> HomSpace:
    f = M.field
    xm, ym, xn, yn = M.x_dim, M.y_dim, N.x_dim, N.y_dim
    nt, nv = xn * xm, yn * ym
    if nt + nv == 0:
        return HomSpace(0, ())
    d = _delta(M, N)
    ker = f.kernel(d) if d.shape[0] else f.eye(nt + nv)
    basis = tuple((v[:nt].reshape(xn, xm), v[nt:].reshape(yn, ym)) for v in ker)
    return HomSpace(len(basis), basis)


def hom_dim(M: KroneckerModule, N: KroneckerModule) -> int:
    f = M.field
    n = M.x_dim * N.x_dim + M.y_dim * N.y_dim
    d = _delta(M, N)
    return n - (f.rank(d) if d.size else 0)


def ext_dim(M: KroneckerModule, N: KroneckerModule) -> int:
    """dim Ext^1(M, N): cokernel of the same map whose kernel is Hom."""
    f = M.field
    d = _delta(M, N)
    return 2 * M.x_dim * N.y_dim - (f.rank(d) if d.size else 0)


ext_space = ext_dim


def euler_form(a: Tuple[int, int], b: Tuple[int, int]) -> int:
    return a[0] * b[0] + a[1] * b[1] - 2 * a[0] * b[1]


def rank_invariants(M: KroneckerModule, samples) -> List[int]:
    f = M.field
    out = []
    for lam, mu in samples:
        m = f.add(f.scale(f(lam), M.p), f.scale(f(mu), M.q))
        out.append(f.rank(m) if m.size else 0)
    return out


def sample_points(field: Field, count: int, rng=None) -> List[Tuple[object, object]]:
    """Distinct projective points (lam, mu); all of them when the field is small."""
    pts = [(field(1), field(0)), (field(0), field(1))]
    if field.characteristic:
        pts += [(field(1), field(c)) for c in range(1, field.characteristic)]
        return pts[:max(count, 2)] if count < len(pts) else pts
    c = 1
    while len(pts) < count:
        pts.append((field(1), field(c)))
        c += 1
    return pts


# ---------------------------------------------------------------------------
# decomposition


def submodule(M: KroneckerModule, xs: np.ndarray, ys: np.ndarray) -> KroneckerModule:
    """The submodule spanned by rows xs of X and ys of Y, in those bases."""
    f = M.field
    kx, ky = xs.shape[0], ys.shape[0]
    mats = []
    for m in (M.p, M.q):
        out = f.zeros(ky, kx)
        for j in range(kx):
            img = f.matmul(m, xs[j].reshape(-1, 1))[:, 0]
            c = la.solve(ys.T, img, f) if ky else (None if np.any(img) else [])
            if c is None:
                raise ValueError("rows do not span a submodule")
            out[:, j] = c
        mats.append(out)
    return KroneckerModule(f, kx, ky, mats[0], mats[1])


def _nilpotent_jordan(f: Field, N: np.ndarray) -> List[int]:
    """Jordan block sizes (ascending) of a nilpotent matrix."""
    n = N.shape[0]
    ranks = [n]
    cur = f.eye(n)
    while ranks[-1]:
        cur = f.matmul(cur, N)
        ranks.append(f.rank(cur))
    ranks += [0, 0]
    sizes = []
    for k in range(1, len(ranks) - 1):
        sizes += [k] * (ranks[k - 1] - 2 * ranks[k] + ranks[k + 1])
    return sizes


def _map_of(C: LinearRelation) -> np.ndarray:
    """Matrix of a relation that is the graph of a linear map."""
    f = C.field
    n = C.dim
    out = f.zeros(n, n)
    for j in range(n):
        e = f.zeros(1, n)[0]
        e[j] = f.one
        v = rel.apply_vector(C, e)
        if v is None:
            raise rel.RelationError("relation is not a total map")
        out[:, j] = v
    return out


def _second_differences(values: List[int]) -> List[int]:
    values = values + [0, 0]
    return [values[k] - 2 * values[k + 1] + values[k + 2] for k in range(len(values) - 2)]


class DecompositionError(RuntimeError):
    pass


def _find_iso(N: KroneckerModule, M: KroneckerModule, rng, tries=200):
    """An isomorphism N -> M found as a random element of Hom(N, M)."""
    f = M.field
    if N.dims != M.dims:
        raise DecompositionError("part dimensions disagree with the block list")
    if N.x_dim + N.y_dim == 0:
        return f.zeros(0, 0), f.zeros(0, 0)
    H = hom_space(N, M)
    if H.dim == 0:
        raise DecompositionError("no morphisms onto part")
    for _ in range(tries):
        c = [f.random_element(rng) for _ in range(H.dim)]
        th = f.zeros(M.x_dim, N.x_dim)
        ph = f.zeros(M.y_dim, N.y_dim)
        for ci, (t, p) in zip(c, H.basis):
            if ci:
                th = f.add(th, f.scale(ci, t))
                ph = f.add(ph, f.scale(ci, p))
        if f.is_invertible(th) and f.is_invertible(ph):
            return th, ph
    raise DecompositionError("no isomorphism found by random search")


def decompose(M: KroneckerModule, seed: int = 0) -> KroneckerDecomposition:
    f = M.field
    rng = np.random.default_rng(seed)
    x, y = M.dims
    s = M.stacked()
    K0 = la.kernel_space(s, f) if x else Subspace(f, 0)
    Xc = la.complement(K0, Subspace.full(f, x))
    C = LinearRelation(f, y, y, la.image(s, Subspace.full(f, x)) if x else Subspace(f, 2 * y))
    A = f.matmul(s, Xc.basis.T) if Xc.dim else None

    def lift_graph(G: Subspace) -> np.ndarray:
        rows = []
        for g in G.basis:
            c = la.solve(A, g, f)
            rows.append(f.matmul(c.reshape(1, -1), Xc.basis)[0])
        return f.array(rows, (len(rows), x))

    def part(S: Subspace):
        """(xs, ys) for the submodule of M sitting over S in Y."""
        G = rel.restricted_graph(C, S)
        xs = lift_graph(G) if G.dim else f.zeros(0, x)
        ys = S.basis if S.dim else f.zeros(0, y)
        return xs, ys

    data = rel.sharp_flat(C)
    U = rel.split(C, data)
    phi = rel.find_retraction(C, data.sharp)
    W = la.kernel_space(phi, f) if data.sharp.dim else Subspace.full(f, y)
    D = rel.restrict(C, W)
    yr = rel.orbit(D)
    yz = rel.orbit(rel.inverse(D))
    rz = la.sum_(yr, yz)
    psi = rel.find_retraction(D, rz)
    yp = la.kernel_space(psi, f) if rz.dim else Subspace.full(f, W.dim)

    def in_v(S_w: Subspace) -> Subspace:
        if S_w.dim == 0:
            return Subspace(f, y)
        return Subspace(f, y, rel.embed(W, S_w.basis))

    parts = []   # (blocks, xs, ys)

    # I(0): kernel of (q; p), plus the flat part
    xs_f, ys_f = part(data.flat)
    mf = submodule(M, xs_f, ys_f)
    i_mult = _second_differences([hom_dim(mf, I(f, k)) for k in range(1, mf.x_dim + 2)])
    blocks_i = [Block("I", 0)] * K0.dim
    for k, m in enumerate(i_mult, start=1):
        blocks_i += [Block("I", k)] * m
    xs_i = np.vstack([K0.basis, xs_f]) if K0.dim else xs_f
    parts.append((blocks_i, xs_i, ys_f))

    # P: complement of the regular part inside W
    xs_p, ys_p = part(in_v(yp))
    mp = submodule(M, xs_p, ys_p)
    p_mult = _second_differences([hom_dim(P(f, k), mp) for k in range(0, mp.x_dim + 1)])
    blocks_p = []
    for k, m in enumerate(p_mult):
        blocks_p += [Block("P", k)] * m
    parts.insert(0, (blocks_p, xs_p, ys_p))

    # Z: C^{-1} 0 orbit, where C restricts to a nilpotent map
    blocks_z = [Block("Z", k) for k in _nilpotent_jordan(f, _map_of(rel.restrict(D, yz)))] if yz.dim else []
    parts.append((blocks_z,) + part(in_v(yz)))
    # R: C 0 orbit, where C^{-1} restricts to a nilpotent map
    blocks_r = ([Block("R", k) for k in
                 _nilpotent_jordan(f, _map_of(rel.inverse(rel.restrict(D, yr))))] if yr.dim else [])
    parts.append((blocks_r,) + part(in_v(yr)))

    # Aut: rational canonical form of the induced automorphism on U
    blocks_a = []
    if U.dim:
        T = _map_of(rel.restrict(C, U))
        for g in polys.invariant_factors(f, T):
            blocks_a.append(Block("Aut", polys.deg(g), polys.companion(f, g)))
    parts.append((blocks_a,) + part(U))

    all_blocks, xcols, ycols = [], [], []
    for blocks, xs, ys in parts:
        part_mod = submodule(M, xs, ys)
        canon = direct_sum(f, [b.module(f) for b in blocks])
        th, ph = _find_iso(canon, part_mod, rng)
        # th is in the coordinates of xs; push to X (ph likewise to Y)
        if th.size:
            xcols.append(f.matmul(xs.T, th))
        if ph.size:
            ycols.append(f.matmul(ys.T, ph))
        all_blocks += blocks
    xb = np.hstack(xcols) if xcols else f.zeros(x, 0)
    yb = np.hstack(ycols) if ycols else f.zeros(y, 0)
    order = sorted(range(len(all_blocks)), key=lambda i: (_ORDER[all_blocks[i].kind], i))
    # permute the column blocks to the sorted order
    xo, yo, xi, yi = [], [], 0, 0
    spans = []
    for b in all_blocks:
        m = b.module(f)
        spans.append((xi, xi + m.x_dim, yi, yi + m.y_dim))
        xi += m.x_dim
        yi += m.y_dim
    for i in order:
        a0, a1, b0, b1 = spans[i]
        xo += list(range(a0, a1))
        yo += list(range(b0, b1))
    dec = KroneckerDecomposition(f, tuple(all_blocks[i] for i in order),
                                 xb[:, xo] if x else xb, yb[:, yo] if y else yb)
    if not verify(M, dec):
        raise DecompositionError("reassembled module is not isomorphic to the input")
    return dec
