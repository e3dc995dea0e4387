"""Finite-dimensional linear relations.

A relation from K^s to K^t is a subspace of K^t + K^s holding pairs
``(output, input)``: ``u`` lies in ``C v`` exactly when ``(u, v)`` is in the
graph.  Square relations (s = t) carry the stable/orbit subspaces, the
sharp/flat pair, the induced automorphism of sharp/flat and the splitting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exactla as la
from .exactla import DimensionMismatch, Field, Subspace


class RelationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearRelation:
    field: Field
    target_dim: int
    source_dim: int
    graph: Subspace

    def __post_init__(self):
        if self.graph.ambient_dim != self.target_dim + self.source_dim:
            raise DimensionMismatch("graph ambient must be target + source")

    def __eq__(self, other):
        return (isinstance(other, LinearRelation) and self.target_dim == other.target_dim
                and self.source_dim == other.source_dim and self.graph == other.graph)

    def __hash__(self):
        return hash((self.target_dim, self.source_dim, self.graph))

    @property
    def is_square(self):
        return self.target_dim == self.source_dim

    @property
    def dim(self):
        """Dimension of the underlying space of a square relation."""
        if not self.is_square:
            raise RelationError("relation is not square")
        return self.target_dim

    def outputs(self) -> np.ndarray:
        return self.graph.basis[:, : self.target_dim]

    def inputs(self) -> np.ndarray:
        return self.graph.basis[:, self.target_dim:]

    def __repr__(self):
        return f"LinearRelation(K^{self.source_dim} -> K^{self.target_dim}, dim {self.graph.dim})"


def from_pairs(field: Field, target_dim: int, source_dim: int, pairs) -> LinearRelation:
    """Relation spanned by ``(output, input)`` pairs."""
    rows = [list(out) + list(inp) for out, inp in pairs]
    n = target_dim + source_dim
    return LinearRelation(field, target_dim, source_dim,
                          Subspace(field, n, field.array(rows, (len(rows), n)) if rows else None))


def graph_of(f_mat: np.ndarray, field: Field) -> LinearRelation:
    """The relation ``{(f v, v)}``."""
    t, s = f_mat.shape
    rows = np.hstack([f_mat.T, field.eye(s)]) if s else field.zeros(0, t)
    return LinearRelation(field, t, s, Subspace(field, t + s, rows if s else None))


def identity(field: Field, n: int) -> LinearRelation:
    return graph_of(field.eye(n), field)


def zero_relation(field: Field, n: int) -> LinearRelation:
    return LinearRelation(field, n, n, Subspace(field, 2 * n))


def complete(field: Field, n: int) -> LinearRelation:
    return LinearRelation(field, n, n, Subspace.full(field, 2 * n))


def apply(C: LinearRelation, U: Subspace) -> Subspace:
    """C U: every u' with (u', u) in C for some u in U."""
    if U.ambient_dim != C.source_dim:
        raise DimensionMismatch("subspace does not live in the source")
    f = C.field
    t = C.target_dim
    if C.graph.dim == 0:
        return Subspace(f, t)
    ann = U.annihilator()
    if ann.shape[0] == 0:
        coeffs = f.eye(C.graph.dim)
    else:
        coeffs = f.kernel(f.matmul(ann, C.inputs().T))
    if coeffs.shape[0] == 0:
        return Subspace(f, t)
    return Subspace(f, t, f.matmul(coeffs, C.outputs()))


def apply_vector(C: LinearRelation, v) -> Optional[np.ndarray]:
    """Some u with (u, v) in C, or None when C v is empty."""
    f = C.field
    if C.graph.dim == 0:
        return f.zeros(1, C.target_dim)[0] if not np.any(np.asarray(v)) else None
    x = la.solve(C.inputs().T, v, f)
    if x is None:
        return None
    return f.matmul(x.reshape(1, -1), C.outputs())[0]


def inverse(C: LinearRelation) -> LinearRelation:
    f = C.field
    t, s = C.target_dim, C.source_dim
    if C.graph.dim == 0:
        return LinearRelation(f, s, t, Subspace(f, s + t))
    swapped = np.hstack([C.inputs(), C.outputs()])
    return LinearRelation(f, s, t, Subspace(f, s + t, swapped))


def compose(C: LinearRelation, D: LinearRelation) -> LinearRelation:
    """CD: (u, v) with (u, w) in C and (w, v) in D for some w."""
    if C.source_dim != D.target_dim:
        raise DimensionMismatch("source of C must equal target of D")
    f = C.field
    t, m, s = C.target_dim, C.source_dim, D.source_dim
    # triple space (u, w, v); C lifted along v, D along u
    n = t + m + s
    a = f.zeros(C.graph.dim + s, n)
    a[: C.graph.dim, : t + m] = C.graph.basis
    a[C.graph.dim:, t + m:] = f.eye(s)
    b = f.zeros(D.graph.dim + t, n)
    b[: D.graph.dim, t:] = D.graph.basis
    b[D.graph.dim:, :t] = f.eye(t)
    both = la.intersect(Subspace(f, n, a), Subspace(f, n, b))
    if both.dim == 0:
        return LinearRelation(f, t, s, Subspace(f, t + s))
    proj = np.hstack([both.basis[:, :t], both.basis[:, t + m:]])
    return LinearRelation(f, t, s, Subspace(f, t + s, proj))


def power(C: LinearRelation, n: int) -> LinearRelation:
    out = identity(C.field, C.dim)
    for _ in range(n):
        out = compose(C, out)
    return out


def pair_map(basis: np.ndarray, field: Field) -> np.ndarray:
    """Matrix of (a, b) -> (a B, b B) sending U-coordinates into V + V."""
    k, n = basis.shape
    m = field.zeros(2 * n, 2 * k)
    m[:n, :k] = basis.T
    m[n:, k:] = basis.T
    return m


def restrict(C: LinearRelation, U: Subspace) -> LinearRelation:
    """C|_U = C & (U + U), in the coordinates of U's RREF basis."""
    if not C.is_square or U.ambient_dim != C.dim:
        raise DimensionMismatch("restrict needs a square relation and U inside V")
    f = C.field
    k = U.dim
    if k == 0:
        return LinearRelation(f, 0, 0, Subspace(f, 0))
    sub = la.preimage(pair_map(U.basis, f), C.graph)
    return LinearRelation(f, k, k, sub)


def restricted_graph(C: LinearRelation, U: Subspace) -> Subspace:
    """C & (U + U) as a subspace of V + V."""
    n = C.dim
    uu = Subspace(C.field, 2 * n, la.block_diag(C.field, [U.basis, U.basis])
                  if U.dim else None)
    return la.intersect(C.graph, uu)


def embed(U: Subspace, coords) -> np.ndarray:
    """Vectors of V from coordinates relative to U's basis (rows)."""
    coords = np.asarray(coords, dtype=U.field.dtype).reshape(-1, U.dim)
    return U.field.matmul(coords, U.basis)


# ---------------------------------------------------------------------------
# sharp / flat


def orbit(C: LinearRelation) -> Subspace:
    """C' = union of C^n 0 (increasing chain)."""
    cur = Subspace(C.field, C.dim)
    while True:
        nxt = apply(C, cur)
        if nxt == cur:
            return cur
        cur = nxt


def stable(C: LinearRelation) -> Subspace:
    """C'' = intersection of C^n V (decreasing chain)."""
    cur = Subspace.full(C.field, C.dim)
    while True:
        nxt = apply(C, cur)
        if nxt == cur:
            return cur
        cur = nxt


@dataclass(frozen=True)
class SharpFlatData:
    sharp: Subspace
    flat: Subspace
    plus: Subspace
    minus: Subspace
    orbit: Subspace
    stable: Subspace
    co_orbit: Subspace
    co_stable: Subspace


def sharp_flat(C: LinearRelation) -> SharpFlatData:
    if not C.is_square:
        raise RelationError("sharp/flat need a square relation")
    Ci = inverse(C)
    o, s = orbit(C), stable(C)
    co, cs = orbit(Ci), stable(Ci)
    plus = la.intersect(s, co)
    minus = la.intersect(cs, o)
    return SharpFlatData(sharp=la.intersect(s, cs), flat=la.sum_(plus, minus),
                         plus=plus, minus=minus, orbit=o, stable=s,
                         co_orbit=co, co_stable=cs)


@dataclass(frozen=True)
class TModule:
    """The automorphism T of sharp/flat on the basis ``flat + span(lifts)``."""

    dim: int
    t_matrix: np.ndarray
    lifts: np.ndarray
    field: Field


def _quotient_coords(f: Field, big: Subspace, sub: Subspace, lifts: np.ndarray, v):
    """Coordinates of v modulo ``sub`` in terms of ``lifts`` (v must lie in big)."""
    basis = np.vstack([sub.basis, lifts]) if sub.dim else lifts
    x = la.solve(basis.T, v, f)
    if x is None:
        raise RelationError("vector outside the expected subspace")
    return x[sub.dim:]


def induced_T(C: LinearRelation, data: SharpFlatData = None) -> TModule:
    f = C.field
    data = data or sharp_flat(C)
    comp = la.complement(data.flat, data.sharp)
    k = comp.dim
    t = f.zeros(k, k)
    # C v & sharp is a single coset of flat, since C0 & sharp lies in flat
    if not data.flat.contains(la.intersect(apply(C, Subspace(f, C.dim)), data.sharp)):
        raise RelationError("C0 & sharp is not inside flat")
    for j in range(k):
        v = comp.basis[j]
        w = _member_in(C, v, data.sharp)
        if w is None:
            raise RelationError("C v does not meet sharp")
        t[:, j] = _quotient_coords(f, data.sharp, data.flat, comp.basis, w)
    if k and not f.is_invertible(t):
        raise RelationError("induced map on sharp/flat is not invertible")
    return TModule(k, t, comp.basis, f)


def _member_in(C: LinearRelation, v, target: Subspace):
    """Some u in C v & target, or None."""
    f = C.field
    g = C.graph.dim
    if g == 0:
        return None
    ann = target.annihilator()
    # unknown coefficients a on the graph basis: a.inputs = v, ann . (a.outputs) = 0
    rows = [C.inputs().T]
    rhs = [np.asarray(v, dtype=f.dtype)]
    if ann.shape[0]:
        rows.append(f.matmul(ann, C.outputs().T))
        rhs.append(f.zeros(1, ann.shape[0])[0])
    a = la.solve(np.vstack(rows), np.concatenate(rhs), f)
    if a is None:
        return None
    return f.matmul(a.reshape(1, -1), C.outputs())[0]


def is_automorphic(C: LinearRelation) -> bool:
    if not C.is_square:
        return False
    n = C.dim
    if C.graph.dim != n:
        return False
    if n == 0:
        return True
    f = C.field
    return f.rank(C.outputs()) == n and f.rank(C.inputs()) == n


def quotient_relation(C: LinearRelation, big: Subspace, sub: Subspace,
                      lifts: np.ndarray) -> LinearRelation:
    """(C|_big)/(C|_sub) on big/sub, in the basis given by ``lifts``."""
    f = C.field
    k = lifts.shape[0]
    g = restricted_graph(C, big)
    n = C.dim
    pairs = []
    for row in g.basis:
        out = _quotient_coords(f, big, sub, lifts, row[:n])
        inp = _quotient_coords(f, big, sub, lifts, row[n:])
        pairs.append(list(out) + list(inp))
    if not pairs:
        return LinearRelation(f, k, k, Subspace(f, 2 * k))
    return LinearRelation(f, k, k, Subspace(f, 2 * k, f.array(pairs, (len(pairs), 2 * k))))


def split(C: LinearRelation, data: SharpFlatData = None) -> Subspace:
    """A subspace U with sharp = flat + U (direct) and C|_U automorphic.

    Lifts a complement basis u_j of flat in sharp to u_j + f_j (f_j in flat) so
    that (sum_i T_ij (u_i + f_i), u_j + f_j) lies in C for every j; this is a
    single linear system in the coefficients of the f_j.
    """
    f = C.field
    data = data or sharp_flat(C)
    tm = induced_T(C, data)
    k, n = tm.dim, C.dim
    if k == 0:
        return Subspace(f, n)
    fl = data.flat.basis
    d = fl.shape[0]
    u, t = tm.lifts, tm.t_matrix
    ann = C.graph.annihilator()
    if d == 0 or ann.shape[0] == 0:
        cand = Subspace(f, n, u)
    else:
        # unknowns c[j, l]: f_j = sum_l c[j, l] fl[l]; variable index j*d + l
        r = ann.shape[0]
        nv = k * d
        A = f.zeros(k * r, nv)
        b = f.zeros(1, k * r)[0]
        ann_out, ann_in = ann[:, :n], ann[:, n:]
        ao_fl = f.matmul(ann_out, fl.T)   # r x d
        ai_fl = f.matmul(ann_in, fl.T)
        base = f.add(f.matmul(ann_out, f.matmul(t.T, u).T), f.matmul(ann_in, u.T))  # r x k
        for j in range(k):
            rows = slice(j * r, (j + 1) * r)
            for i in range(k):
                if t[i, j]:
                    A[rows, i * d:(i + 1) * d] = f.add(A[rows, i * d:(i + 1) * d],
                                                      f.scale(t[i, j], ao_fl))
            A[rows, j * d:(j + 1) * d] = f.add(A[rows, j * d:(j + 1) * d], ai_fl)
            b[j * r:(j + 1) * r] = f.normalize(-base[:, j])
        x = la.solve(A, b, f)
        if x is None:
            raise RelationError("no C-invariant lift of sharp/flat exists")
        c = x.reshape(k, d)
        cand = Subspace(f, n, f.add(u, f.matmul(c, fl)))
    return cand


def find_retraction(C: LinearRelation, U: Subspace) -> Optional[np.ndarray]:
    """A retraction of (U, C|_U) inside (V, C) as Kronecker modules.

    Returns phi (k x n, U-coordinates) with phi|_U = id and (phi a, phi b) in
    C|_U for every (a, b) in C, or None.  The map on C is then forced.
    """
    f = C.field
    n, k = C.dim, U.dim
    if k == 0:
        return f.zeros(0, n)
    cu = restrict(C, U)
    ann = cu.graph.annihilator()          # rows over U + U (2k)
    nv = k * n                            # phi[r, c] -> r*n + c
    eqs = []
    rhs = []
    g = C.graph.basis
    if ann.shape[0]:
        a_out, a_in = ann[:, :k], ann[:, k:]
        for row in g:
            out, inp = row[:n], row[n:]
            # h . (phi out ; phi in) = sum_r sum_c (h_out[r] out[c] + h_in[r] in[c]) phi[r, c]
            block = f.add(_outer_rows(f, a_out, out), _outer_rows(f, a_in, inp))
            eqs.append(block)
            rhs.append(f.zeros(1, block.shape[0])[0])
    # phi B^T = I_k
    for i in range(k):
        block = _outer_rows(f, f.eye(k), U.basis[i])
        eqs.append(block)
        e = f.zeros(1, k)[0]
        e[i] = f.one
        rhs.append(e)
    x = la.solve(np.vstack(eqs), np.concatenate(rhs), f)
    if x is None:
        return None
    return x.reshape(k, n)


def _outer_rows(f: Field, h: np.ndarray, vec) -> np.ndarray:
    """Rows (one per row of h) of the linear form phi -> h . phi vec."""
    vec = np.asarray(vec, dtype=f.dtype)
    out = f.normalize(h[:, :, None] * vec[None, None, :])
    return out.reshape(h.shape[0], -1)


def is_retraction(C: LinearRelation, U: Subspace, phi: np.ndarray) -> bool:
    f = C.field
    n, k = C.dim, U.dim
    if phi.shape != (k, n):
        return False
    if k and not np.array_equal(f.matmul(phi, U.basis.T), f.eye(k)):
        return False
    cu = restrict(C, U)
    big = la.block_diag(f, [phi, phi])
    img = la.image(big, C.graph)
    return cu.graph.contains(img)
