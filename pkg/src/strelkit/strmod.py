"""String and band modules as matrix representations, and their endomorphism rings.

A representation is stored globally: one basis for the whole module, the
vertex of each basis vector, and for each arrow an n x n matrix that is zero
outside the (head, tail) block.  Paths then compose by matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactla as la
from .exactla import Field, Subspace
from .presentation import StringPresentation
from .words import Word, WordError, format_word, is_periodic, vertex_at


class ModuleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    presentation: StringPresentation
    vertex_of: Tuple[str, ...]
    labels: Tuple[str, ...]
    matrices: Dict[str, np.ndarray]

    @property
    def field(self) -> Field:
        return self.presentation.field

    @property
    def dim(self) -> int:
        return len(self.vertex_of)

    def vertex_dims(self) -> Dict[str, int]:
        return {v: self.vertex_of.count(v) for v in self.presentation.vertices}

    def indices(self, v: str) -> List[int]:
        return [i for i, w in enumerate(self.vertex_of) if w == v]

    def arrow_matrix(self, name: str) -> np.ndarray:
        """The arrow as a map from its tail space to its head space."""
        a = self.presentation.arrow(name)
        return self.matrices[name][np.ix_(self.indices(a.head), self.indices(a.tail))]

    def path_matrix(self, path: Sequence[str]) -> np.ndarray:
        f = self.field
        m = f.eye(self.dim)
        for a in path:
            m = f.matmul(m, self.matrices[a])
        return m

    def relation_violations(self) -> List[Tuple[str, ...]]:
        return [r for r in self.presentation.rho if np.any(self.path_matrix(r))]

    def __repr__(self):
        dims = ", ".join(f"{v}:{d}" for v, d in self.vertex_dims().items())
        return f"Representation({dims})"


def from_blocks(P: StringPresentation, dims: Dict[str, int], blocks: Dict[str, np.ndarray]) -> Representation:
    """Build from per-vertex dimensions and per-arrow (head x tail) matrices."""
    f = P.field
    vertex_of, labels = [], []
    for v in P.vertices:
        for k in range(dims.get(v, 0)):
            vertex_of.append(v)
            labels.append(f"{v}{k}")
    rep = Representation(P, tuple(vertex_of), tuple(labels), {})
    n = rep.dim
    for a in P.arrows:
        big = f.zeros(n, n)
        hi, ti = rep.indices(a.head), rep.indices(a.tail)
        m = np.asarray(blocks.get(a.name, f.zeros(len(hi), len(ti))), dtype=f.dtype)
        if m.shape != (len(hi), len(ti)):
            raise ModuleError(f"arrow {a.name} needs a {len(hi)}x{len(ti)} matrix")
        big[np.ix_(hi, ti)] = f.normalize(m)
        rep.matrices[a.name] = big
    return rep


def string_module(C: Word, P: StringPresentation) -> Representation:
    if not C.is_finite:
        raise WordError("string modules are built for finite words only")
    f = P.field
    n = len(C) + 1
    vertex_of = tuple(vertex_at(C, i, P) for i in range(n))
    mats = {a.name: f.zeros(n, n) for a in P.arrows}
    for i in range(n):
        if C.has_letter(i) and not C.letter(i).inverse:
            mats[C.letter(i).arrow][i - 1, i] = f.one
        if C.has_letter(i + 1) and C.letter(i + 1).inverse:
            mats[C.letter(i + 1).arrow][i + 1, i] = f.one
    return Representation(P, vertex_of, tuple(f"b{i}" for i in range(n)), mats)


def band_module(C: Word, t_matrix, P: StringPresentation) -> Representation:
    """M(C, V) for periodic C and V = (K^d, T), positions 1..p.

    b_{i-p} is identified with T b_i, so stepping down from position 1 lands in
    position p through T and stepping up from p lands in 1 through T^-1.
    """
    p = is_periodic(C)
    if p is None:
        raise WordError("band modules need a periodic word")
    f = P.field
    T = f.array(t_matrix) if not isinstance(t_matrix, np.ndarray) else f.normalize(t_matrix.copy())
    d = T.shape[0]
    if T.shape != (d, d) or not f.is_invertible(T):
        raise ModuleError("band coefficient must be an invertible square matrix")
    Tinv = f.inverse(T)
    n = p * d
    mats = {a.name: f.zeros(n, n) for a in P.arrows}

    def put(m, to, frm, block):
        r, c = (to - 1) * d, (frm - 1) * d
        m[r:r + d, c:c + d] = f.add(m[r:r + d, c:c + d], block)

    eye = f.eye(d)
    for i in range(1, p + 1):
        li = C.letter(i)
        if not li.inverse:
            put(mats[li.arrow], i - 1 if i > 1 else p, i, eye if i > 1 else T)
        nx = C.letter(i + 1)
        if nx.inverse:
            put(mats[nx.arrow], i + 1 if i < p else 1, i, eye if i < p else Tinv)
    vertex_of = tuple(vertex_at(C, i, P) for i in range(1, p + 1) for _ in range(d))
    labels = tuple(f"b{i}.{k}" for i in range(1, p + 1) for k in range(d))
    return Representation(P, vertex_of, labels, mats)


def direct_sum(mods: Sequence[Representation]) -> Representation:
    mods = list(mods)
    if not mods:
        raise ModuleError("empty direct sum needs a presentation")
    P = mods[0].presentation
    if any(m.presentation != P for m in mods):
        raise ModuleError("summands over different presentations")
    f = P.field
    mats = {a.name: la.block_diag(f, [m.matrices[a.name] for m in mods]) for a in P.arrows}
    vertex_of = sum((m.vertex_of for m in mods), ())
    labels = tuple(f"{k}:{l}" for k, m in enumerate(mods) for l in m.labels)
    return Representation(P, vertex_of, labels, mats)


def zero_module(P: StringPresentation) -> Representation:
    f = P.field
    return Representation(P, (), (), {a.name: f.zeros(0, 0) for a in P.arrows})


# ---------------------------------------------------------------------------
# morphisms


def hom_basis(M: Representation, N: Representation) -> List[np.ndarray]:
    """Basis of Hom(M, N) as N.dim x M.dim matrices."""
    f = M.field
    m, n = M.dim, N.dim
    cells = [(r, c) for r in range(n) for c in range(m) if N.vertex_of[r] == M.vertex_of[c]]
    if not cells:
        return []
    col = {cell: k for k, cell in enumerate(cells)}
    eqs = []
    for a in M.presentation.arrows:
        A, B = M.matrices[a.name], N.matrices[a.name]
        # (h A - B h)[r, c] = sum_k h[r,k] A[k,c] - sum_k B[r,k] h[k,c]
        rows = f.zeros(n * m, len(cells))
        for (r, k), j in col.items():
            for c in np.nonzero(A[k])[0]:
                rows[r * m + c, j] = f(rows[r * m + c, j] + A[k, c])
        for (k, c), j in col.items():
            for r in np.nonzero(B[:, k])[0]:
                rows[r * m + c, j] = f(rows[r * m + c, j] - B[r, k])
        eqs.append(rows)
    sysm = np.vstack(eqs) if eqs else f.zeros(0, len(cells))
    ker = f.kernel(sysm)
    out = []
    for v in ker:
        h = f.zeros(n, m)
        for (r, c), j in col.items():
            h[r, c] = v[j]
        out.append(h)
    return out


def is_homomorphism(M: Representation, N: Representation, h) -> bool:
    f = M.field
    if h.shape != (N.dim, M.dim):
        return False
    for r in range(N.dim):
        for c in range(M.dim):
            if h[r, c] and N.vertex_of[r] != M.vertex_of[c]:
                return False
    return all(np.array_equal(f.matmul(h, M.matrices[a.name]), f.matmul(N.matrices[a.name], h))
               for a in M.presentation.arrows)


def find_isomorphism(M: Representation, N: Representation, rng=None, tries=64) -> Optional[np.ndarray]:
    """An isomorphism M -> N found as a random element of Hom, or None."""
    if M.vertex_dims() != N.vertex_dims():
        return None
    f = M.field
    if M.dim == 0:
        return f.zeros(0, 0)
    basis = hom_basis(M, N)
    if not basis:
        return None
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(tries):
        h = f.zeros(N.dim, M.dim)
        for b in basis:
            h = f.add(h, f.scale(f.random_element(rng), b))
        if f.is_invertible(h):
            return h
    return None


def reversal(n: int, field: Field) -> np.ndarray:
    """The permutation b_i -> b_{n-1-i} on an n-dimensional basis."""
    m = field.zeros(n, n)
    for i in range(n):
        m[n - 1 - i, i] = field.one
    return m


# ---------------------------------------------------------------------------
# endomorphism algebra


@dataclass(frozen=True, eq=False)
class EndomorphismAlgebra:
    field: Field
    basis: Tuple[np.ndarray, ...]
    radical: Tuple[np.ndarray, ...]
    is_local: bool
    method: str

    @property
    def dim(self) -> int:
        return len(self.basis)


def _flat(ms: Sequence[np.ndarray], f: Field, n: int) -> np.ndarray:
    if not ms:
        return f.zeros(0, n * n)
    return np.vstack([m.reshape(1, -1) for m in ms])


def _radical_char0(f: Field, basis) -> List[np.ndarray]:
    # J = {a : tr(ab) = 0 for all b}
    k = len(basis)
    G = f.zeros(k, k)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            G[j, i] = f((a * b.T).sum())     # tr(ab)
    ker = f.kernel(G)
    return [_combo(f, basis, c) for c in ker]


def _combo(f: Field, basis, coeffs) -> np.ndarray:
    n = basis[0].shape[0]
    out = f.zeros(n, n)
    for c, b in zip(coeffs, basis):
        if c:
            out = f.add(out, f.scale(c, b))
    return out


def _radical_charp(f: Field, basis) -> List[np.ndarray]:
    """Radical of a matrix algebra over F_p by the integer-lift trace chain."""
    p = f.characteristic
    n = basis[0].shape[0]
    cur = list(basis)
    top = int(math.floor(math.log(n, p))) if n > 1 else 0
    for i in range(top + 1):
        if not cur:
            break
        mod = p ** (i + 1)
        G = f.zeros(len(basis), len(cur))
        for c, a in enumerate(cur):
            for r, b in enumerate(basis):
                x = np.array(f.matmul(a, b), dtype=object)   # lift to 0..p-1
                y = _int_pow(x, p ** i, mod)
                t = sum(y[j, j] for j in range(n)) % mod
                G[r, c] = f(t // (p ** i))
        ker = f.kernel(G)
        cur = [_combo(f, cur, c) for c in ker]
    return cur


def _int_pow(x: np.ndarray, e: int, mod: int) -> np.ndarray:
    n = x.shape[0]
    result = np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)
    base = x % mod
    while e:
        if e & 1:
            result = (result.dot(base)) % mod
        base = (base.dot(base)) % mod
        e >>= 1
    return result


def _is_nilpotent_ideal(f: Field, basis, rad) -> bool:
    if not rad:
        return True
    n = basis[0].shape[0]
    rs = Subspace(f, n * n, _flat(rad, f, n))
    for a in rad:
        for b in basis:
            if not (rs.contains_vector(f.matmul(a, b).reshape(-1))
                    and rs.contains_vector(f.matmul(b, a).reshape(-1))):
                return False
    # an ideal spanned by nilpotent matrices whose products stay inside is nilpotent
    power = list(rad)
    for _ in range(n):
        power = [f.matmul(a, b) for a in power for b in rad]
        power = list(Subspace(f, n * n, _flat(power, f, n)).basis.reshape(-1, n, n)) if power else []
        if not power or not any(np.any(m) for m in power):
            return True
    return False


def _quotient_coords(f, comp_basis, rad_space: Subspace, x) -> np.ndarray:
    n2 = x.size
    stacked = [m.reshape(-1) for m in comp_basis] + list(rad_space.basis)
    A = np.vstack(stacked).T if stacked else f.zeros(n2, 0)
    sol = la.solve(A, x.reshape(-1), f)
    if sol is None:
        raise ModuleError("element outside the algebra")
    return sol[:len(comp_basis)]


def endomorphism_algebra(M: Representation, rng=None, check=False) -> EndomorphismAlgebra:
    """End(M) with its radical and a locality verdict.

    The radical is the trace-form kernel in characteristic 0 and the
    integer-lift trace chain over F_p.  M is local when End/J is a field:
    over F_p this is commutativity plus a one-dimensional Frobenius-fixed
    space; over Q a primitive-element minimal polynomial must be irreducible.
    ``check`` re-verifies that the radical is a nilpotent ideal.
    """
    f = M.field
    basis = hom_basis(M, M)
    if not basis:
        return EndomorphismAlgebra(f, (), (), False, "zero module")
    n = M.dim
    rad = _radical_char0(f, basis) if f.characteristic == 0 else _radical_charp(f, basis)
    if check and not _is_nilpotent_ideal(f, basis, rad):
        raise ModuleError("computed radical is not a nilpotent ideal")
    rs = Subspace(f, n * n, _flat(rad, f, n)) if rad else Subspace(f, n * n)
    full = Subspace(f, n * n, _flat(basis, f, n))
    comp = la.complement(rs, full)
    cb = [row.reshape(n, n) for row in comp.basis] if comp.dim else []
    r = len(cb)
    if r == 1:
        return EndomorphismAlgebra(f, tuple(basis), tuple(rad), True, "End/J is the field K")
    commutative = all(rs.contains_vector(f.sub(f.matmul(a, b), f.matmul(b, a)).reshape(-1))
                      for a in cb for b in cb)
    if f.characteristic:
        if not commutative:
            return EndomorphismAlgebra(f, tuple(basis), tuple(rad), False,
                                       "End/J is not commutative")
        p = f.characteristic
        F = f.zeros(r, r)
        for j, c in enumerate(cb):
            cp = c
            for _ in range(p - 1):
                cp = f.matmul(cp, c)
            F[:, j] = _quotient_coords(f, cb, rs, f.sub(cp, c))
        fixed = r - f.rank(F)
        return EndomorphismAlgebra(f, tuple(basis), tuple(rad), fixed == 1,
                                   f"Frobenius-fixed part of End/J has dimension {fixed}")
    return _local_over_q(f, basis, rad, cb, rs, commutative, rng)


def _local_over_q(f, basis, rad, cb, rs, commutative, rng):
    import sympy

    rng = rng if rng is not None else np.random.default_rng(0)
    r = len(cb)
    t = sympy.Symbol("t")
    for _ in range(8):
        x = _combo(f, cb, [f(int(rng.integers(-9, 10))) for _ in cb])
        # minimal polynomial of x modulo J
        powers = [_quotient_coords(f, cb, rs, f.eye(x.shape[0]))]
        cur = None
        while True:
            cur = x if cur is None else f.matmul(cur, x)
            v = _quotient_coords(f, cb, rs, cur)
            A = np.vstack(powers).T
            sol = la.solve(A, v, f)
            if sol is not None:
                coeffs = [-c for c in sol] + [1]
                break
            powers.append(v)
        poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator)
                                         for c in coeffs])), t)
        _, factors = sympy.factor_list(poly.as_expr(), t)
        if len(factors) > 1 or any(e > 1 for _, e in factors):
            return EndomorphismAlgebra(f, tuple(basis), tuple(rad), False,
                                       "End/J has a zero divisor")
        if commutative and poly.degree() == r:
            return EndomorphismAlgebra(f, tuple(basis), tuple(rad), True,
                                       "End/J is a field (irreducible primitive element)")
    return EndomorphismAlgebra(f, tuple(basis), tuple(rad), True,
                               "no zero divisor found in End/J by sampling")


def is_indecomposable(M: Representation) -> bool:
    return endomorphism_algebra(M).is_local


def format_representation(M: Representation) -> str:
    lines = []
    for v, d in M.vertex_dims().items():
        lines.append(f"vertex {v} {d}")
    for a in M.presentation.arrows:
        m = M.arrow_matrix(a.name)
        lines.append(f"arrow {a.name} {m.shape[0]}x{m.shape[1]}")
        for row in m:
            lines.append("  " + ", ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
