"""Filtrations of modules by words and the refined functors F_{B,D}, G_{B,D}.

Everything lives in e_v M, in the coordinates of the basis vectors of M that
sit at v (in their order inside M).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import exactla as la
from . import relations as rel
from .exactla import Subspace
from .presentation import Letter, SignTable, assign_signs
from .relations import LinearRelation
from .strmod import ModuleError, Representation, is_homomorphism
from .words import (Word, WordError, compose, finite, head, inverse, is_periodic,
                    tail, word_sign)


def vertex_space_dim(M: Representation, v: str) -> int:
    return len(M.indices(v))


def letter_relation(l: Letter, M: Representation) -> LinearRelation:
    m = M.arrow_matrix(l.arrow)
    g = rel.graph_of(m, M.field)
    return rel.inverse(g) if l.inverse else g


def word_relation(C: Word, M: Representation) -> LinearRelation:
    """The relation from e_{tail C} M to e_{head C} M given by a finite word."""
    if not C.is_finite:
        raise WordError("word_relation needs a finite word")
    if C.is_trivial:
        return rel.identity(M.field, vertex_space_dim(M, C.vertex))
    out = None
    for l in C.core:
        r = letter_relation(l, M)
        out = r if out is None else rel.compose(out, r)
    return out


def apply_letters(letters, U: Subspace, M: Representation, cache=None) -> Subspace:
    """C_1 C_2 ... C_k U, applying the last letter first.

    ``cache`` (a dict private to M) memoises letter relations and single steps.
    """
    for l in reversed(tuple(letters)):
        if cache is None:
            U = rel.apply(letter_relation(l, M), U)
            continue
        key = (l, U)
        if key not in cache:
            if l not in cache:
                cache[l] = letter_relation(l, M)
            cache[key] = rel.apply(cache[l], U)
        U = cache[key]
    return U


def _extends(C: Word, l: Letter, M: Representation, signs: SignTable) -> bool:
    try:
        compose(C, finite(l), M.presentation, signs)
    except WordError:
        return False
    return True


def filtration(C: Word, M: Representation, signs: SignTable = None,
               cache=None) -> Tuple[Subspace, Subspace]:
    """(C^+(M), C^-(M)) inside e_{head C} M."""
    P = M.presentation
    signs = signs if signs is not None else assign_signs(P)
    f = M.field
    if C.is_finite:
        u = tail(C, P)
        plus = minus = None
        for a in P.arrows:
            xi, y = Letter(a.name, True), Letter(a.name)
            # C x^-1 0 and C y M
            if plus is None and P.head(xi) == u and _extends(C, xi, M, signs):
                plus = apply_letters(C.core + (xi,), Subspace(f, vertex_space_dim(M, P.tail(xi))), M, cache)
            if minus is None and P.head(y) == u and _extends(C, y, M, signs):
                minus = apply_letters(C.core + (y,), Subspace.full(f, vertex_space_dim(M, P.tail(y))), M, cache)
        du = vertex_space_dim(M, u)
        if plus is None:
            plus = apply_letters(C.core, Subspace.full(f, du), M, cache)
        if minus is None:
            minus = apply_letters(C.core, Subspace(f, du), M, cache)
        return plus, minus
    if C.kind != "N":
        raise WordError("filtrations are defined for finite words and N-words")
    E = C.right
    # stabilising chains E^n M (down) and E^n 0 (up)
    w = P.tail(E[-1])
    out = []
    for start in (Subspace.full(f, vertex_space_dim(M, w)), Subspace(f, vertex_space_dim(M, w))):
        cur = start
        while True:
            nxt = apply_letters(E, cur, M, cache)
            if nxt == cur:
                break
            cur = nxt
        out.append(apply_letters(C.core, cur, M, cache))
    return out[0], out[1]


def _letters_relation(letters, M: Representation, v: str) -> LinearRelation:
    out = rel.identity(M.field, vertex_space_dim(M, v))
    for l in letters:
        out = rel.compose(out, letter_relation(l, M))
    return out


@dataclass(frozen=True, eq=False)
class RefinedFunctorValue:
    plus: Subspace
    minus: Subspace
    quotient_dim: int
    t_matrix: Optional[np.ndarray] = None
    lifts: Optional[np.ndarray] = None


def _check_pair(B: Word, D: Word, M: Representation, signs: SignTable):
    P = M.presentation
    if head(B, P) != head(D, P):
        raise WordError("B and D must share their head")
    if word_sign(B, signs) != 1 or word_sign(D, signs) != -1:
        raise WordError("B needs sign +1 and D sign -1")


def periodic_block(B: Word, D: Word, M: Representation, signs: SignTable) -> Optional[Tuple[Letter, ...]]:
    """E with D = E^inf and B = (E^-1)^inf when B^-1 D is periodic, else None."""
    if B.kind != "N" or D.kind != "N":
        return None
    try:
        C = compose(inverse(B), D, M.presentation, signs)
    except WordError:
        return None
    p = is_periodic(C)
    if p is None:
        return None
    return tuple(D.letter(i) for i in range(1, p + 1))


def _lifts(minus: Subspace, plus: Subspace) -> np.ndarray:
    comp = la.complement(minus, plus)
    return comp.basis


def refined_functor(B: Word, D: Word, M: Representation, signs: SignTable = None) -> RefinedFunctorValue:
    P = M.presentation
    signs = signs if signs is not None else assign_signs(P)
    _check_pair(B, D, M, signs)
    E = periodic_block(B, D, M, signs)
    if E is not None:
        ER = _letters_relation(E, M, head(D, P))
        data = rel.sharp_flat(ER)
        tm = rel.induced_T(ER, data)
        return RefinedFunctorValue(data.sharp, data.flat, tm.dim, tm.t_matrix, tm.lifts)
    bp, bm = filtration(B, M, signs)
    dp, dm = filtration(D, M, signs)
    plus = la.intersect(bp, dp)
    minus = la.sum_(la.intersect(bp, dm), la.intersect(bm, dp))
    return RefinedFunctorValue(plus, minus, plus.dim - minus.dim, None, _lifts(minus, plus))


def g_functor(B: Word, D: Word, M: Representation, signs: SignTable = None) -> RefinedFunctorValue:
    """G^{+-} = B^- + (D^{+-} & B^+).

    With the B superscripts the other way round both G^+ and G^- collapse to
    B^+ (as B^- lies in B^+), so this is the reading isomorphic to F.
    """
    P = M.presentation
    signs = signs if signs is not None else assign_signs(P)
    _check_pair(B, D, M, signs)
    bp, bm = filtration(B, M, signs)
    dp, dm = filtration(D, M, signs)
    plus = la.sum_(bm, la.intersect(dp, bp))
    minus = la.sum_(bm, la.intersect(dm, bp))
    return RefinedFunctorValue(plus, minus, plus.dim - minus.dim, None, _lifts(minus, plus))


def _quotient_coords(minus: Subspace, lifts: np.ndarray, v):
    f = minus.field
    basis = np.vstack([minus.basis, lifts]) if minus.dim else lifts
    if basis.shape[0] == 0:
        return f.zeros(1, 0)[0]
    x = la.solve(basis.T, v, f)
    if x is None:
        raise ModuleError("vector outside the filtration space")
    return x[minus.dim:]


def functor_on_morphism(B: Word, D: Word, h: np.ndarray, M: Representation,
                        N: Representation, signs: SignTable = None) -> np.ndarray:
    """Matrix of F_{B,D}(h): F_{B,D}(M) -> F_{B,D}(N) in the lift bases."""
    if not is_homomorphism(M, N, h):
        raise ModuleError("map does not commute with the arrows")
    P = M.presentation
    signs = signs if signs is not None else assign_signs(P)
    v = head(B, P)
    hv = h[np.ix_(N.indices(v), M.indices(v))]
    fm = refined_functor(B, D, M, signs)
    fn = refined_functor(B, D, N, signs)
    f = M.field
    out = f.zeros(fn.quotient_dim, fm.quotient_dim)
    for j, row in enumerate(fm.lifts):
        img = f.matmul(hv, row.reshape(-1, 1))[:, 0]
        if not fn.plus.contains_vector(img):
            raise ModuleError("filtration is not preserved")
        out[:, j] = _quotient_coords(fn.minus, fn.lifts, img)
    return out
