"""Univariate polynomials over an exact field, as coefficient lists (low degree first).

Only what the rational canonical form needs: division, gcd, Smith form of
``tI - A`` and companion matrices.
"""

from __future__ import annotations

from typing import List

from .exactla import Field

Poly = List  # coefficients, constant term first; [] is the zero polynomial


def trim(a: Poly) -> Poly:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def deg(a: Poly) -> int:
    return len(trim(a)) - 1


def add(F: Field, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return trim([F(F((a[i] if i < len(a) else 0)) + F((b[i] if i < len(b) else 0)))
                 for i in range(n)])


def scale(F: Field, c, a: Poly) -> Poly:
    return trim([F(c * x) for x in a])


def sub(F: Field, a: Poly, b: Poly) -> Poly:
    return add(F, a, scale(F, -1, b))


def mul(F: Field, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [F(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F(out[i + j] + x * y)
    return trim(out)


def divmod_(F: Field, a: Poly, b: Poly):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [F(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead_inv = F.inv(b[-1])
    while len(r) >= len(b) and r:
        c = F(r[-1] * lead_inv)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = F(r[k + i] - c * y)
        r = trim(r)
    return trim(q), r


def monic(F: Field, a: Poly) -> Poly:
    a = trim(a)
    if not a:
        return a
    return scale(F, F.inv(a[-1]), a)


def gcd(F: Field, a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def invariant_factors(F: Field, A) -> List[Poly]:
    """Non-unit invariant factors of the square matrix A (f_1 | f_2 | ...)."""
    n = A.shape[0]
    M = [[([F(-A[i, j])] if A[i, j] else []) for j in range(n)] for i in range(n)]
    for i in range(n):
        M[i][i] = add(F, M[i][i], [F(0), F(1)])
    diag = []
    for k in range(n):
        while True:
            cand = [(deg(M[i][j]), i, j) for i in range(k, n) for j in range(k, n) if M[i][j]]
            if not cand:
                break
            _, i, j = min(cand)
            M[k], M[i] = M[i], M[k]
            for row in M:
                row[k], row[j] = row[j], row[k]
            piv = M[k][k]
            dirty = False
            for i in range(k + 1, n):
                if M[i][k]:
                    q, r = divmod_(F, M[i][k], piv)
                    M[i] = [sub(F, M[i][c], mul(F, q, M[k][c])) for c in range(n)]
                    dirty = dirty or bool(r)
            for j in range(k + 1, n):
                if M[k][j]:
                    q, r = divmod_(F, M[k][j], piv)
                    for row in M:
                        row[j] = sub(F, row[j], mul(F, q, row[k]))
                    dirty = dirty or bool(r)
            if dirty:
                continue
            bad = [(i, j) for i in range(k + 1, n) for j in range(k + 1, n)
                   if M[i][j] and divmod_(F, M[i][j], piv)[1]]
            if bad:
                i, _ = bad[0]
                M[k] = [add(F, M[k][c], M[i][c]) for c in range(n)]
                continue
            break
        diag.append(monic(F, M[k][k]))
    return [d for d in diag if deg(d) > 0]


def companion(F: Field, f: Poly):
    """Companion matrix of the monic f: ones below the diagonal, last column -coeffs."""
    f = monic(F, f)
    d = deg(f)
    C = F.zeros(d, d)
    for i in range(1, d):
        C[i, i - 1] = F.one
    for i in range(d):
        C[i, d - 1] = F(-f[i])
    return C


def format_poly(f: Poly, var: str = "t") -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(mono)
        elif mono:
            terms.append(f"{c}*{mono}")
        else:
            terms.append(str(c))
    return " + ".join(terms) if terms else "0"
