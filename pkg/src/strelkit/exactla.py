"""Exact linear algebra over the rationals and prime fields.

Matrices are numpy arrays: ``int64`` residues for F_p, ``object`` arrays of
:class:`fractions.Fraction` for Q.  A matrix of shape ``(m, n)`` maps K^n to
K^m acting on column vectors.  Subspaces are stored by a reduced row-echelon
basis, so two subspaces are equal exactly when their bases are.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np


class FieldMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class Field:
    """Base class for the two supported scalar fields."""

    characteristic = 0
    dtype: object = object

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        raise NotImplementedError

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def parse(self, token: str):
        raise NotImplementedError

    def random_element(self, rng, nonzero=False):
        raise NotImplementedError

    # array helpers -----------------------------------------------------

    def array(self, rows, shape=None) -> np.ndarray:
        if isinstance(rows, np.ndarray) and rows.dtype == self.dtype and rows.ndim == 2:
            out = self.normalize(rows.copy())
        else:
            rows = [list(r) for r in rows]
            if shape is None:
                shape = (len(rows), len(rows[0]) if rows else 0)
            out = self.zeros(*shape)
            for i, row in enumerate(rows):
                for j, x in enumerate(row):
                    out[i, j] = self(x)
        return out

    def vector(self, entries) -> np.ndarray:
        entries = list(entries)
        out = np.empty(len(entries), dtype=self.dtype)
        for i, x in enumerate(entries):
            out[i] = self(x)
        return out

    def zeros(self, m: int, n: int) -> np.ndarray:
        out = np.empty((m, n), dtype=self.dtype)
        out[...] = self.zero
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        return self.normalize(a @ b)

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def scale(self, c, a):
        return self.normalize(a * c)

    def random_matrix(self, rng, m: int, n: int) -> np.ndarray:
        out = self.zeros(m, n)
        for i in range(m):
            for j in range(n):
                out[i, j] = self.random_element(rng)
        return out

    # elimination --------------------------------------------------------

    def rref(self, a: np.ndarray):
        """Return ``(R, pivots)`` with R the nonzero rows of the RREF of ``a``."""
        m = self.normalize(np.array(a, dtype=self.dtype, copy=True))
        if m.ndim != 2:
            raise DimensionMismatch("rref expects a 2-d array")
        nrows, ncols = m.shape
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
            m[r] = self.normalize(m[r] * self.inv(m[r, c]))
            col = m[:, c].copy()
            col[r] = self.zero
            rows = np.nonzero(col)[0]
            if rows.size:
                m[rows] = self.normalize(m[rows] - self.normalize(np.outer(col[rows], m[r])))
            pivots.append(c)
            r += 1
        return m[:r], pivots

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows spanning ``{v : a v = 0}``."""
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.eye(n)
        r, pivots = self.rref(a)
        free = [c for c in range(n) if c not in set(pivots)]
        out = self.zeros(len(free), n)
        for k, f in enumerate(free):
            out[k, f] = self.one
            for i, pc in enumerate(pivots):
                out[k, pc] = self.normalize(np.array([-r[i, f]], dtype=self.dtype))[0]
        return out

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        if a.shape != (n, n):
            raise DimensionMismatch("inverse of a non-square matrix")
        r, pivots = self.rref(np.hstack([a, self.eye(n)]))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return r[:n, n:]

    def is_invertible(self, a: np.ndarray) -> bool:
        return a.shape[0] == a.shape[1] and self.rank(a) == a.shape[0]


def _integral(a: np.ndarray):
    flat = a.ravel()
    # ints and Fractions both carry numerator/denominator
    d = math.lcm(*(x.denominator for x in flat)) if flat.size else 1
    ints = np.empty(a.shape, dtype=object)
    ints.ravel()[:] = [x.numerator * (d // x.denominator) for x in flat]
    return ints, d


def _to_fractions(arr, d: int) -> np.ndarray:
    out = np.empty(np.shape(arr), dtype=object)
    if out.ndim == 0:
        return Fraction(arr, d)
    out.ravel()[:] = [Fraction(int(x), d) for x in np.asarray(arr).ravel()]
    return out


class Rationals(Field):
    characteristic = 0
    dtype = object

    def __call__(self, x):
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def inv(self, a):
        return 1 / Fraction(a)

    def parse(self, token: str):
        return Fraction(token)

    def matmul(self, a, b):
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if a.size == 0 or b.size == 0:
            return self.normalize(a @ b)
        # clear denominators so the inner products run on Python ints
        ia, da = _integral(a)
        ib, db = _integral(b)
        d = da * db
        return _to_fractions(ia @ ib, d)

    def random_element(self, rng, nonzero=False):
        while True:
            x = Fraction(int(rng.integers(-4, 5)))
            if x or not nonzero:
                return x

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p >= 2**31 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not a prime below 2^31")
        self.p = p
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        return pow(int(a), -1, self.p)

    def normalize(self, arr):
        return np.asarray(arr, dtype=np.int64) % self.p

    def matmul(self, a, b):
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if (self.p - 1) ** 2 * max(a.shape[-1], 1) < 2**62:
            return (a @ b) % self.p
        return np.asarray((a.astype(object) @ b.astype(object)) % self.p, dtype=np.int64)

    def parse(self, token: str):
        return self(Fraction(token))

    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.p))

    def random_matrix(self, rng, m, n):
        return rng.integers(0, self.p, size=(m, n)).astype(np.int64)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(text: str) -> Field:
    """Parse ``Q`` or ``F <p>``."""
    parts = text.split()
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] == "F":
        return GF(int(parts[1]))
    raise ValueError(f"unknown field {text!r}")


def field_name(field: Field) -> str:
    return "Q" if isinstance(field, Rationals) else f"F {field.p}"


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of K^n held as an immutable RREF basis (one row per vector)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_ann", "_hash")

    def __init__(self, field: Field, ambient_dim: int, vectors=None, *, _reduced=False):
        self.field = field
        self.ambient_dim = int(ambient_dim)
        if vectors is None or len(vectors) == 0:
            basis, pivots = field.zeros(0, self.ambient_dim), []
        else:
            arr = vectors if isinstance(vectors, np.ndarray) else field.array(vectors)
            if arr.ndim == 1:
                arr = arr.reshape(1, -1)
            if arr.shape[1] != self.ambient_dim:
                raise DimensionMismatch(
                    f"vectors of length {arr.shape[1]} in ambient K^{self.ambient_dim}")
            if _reduced:
                basis = arr
                pivots = [int(np.nonzero(row)[0][0]) for row in arr]
            else:
                basis, pivots = field.rref(arr)
        basis = np.array(basis, dtype=field.dtype)
        basis.flags.writeable = False
        self.basis = basis
        self.pivots = tuple(pivots)
        self._ann = None
        self._hash = None

    @classmethod
    def zero(cls, field, n):
        return cls(field, n)

    @classmethod
    def full(cls, field, n):
        return cls(field, n, field.eye(n), _reduced=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def _key(self):
        return (self.field, self.ambient_dim, tuple(tuple(int(x) if not isinstance(x, Fraction) else x
                                                          for x in row) for row in self.basis))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.basis.shape == other.basis.shape
                and bool(np.all(self.basis == other.basis)))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __le__(self, other):
        return other.contains(self)

    def __repr__(self):
        rows = [" ".join(str(x) for x in row) for row in self.basis]
        return f"Subspace(K^{self.ambient_dim}, [{'; '.join(rows)}])"

    def annihilator(self) -> np.ndarray:
        """Rows ``w`` with ``w . v = 0`` for every ``v`` in the subspace."""
        if self._ann is None:
            ann = (self.field.eye(self.ambient_dim) if self.dim == 0
                   else self.field.kernel(self.basis))
            ann.flags.writeable = False
            self._ann = ann
        return self._ann

    def contains_vector(self, v) -> bool:
        v = np.asarray(v, dtype=self.field.dtype)
        ann = self.annihilator()
        if ann.shape[0] == 0:
            return True
        return not np.any(self.field.matmul(ann, v.reshape(-1, 1)))

    def contains(self, other: "Subspace") -> bool:
        _check(self, other)
        if other.dim == 0:
            return True
        ann = self.annihilator()
        if ann.shape[0] == 0:
            return True
        return not np.any(self.field.matmul(ann, other.basis.T))

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in this basis; raises if ``v`` is not in it."""
        x = solve(self.basis.T, np.asarray(v, dtype=self.field.dtype), self.field)
        if x is None:
            raise ValueError("vector not in subspace")
        return x

    def coordinate_matrix(self, vectors) -> np.ndarray:
        """Rows of coordinates for each row of ``vectors``."""
        vectors = np.asarray(vectors, dtype=self.field.dtype).reshape(-1, self.ambient_dim)
        out = self.field.zeros(vectors.shape[0], self.dim)
        for i, row in enumerate(vectors):
            out[i] = self.coordinates(row)
        return out


def _check(a: Subspace, b: Subspace):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient K^{a.ambient_dim} vs K^{b.ambient_dim}")


def span(field: Field, n: int, vectors=()) -> Subspace:
    return Subspace(field, n, vectors if len(vectors) else None)


def sum_(a: Subspace, b: Subspace) -> Subspace:
    _check(a, b)
    if a.dim == 0:
        return b
    if b.dim == 0:
        return a
    return Subspace(a.field, a.ambient_dim, np.vstack([a.basis, b.basis]))


def sum_all(field: Field, n: int, spaces: Sequence[Subspace]) -> Subspace:
    rows = [s.basis for s in spaces if s.dim]
    if not rows:
        return Subspace(field, n)
    return Subspace(field, n, np.vstack(rows))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.field, a.ambient_dim)
    f = a.field
    ann_b = b.annihilator()
    if ann_b.shape[0] == 0:
        return a
    coeffs = f.kernel(f.matmul(ann_b, a.basis.T))
    if coeffs.shape[0] == 0:
        return Subspace(f, a.ambient_dim)
    return Subspace(f, a.ambient_dim, f.matmul(coeffs, a.basis))


def image(f_mat: np.ndarray, u: Subspace) -> Subspace:
    f = u.field
    if f_mat.shape[1] != u.ambient_dim:
        raise DimensionMismatch("map domain does not match subspace ambient")
    if u.dim == 0:
        return Subspace(f, f_mat.shape[0])
    return Subspace(f, f_mat.shape[0], f.matmul(u.basis, f_mat.T))


def preimage(f_mat: np.ndarray, b: Subspace) -> Subspace:
    """``{v : f v in B}``."""
    f = b.field
    if f_mat.shape[0] != b.ambient_dim:
        raise DimensionMismatch("map codomain does not match subspace ambient")
    n = f_mat.shape[1]
    ann = b.annihilator()
    if ann.shape[0] == 0:
        return Subspace.full(f, n)
    return Subspace(f, n, f.kernel(f.matmul(ann, f_mat)))


def kernel_space(f_mat: np.ndarray, field: Field) -> Subspace:
    return Subspace(field, f_mat.shape[1], field.kernel(f_mat))


def complement(a: Subspace, inside: Subspace) -> Subspace:
    """A subspace U with ``a + U = inside`` and ``a & U = 0``.

    Built greedily from the RREF rows of ``inside`` (lowest pivot first).
    """
    _check(a, inside)
    if not inside.contains(a):
        raise ValueError("subspace is not contained in the given space")
    f = a.field
    if a.dim == inside.dim:
        return Subspace(f, a.ambient_dim)
    stacked = np.vstack([a.basis, inside.basis])
    _, piv = f.rref(stacked.T)
    chosen = [p - a.dim for p in piv if p >= a.dim]
    return Subspace(f, a.ambient_dim, inside.basis[chosen])


def solve(a: np.ndarray, b, field: Field) -> Optional[np.ndarray]:
    """Some ``x`` with ``a x = b``, or ``None`` when no solution exists."""
    b = np.asarray(b, dtype=field.dtype).reshape(-1)
    m, n = a.shape
    if b.shape[0] != m:
        raise DimensionMismatch("right-hand side has the wrong length")
    if m == 0:
        return field.zeros(1, n)[0]
    r, piv = field.rref(np.hstack([a, b.reshape(-1, 1)]))
    if piv and piv[-1] == n:
        return None
    x = field.zeros(1, n)[0]
    for i, c in enumerate(piv):
        x[c] = r[i, n]
    return x


def block_diag(field: Field, blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = field.zeros(rows, cols)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out
