"""Dense linear algebra over a prime field F_p.

Matrices are plain 2-D numpy arrays whose entries are canonical residues in
``[0, p)``.  The array dtype depends on the prime:

* ``p = 2**61 - 1`` (the default) uses ``uint64`` with a split multiply and
  Mersenne folding, so no intermediate ever exceeds 64 bits;
* ``p < 2**31`` uses ``int64`` and plain ``%``;
* any other prime below ``2**63`` falls back to ``object`` arrays of Python ints.

All routines are deterministic: pivots are chosen as the first nonzero entry.
"""

from __future__ import annotations

import numpy as np
import sympy

from .errors import InputError, SingularMatrixError

MERSENNE_61 = (1 << 61) - 1

_U = np.uint64
_M61 = _U(MERSENNE_61)
_MASK31 = _U((1 << 31) - 1)
_MASK30 = _U((1 << 30) - 1)
_MASK32 = _U((1 << 32) - 1)
_S1, _S30, _S31, _S32, _S61 = _U(1), _U(30), _U(31), _U(32), _U(61)
_TWO32 = _U(1 << 32)


def _fold61(x):
    """Reduce uint64 values (any size) into [0, p) for the Mersenne prime."""
    x = (x & _M61) + (x >> _S61)
    return x - _M61 * (x >= _M61)


def _mul61(a, b):
    ah, al = a >> _S31, a & _MASK31
    bh, bl = b >> _S31, b & _MASK31
    mid = ah * bl + al * bh
    x = ((ah * bh) << _S1) + (mid >> _S30) + ((mid & _MASK30) << _S31) + al * bl
    return _fold61(x)


class PrimeField:
    """Arithmetic in F_p on numpy arrays."""

    def __init__(self, p: int = MERSENNE_61):
        p = int(p)
        if p < 3 or p >= 1 << 63 or not sympy.isprime(p):
            raise InputError(f"field size must be an odd prime below 2**63, got {p}")
        self.p = p
        if p == MERSENNE_61:
            self.kind, self.dtype = "m61", np.uint64
        elif p < 1 << 31:
            self.kind, self.dtype = "small", np.int64
        else:
            self.kind, self.dtype = "big", object

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    # construction -------------------------------------------------------

    def array(self, values) -> np.ndarray:
        """Canonical residues of an integer array-like (negatives allowed)."""
        a = np.asarray(values)
        if a.dtype == object or self.kind == "big":
            out = np.empty(a.shape, dtype=object)
            out.flat[:] = [int(v) % self.p for v in a.flat]
            return out if self.kind == "big" else out.astype(self.dtype)
        if a.dtype.kind == "u" and self.kind == "m61":
            return _fold61(a.astype(np.uint64))
        return np.mod(a.astype(np.int64), self.p).astype(self.dtype)

    def zeros(self, shape) -> np.ndarray:
        z = np.zeros(shape, dtype=self.dtype)
        if self.kind == "big":
            z[...] = 0
        return z

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros((n, n))
        for i in range(n):
            m[i, i] = 1
        return m

    def random(self, rng: np.random.Generator, shape, *, nonzero=False) -> np.ndarray:
        low = 1 if nonzero else 0
        if self.kind == "m61":
            return rng.integers(low, self.p, size=shape, dtype=np.uint64)
        vals = rng.integers(low, self.p, size=shape, dtype=np.int64)
        return vals if self.kind == "small" else vals.astype(object)

    # elementwise ----------------------------------------------------------

    def add(self, a, b):
        if self.kind == "m61":
            s = a + b
            return s - _M61 * (s >= _M61)
        return (a + b) % self.p

    def sub(self, a, b):
        if self.kind == "m61":
            d = a + (_M61 - b)
            return d - _M61 * (d >= _M61)
        return (a - b) % self.p

    def neg(self, a):
        if self.kind == "m61":
            d = _M61 - a
            return d - _M61 * (d >= _M61)
        return (-a) % self.p

    def mul(self, a, b):
        if self.kind == "m61":
            return _mul61(a, b)
        return (a * b) % self.p

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(x, -1, self.p)

    def scalar(self, x):
        """A scalar in this field's dtype, suitable for broadcasting."""
        x = int(x) % self.p
        return self.dtype(x) if self.kind != "big" else x

    # reductions -----------------------------------------------------------

    def sum(self, a, axis=None):
        if self.kind == "m61":
            hi = np.sum(a >> _S32, axis=axis, dtype=np.uint64)
            lo = np.sum(a & _MASK32, axis=axis, dtype=np.uint64)
            return self.add(_mul61(_fold61(hi), _TWO32), _fold61(lo))
        if self.kind == "small":
            return np.sum(a, axis=axis, dtype=np.int64) % self.p
        return np.sum(a, axis=axis) % self.p

    def matmul(self, a, b, chunk: int = 1 << 22):
        """Matrix product.  Splits the inner dimension to bound memory."""
        a = np.asarray(a)
        b = np.asarray(b)
        n, k = a.shape
        k2, m = b.shape
        if k != k2:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if self.kind == "small" and self.p < 1 << 26 and k < 2048:
            # products stay below 2**52, so int64 accumulation is exact
            return (a @ b) % self.p
        out = self.zeros((n, m))
        if k == 0 or n == 0 or m == 0:
            return out
        step = max(1, chunk // max(1, n * m))
        for s in range(0, k, step):
            e = min(k, s + step)
            prod = self.mul(a[:, s:e, None], b[None, s:e, :])
            out = self.add(out, self.sum(prod, axis=1))
        return out

    def dot(self, coef, rows):
        """``coef @ rows`` for a vector ``coef`` and a 2-D ``rows``."""
        if len(coef) == 0:
            return self.zeros(rows.shape[1])
        return self.sum(self.mul(coef[:, None], rows), axis=0)


DEFAULT_FIELD = PrimeField()


def _first_nonzero(vec) -> int:
    nz = np.flatnonzero(vec != 0)
    return int(nz[0]) if len(nz) else -1


class IncrementalBasis:
    """Grows a reduced row-echelon basis one vector at a time.

    ``add`` reports whether the vector was independent of everything added
    before, which is exactly the greedy test for column matroids.
    """

    def __init__(self, dim: int, field: PrimeField = DEFAULT_FIELD):
        self.field = field
        self.dim = dim
        self.rows = field.zeros((0, dim))
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec):
        f = self.field
        if not self.pivots:
            return vec
        coef = vec[self.pivots]
        return f.sub(vec, f.dot(coef, self.rows))

    def add(self, vec) -> bool:
        f = self.field
        if len(self.pivots) >= self.dim:
            return False
        x = self.reduce(np.asarray(vec))
        j = _first_nonzero(x)
        if j < 0:
            return False
        x = f.mul(x, f.scalar(f.inv(x[j])))
        if self.pivots:
            col = self.rows[:, j]
            if np.any(col != 0):
                self.rows = f.sub(self.rows, f.mul(col[:, None], x[None, :]))
        self.rows = np.vstack([self.rows, x[None, :]])
        self.pivots.append(j)
        return True


def maximal_independent_columns(M, field: PrimeField = DEFAULT_FIELD) -> list[int]:
    """Greedy (by index) maximal independent set of column indices."""
    M = np.asarray(M)
    basis = IncrementalBasis(M.shape[0], field)
    return [j for j in range(M.shape[1]) if basis.add(M[:, j])]


def rank(M, field: PrimeField = DEFAULT_FIELD) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if M.shape[0] < M.shape[1]:
        M = M.T
    return len(maximal_independent_columns(M, field))


def batch_rank(M, field: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Ranks of a stack of equally shaped matrices ``M[b]``.

    Fraction-free elimination (rows are scaled by the pivot instead of divided),
    vectorised across the stack.
    """
    f = field
    M = np.array(M, copy=True)
    q, r, s = M.shape
    rk = np.zeros(q, dtype=np.int64)
    rows = np.arange(r)[None, :]
    for j in range(s):
        col = M[:, :, j]
        eligible = (col != 0) & (rows >= rk[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        piv = eligible[b].argmax(axis=1)
        top = rk[b]
        prow = M[b, piv].copy()
        M[b, piv] = M[b, top]
        M[b, top] = prow
        sub = M[b]
        factor = sub[:, :, j].copy()
        factor[rows <= top[:, None]] = 0
        pivot = prow[:, j]
        M[b] = f.sub(f.mul(sub, pivot[:, None, None]), f.mul(factor[:, :, None], prow[:, None, :]))
        rk[b] += 1
    return rk


def row_basis(M, field: PrimeField = DEFAULT_FIELD):
    """Rows spanning the row space of ``M`` (reduced echelon form)."""
    M = np.asarray(M)
    basis = IncrementalBasis(M.shape[1], field)
    for i in range(M.shape[0]):
        basis.add(M[i])
    return basis.rows


def solve(A, B, field: PrimeField = DEFAULT_FIELD):
    """Solve ``A X = B`` for square ``A``.  Raises SingularMatrixError."""
    f = field
    A = np.asarray(A)
    B = np.asarray(B)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape[0] != n:
        raise ValueError(f"bad shapes {A.shape}, {B.shape}")
    W = np.concatenate([A, B], axis=1)
    for j in range(n):
        piv = _first_nonzero(W[j:, j])
        if piv < 0:
            raise SingularMatrixError(f"singular at column {j}")
        piv += j
        if piv != j:
            W[[j, piv]] = W[[piv, j]]
        row = f.mul(W[j, j:], f.scalar(f.inv(W[j, j])))
        W[j, j:] = row
        below = W[j + 1:, j]
        hit = np.flatnonzero(below != 0) + j + 1
        if len(hit):
            W[hit, j:] = f.sub(W[hit, j:], f.mul(W[hit, j][:, None], row[None, :]))
    X = W[:, n:].copy()
    for j in range(n - 1, 0, -1):
        col = W[:j, j]
        hit = np.flatnonzero(col != 0)
        if len(hit):
            X[hit] = f.sub(X[hit], f.mul(col[hit][:, None], X[j][None, :]))
    return X


def inverse(A, field: PrimeField = DEFAULT_FIELD):
    return solve(A, field.eye(np.asarray(A).shape[0]), field)


def dual_representation(M, field: PrimeField = DEFAULT_FIELD):
    """Map a standard-form ``[I_r | P]`` to the dual representation ``[-P^T | I]``."""
    M = np.asarray(M)
    r, n = M.shape
    if not np.array_equal(M[:, :r], field.eye(r)):
        raise InputError("matrix is not in standard form [I | P]")
    P = M[:, r:]
    return np.concatenate([field.neg(P.T), field.eye(n - r)], axis=1)


def random_projection(M, r: int, rng: np.random.Generator, field: PrimeField = DEFAULT_FIELD):
    """Multiply by a uniformly random ``r x rows`` matrix."""
    M = np.asarray(M)
    if r < 0:
        raise ValueError("target dimension must be nonnegative")
    R = field.random(rng, (r, M.shape[0]))
    return field.matmul(R, M)
