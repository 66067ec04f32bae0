"""Dense exact linear algebra over GF(p^s).

Arrays hold encoded field elements (see :mod:`modadequacy.fieldarith`).  The
row-major flattening ``X -> X.reshape(-1)`` is the fixed identification of
End(V) with k^(n^2) used everywhere in the package.
"""

from __future__ import annotations

import numpy as np

from .fieldarith import GF, FieldError, poly_derivative, poly_gcd, poly_lcm, poly_trim


class LinalgError(ValueError):
    pass


class Matrix:
    """Immutable matrix over a finite field."""

    __slots__ = ("field", "a", "_key")

    def __init__(self, field: GF, a):
        arr = np.array(a, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1) if arr.size else arr.reshape(0, 0)
        arr.flags.writeable = False
        self.field = field
        self.a = arr
        self._key = None

    @classmethod
    def from_rows(cls, field: GF, rows) -> "Matrix":
        """Build from integer rows; ints are mapped through Z -> F_p."""
        return cls(field, [[field.from_int(int(x)) for x in row] for row in rows])

    @classmethod
    def identity(cls, field: GF, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int | None = None) -> "Matrix":
        return cls(field, np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.tobytes() + bytes(self.a.shape)
        return self._key

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.a.tolist()})"

    def _same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.field, self.field.vmatmul(self.a, other.a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, self.field.vadd(self.a, other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, self.field.vsub(self.a, other.a))

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.field, self.field.vmul(c, self.a))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T)

    def trace(self) -> int:
        return int(self.field.vsum(np.diagonal(self.a)))

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.a, np.eye(self.rows, dtype=np.int64))

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinalgError("inverse of a non-square matrix")
        n = self.rows
        aug = np.concatenate([self.a, np.eye(n, dtype=np.int64)], axis=1)
        r, pivots = echelon(self.field, aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise LinalgError("matrix is singular")
        return Matrix(self.field, r[:n, n:])

    def power(self, e: int) -> "Matrix":
        result = Matrix.identity(self.field, self.rows)
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result


def echelon(F: GF, a, stop_rank: int | None = None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    a = np.array(a, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows or (stop_rank is not None and r >= stop_rank):
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = F.vmul(F.inv(lead), a[r])
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = F.vsub(a[rows], F.vmul(col[rows, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _as_array(m) -> tuple[GF, np.ndarray]:
    return m.field, m.a


def rank(m: Matrix) -> int:
    return len(echelon(m.field, m.a)[1])


def nullspace(m: Matrix) -> list[np.ndarray]:
    """Echelonized basis of {x : m x = 0}, as length-cols vectors."""
    F = m.field
    r, pivots = echelon(F, m.a)
    ncols = m.cols
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for row, pc in zip(r, pivots):
            if row[f]:
                v[pc] = F.neg(int(row[f]))
        basis.append(v)
    if basis:
        basis = list(echelon(F, np.array(basis))[0])
    return basis


def nullspace_dim(F: GF, a) -> int:
    a = np.asarray(a, dtype=np.int64)
    return a.shape[1] - len(echelon(F, a)[1])


def solve_left_combination(F: GF, basis: np.ndarray, v: np.ndarray):
    """Coefficients c with c @ basis == v, or None when v is outside the row span."""
    aug = np.concatenate([basis.T, v[:, None]], axis=1)
    r, pivots = echelon(F, aug)
    k = basis.shape[0]
    if pivots and pivots[-1] == k:
        return None
    c = np.zeros(k, dtype=np.int64)
    for row, pc in zip(r, pivots):
        c[pc] = row[k]
    return c


def _poly_eval_matrix(m: Matrix, poly) -> Matrix:
    n = m.rows
    acc = Matrix.zeros(m.field, n)
    for c in reversed(poly):
        acc = acc @ m + Matrix.identity(m.field, n).scale(c)
    return acc


def minimal_polynomial(m: Matrix) -> list[int]:
    """Monic minimal polynomial, low-degree-first coefficient list.

    Built as the lcm of the local minimal polynomials of the standard basis
    vectors (Krylov sequences).
    """
    if m.rows != m.cols:
        raise LinalgError("minimal polynomial of a non-square matrix")
    F = m.field
    n = m.rows
    mu = [1]
    for i in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        # reduced Krylov vectors with pivots, and their expressions in powers of m
        basis: list[tuple[int, np.ndarray, np.ndarray]] = []
        w = v
        k = 0
        while True:
            expr = np.zeros(n + 1, dtype=np.int64)
            expr[k] = 1
            res = w.copy()
            for pc, bv, be in basis:
                c = int(res[pc])
                if c:
                    res = F.vsub(res, F.vmul(c, bv))
                    expr = F.vsub(expr, F.vmul(c, be))
            nz = np.flatnonzero(res)
            if nz.size == 0:
                local = poly_trim([int(x) for x in expr])
                mu = poly_lcm(F, mu, local)
                break
            pc = int(nz[0])
            inv = F.inv(int(res[pc]))
            basis.append((pc, F.vmul(inv, res), F.vmul(inv, expr)))
            w = F.vmatmul(m.a, w[:, None])[:, 0]
            k += 1
    return mu


def is_semisimple_matrix(m: Matrix) -> bool:
    """Diagonalisable over the algebraic closure: squarefree minimal polynomial."""
    if m.rows != m.cols:
        raise LinalgError("non-square input")
    if rank(m) < m.rows:
        raise LinalgError("singular input")
    mu = minimal_polynomial(m)
    return len(poly_gcd(m.field, mu, poly_derivative(m.field, mu))) == 1


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    a._same_field(b)
    F = a.field
    prod = F.vmul(a.a[:, None, :, None], b.a[None, :, None, :])
    return Matrix(F, prod.reshape(a.rows * b.rows, a.cols * b.cols))


def block_diagonal(*ms: Matrix) -> Matrix:
    F = ms[0].field
    n = sum(m.rows for m in ms)
    c = sum(m.cols for m in ms)
    out = np.zeros((n, c), dtype=np.int64)
    i = j = 0
    for m in ms:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix(F, out)


class SpanAccumulator:
    """Incrementally maintained reduced echelon basis of a span of vectors/matrices."""

    def __init__(self, field: GF, ambient_dim: int):
        self.field = field
        self.ambient_dim = ambient_dim
        self._rows = np.zeros((0, ambient_dim), dtype=np.int64)
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ambient_dim

    @property
    def basis(self) -> np.ndarray:
        order = np.argsort(self._pivots)
        return self._rows[order]

    def reduce(self, v) -> np.ndarray:
        F = self.field
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if not self._pivots:
            return v
        coef = v[self._pivots]
        if not coef.any():
            return v
        return F.vsub(v, F.vsum(F.vmul(coef[:, None], self._rows), axis=0))

    def insert_vector(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise LinalgError(f"vector of length {v.shape[0]} in ambient dim {self.ambient_dim}")
        if self.full:
            return False
        F = self.field
        res = self.reduce(v)
        nz = np.flatnonzero(res)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        res = F.vmul(F.inv(int(res[pc])), res)
        if self._pivots:
            col = self._rows[:, pc]
            hit = np.flatnonzero(col)
            if hit.size:
                self._rows[hit] = F.vsub(self._rows[hit], F.vmul(col[hit, None], res[None, :]))
        self._rows = np.vstack([self._rows, res[None, :]])
        self._pivots.append(pc)
        return True

    def insert(self, m: Matrix) -> bool:
        """span_insert: add a square matrix (flattened row-major); True if the span grew."""
        if m.rows * m.cols != self.ambient_dim or m.rows != m.cols:
            raise LinalgError(f"{m.shape} matrix does not live in dimension {self.ambient_dim}")
        if m.field != self.field:
            raise FieldError("field mismatch")
        return self.insert_vector(m.a.reshape(-1))

    def merge(self, other: "SpanAccumulator") -> None:
        for row in other._rows:
            self.insert_vector(row)


def span_insert(acc: SpanAccumulator, m: Matrix) -> bool:
    return acc.insert(m)
