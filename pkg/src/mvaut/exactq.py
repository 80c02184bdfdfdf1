"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  Matrices are immutable row-major tuples of fractions.
Linear subspaces are stored by the reduced row-echelon form of a spanning
set, which makes them hashable and comparable by value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(x)


class QMatrix:
    """Dense immutable matrix over the rationals."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(as_rational(x) for x in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ValueError(f"expected {rows}x{cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "QMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "QMatrix":
        return cls(len(values), 1, values)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       (self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    def _same_shape(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, c) -> "QMatrix":
        c = as_rational(c)
        return QMatrix(self.rows, self.cols, (c * a for a in self.entries))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return QMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix-vector product ``M v``."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        v = [as_rational(x) for x in v]
        return tuple(sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
                     for i in range(self.rows))

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return QMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return rref(self)[1]

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return det(self.to_rows())

    def inverse(self) -> "QMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = QMatrix.from_rows([list(self.row(i)) + [1 if i == j else 0 for j in range(n)]
                                 for i in range(n)], cols=2 * n)
        R, rank, pivots = rref(aug)
        if rank < n or pivots[n - 1] != n - 1:
            raise ZeroDivisionError("matrix is singular")
        return QMatrix.from_rows([R.row(i)[n:] for i in range(n)], cols=n)


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = lcm(*(as_rational(x).denominator for r in rows for x in r))
    a = [[int(as_rational(x) * den) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


def _integer_rows(M: QMatrix) -> list[list[int]]:
    out = []
    for i in range(M.rows):
        r = M.row(i)
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def _content(row: list[int]) -> int:
    return reduce(gcd, row, 0)


def rref(M: QMatrix) -> tuple[QMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns.

    Elimination runs on integer rows (content removed after every update)
    and is normalised to rationals only at the end.
    """
    rows = [r for r in _integer_rows(M) if any(r)]
    pivots: list[int] = []
    p = 0
    for c in range(M.cols):
        if p == len(rows):
            break
        for k in range(p, len(rows)):
            if rows[k][c]:
                break
        else:
            continue
        rows[p], rows[k] = rows[k], rows[p]
        prow = rows[p]
        pv = prow[c]
        for i in range(len(rows)):
            if i == p:
                continue
            a = rows[i][c]
            if a:
                r = [pv * x - a * y for x, y in zip(rows[i], prow)]
                g = _content(r)
                if g > 1:
                    r = [x // g for x in r]
                rows[i] = r
        pivots.append(c)
        p += 1
    rank = p
    out = []
    for i in range(rank):
        pv = rows[i][pivots[i]]
        out.append([Fraction(x, pv) for x in rows[i]])
    out.extend([[Fraction(0)] * M.cols for _ in range(M.rows - rank)])
    return QMatrix.from_rows(out, cols=M.cols) if M.rows else QMatrix(0, M.cols, ()), rank, pivots


def primitive_integer_vector(v: Sequence) -> tuple[int, ...]:
    """Clear denominators, divide by the gcd and make the first nonzero entry positive."""
    v = [as_rational(x) for x in v]
    if not any(v):
        return tuple(0 for _ in v)
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = _content(ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


class Subspace:
    """A linear subspace of Q^n in canonical (RREF) form."""

    __slots__ = ("ambient_dim", "basis", "_key", "_ann")

    def __init__(self, ambient_dim: int, basis: QMatrix):
        # basis must already be in RREF without zero rows; use from_span otherwise
        if basis.cols != ambient_dim:
            raise ValueError("basis width does not match ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._key = (ambient_dim, basis.entries)
        self._ann = None

    @classmethod
    def from_span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vectors = [list(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise ValueError("vector length does not match ambient dimension")
        if not vectors:
            return cls.zero(ambient_dim)
        R, rank, _ = rref(QMatrix.from_rows(vectors, cols=ambient_dim))
        return cls(ambient_dim, QMatrix(rank, ambient_dim, R.entries[:rank * ambient_dim]))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QMatrix(0, ambient_dim, ()))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [self.basis.row(i) for i in range(self.dim)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.vectors()})"

    def annihilator(self) -> "Subspace":
        """Orthogonal complement: all y with y . x = 0 for x in self."""
        if self._ann is None:
            if self.dim == 0:
                self._ann = Subspace.full(self.ambient_dim)
            else:
                self._ann = nullspace(self.basis)
        return self._ann

    def direction(self) -> tuple[int, ...]:
        """Primitive integer direction vector of a line."""
        if self.dim != 1:
            raise ValueError("direction is only defined for lines")
        return primitive_integer_vector(self.basis.row(0))

    def image(self, A: QMatrix) -> "Subspace":
        """The subspace ``A(self)``."""
        return Subspace.from_span((A.apply(v) for v in self.vectors()), A.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return Subspace.from_span(self.vectors() + other.vectors(), self.ambient_dim)


def _check_ambient(S1: Subspace, S2: Subspace) -> None:
    if S1.ambient_dim != S2.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {S1.ambient_dim} vs {S2.ambient_dim}")


def nullspace(M: QMatrix) -> Subspace:
    """Kernel ``{x : M x = 0}`` as a canonical subspace."""
    n = M.cols
    R, rank, pivots = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, f]
        vecs.append(v)
    return Subspace.from_span(vecs, n)


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    _check_ambient(S1, S2)
    normals = S1.annihilator().vectors() + S2.annihilator().vectors()
    if not normals:
        return Subspace.full(S1.ambient_dim)
    return nullspace(QMatrix.from_rows(normals, cols=S1.ambient_dim))


def contains(S: Subspace, T: Subspace) -> bool:
    """True iff ``T`` is a subspace of ``S``."""
    _check_ambient(S, T)
    if T.dim > S.dim:
        return False
    if T.dim == 0:
        return True
    return (S + T).dim == S.dim
