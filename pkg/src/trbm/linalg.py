"""Dense exact linear algebra over the rationals.

Matrices are dense and immutable in spirit: every operation returns fresh
data and never mutates its input.  Scalars are ``fractions.Fraction``, so
all ranks, kernels and solutions are exact.  Two independent rank routines
are provided (rational Gaussian elimination and fraction-free Bareiss
elimination) so that one can serve as an oracle for the other.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Q = Fraction


def _to_q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """A dense rows x cols matrix of exact rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence]):
        self.data = [[_to_q(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Q(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls([[Q(0)] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.data == other.data

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def row(self, i: int) -> list[Fraction]:
        return list(self.data[i])

    def column(self, j: int) -> list[Fraction]:
        return [self.data[i][j] for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix([self.data[i] + other.data[i] for i in range(self.rows)])

    def mat_vec(self, v: Sequence) -> list[Fraction]:
        vq = [_to_q(x) for x in v]
        if len(vq) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((row[j] * vq[j] for j in range(self.cols)), Q(0))
                for row in self.data]


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = [list(row) for row in m.data]
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [a[i][j] - f * a[r][j] for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    """Exact rank over Q by rational Gaussian elimination."""
    return len(rref(m)[1])


def rank_bareiss(m: Matrix) -> int:
    """Exact rank by fraction-free Bareiss elimination.

    Rows are first scaled to integers (rank is invariant under row
    scaling), then eliminated keeping all intermediates integral.  This
    path shares no code with :func:`rank` and serves as its oracle.
    """
    a = []
    for row in m.data:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        a.append([int(x * lcm) for x in row])
    nrows, ncols = m.rows, m.cols
    prev = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                # exact integer division is guaranteed by the Bareiss identity
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def nullspace(m: Matrix) -> list[list[Fraction]]:
    """Basis of the right kernel; dimension equals cols - rank."""
    a, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * m.cols
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


def solve(m: Matrix, rhs: Sequence) -> Optional[list[Fraction]]:
    """One exact solution of m x = rhs, or None if inconsistent.

    Free variables, if any, are set to zero.
    """
    aug = Matrix([m.data[i] + [_to_q(rhs[i])] for i in range(m.rows)])
    a, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Q(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][m.cols]
    return x
