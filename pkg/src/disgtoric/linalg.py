"""Exact rational linear algebra and positive-kernel feasibility.

Everything here works over :class:`fractions.Fraction`, so ranks and kernel
dimensions are exact. Matrices are small (tens of rows and columns), so plain
dense Gauss-Jordan elimination and a tableau simplex are enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of ``Fraction`` entries.

    Zero-row and zero-column matrices are allowed; a ``0 x n`` matrix stands
    for an empty set of linear constraints on ``n`` unknowns.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable] = (), cols: int | None = None):
        rows = tuple(tuple(_frac(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"ragged row of length {len(row)}, expected {cols}")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> RationalMatrix:
        return cls([[col[i] for col in columns] for i in range(rows)], len(columns))

    @classmethod
    def vstack(cls, blocks: Sequence[RationalMatrix], cols: int) -> RationalMatrix:
        data = []
        for b in blocks:
            if b.cols != cols:
                raise ValueError(f"block has {b.cols} columns, expected {cols}")
            data.extend(b._data)
        return cls(data, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix([self.column(j) for j in range(self.cols)], self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols]
                 for r in self._data],
                other.cols,
            )
        vec = tuple(_frac(x) for x in other)
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"


def rref(m: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.

    The pivot in each column is the first row (at or below the current pivot
    row) holding a nonzero entry; no magnitude-based pivoting is needed since
    arithmetic is exact.
    """
    a = m.tolist()
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RationalMatrix(a, m.cols), tuple(pivots)


def rank(m: RationalMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RationalMatrix) -> list[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column of the RREF."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(tuple(v))
    return basis


def orthogonal_complement_basis(vectors: Sequence[Sequence], ambient: int) -> list[Vector]:
    """Basis of the orthogonal complement of ``span(vectors)`` in Q^ambient."""
    for v in vectors:
        if len(v) != ambient:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
    return kernel_basis(RationalMatrix(vectors, ambient))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Used on hot paths where entries are small integers; agrees with
    :func:`rank` on integer input.
    """
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(a[i], a[r])]
        prev = piv
        r += 1
        if r == len(a):
            break
    return r


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class FeasibilityCertificate:
    """Outcome of a positive-kernel feasibility query.

    When ``feasible`` is true, ``witness`` solves the constraint system exactly
    and is at least 1 on every designated coordinate.
    """

    feasible: bool
    witness: Vector | None = None

    def __bool__(self) -> bool:
        return self.feasible


def _phase_one(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Find ``z >= 0`` with ``a z = b`` (``b >= 0``) or return None.

    Tableau simplex on the auxiliary problem min sum(artificials), with Bland's
    lowest-index rule for both entering and leaving variables.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    width = n + m
    tab = [a[i] + [Fraction(int(k == i)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced costs of the auxiliary objective; last slot holds -objective
    obj = [-sum((tab[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    obj += [Fraction(0)] * m + [-sum(b, Fraction(0))]

    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen: the auxiliary objective is bounded below
            raise RuntimeError("unbounded auxiliary problem")
        piv = tab[leave][enter]
        row = [x / piv for x in tab[leave]]
        tab[leave] = row
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], row)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, row)]
        basis[leave] = enter

    if obj[-1] != 0:
        return None
    z = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            z[var] = tab[i][-1]
    return z


def positive_kernel_feasible(
    constraints: RationalMatrix, positive: Iterable[int] | None = None
) -> FeasibilityCertificate:
    """Decide whether ``constraints x = 0`` has a solution with ``x_i >= 1`` on ``positive``.

    Coordinates outside ``positive`` are free. ``positive=None`` designates every
    coordinate. Because the solution set is a cone, feasibility is the same as
    existence of a kernel vector that is strictly positive on ``positive``.
    """
    ncols = constraints.cols
    pos = sorted(set(range(ncols) if positive is None else positive))
    if pos and (pos[0] < 0 or pos[-1] >= ncols):
        raise ValueError(f"positive coordinate out of range for {ncols} columns")
    pos_set = set(pos)
    free = [j for j in range(ncols) if j not in pos_set]

    reduced, pivots = rref(constraints)
    rows = [list(reduced.row(i)) for i in range(len(pivots))]

    # x_i = 1 + s_i on positive coords, x_j = u_j - v_j on free coords
    a, b = [], []
    for r in rows:
        rhs = -sum((r[i] for i in pos), Fraction(0))
        coeffs = [r[i] for i in pos] + [r[j] for j in free] + [-r[j] for j in free]
        if rhs < 0:
            rhs = -rhs
            coeffs = [-x for x in coeffs]
        a.append(coeffs)
        b.append(rhs)

    z = _phase_one(a, b) if rows else [Fraction(0)] * (len(pos) + 2 * len(free))
    if z is None:
        return FeasibilityCertificate(False)

    x = [Fraction(0)] * ncols
    for k, i in enumerate(pos):
        x[i] = 1 + z[k]
    for k, j in enumerate(free):
        x[j] = z[len(pos) + k] - z[len(pos) + len(free) + k]
    witness = tuple(x)
    if any(v != 0 for v in constraints @ witness) or any(witness[i] < 1 for i in pos):
        raise AssertionError("simplex produced a witness that fails substitution")
    return FeasibilityCertificate(True, witness)
