"""Exact sparse linear algebra over the rationals.

Vectors are plain ``dict`` objects mapping an index to a nonzero
:class:`fractions.Fraction`.  Matrices are stored column-wise.

Pivot rule (used everywhere, so kernel bases and homology representatives
are reproducible): columns are inserted into an echelon basis in increasing
index order; each inserted vector is fully reduced against the existing
pivots in increasing row order, and its pivot is its smallest remaining
nonzero row index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Hashable, Iterable, Mapping

from .errors import InputError, NotAComplexError

Rational = Fraction
Vector = dict  # index -> nonzero Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def vec_clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


def axpy(target: dict, key, coeff) -> None:
    """target[key] += coeff, dropping zeros."""
    if not coeff:
        return
    new = target.get(key, ZERO) + coeff
    if new:
        target[key] = new
    else:
        target.pop(key, None)


def vec_add(u: Mapping, v: Mapping, scale=ONE) -> dict:
    out = dict(u)
    for k, c in v.items():
        axpy(out, k, scale * c)
    return out


def vec_scale(v: Mapping, s) -> dict:
    if not s:
        return {}
    return {k: s * c for k, c in v.items()}


class SparseMatrix:
    """An exact rows x cols matrix; entries equal to zero are never stored."""

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows: int, cols: int, columns: Iterable[Mapping] | None = None):
        if rows < 0 or cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        if columns is None:
            cs = [{} for _ in range(cols)]
        else:
            cs = [vec_clean(c) for c in columns]
            if len(cs) != cols:
                raise InputError(f"expected {cols} columns, got {len(cs)}")
        for j, c in enumerate(cs):
            for i in c:
                if not (0 <= i < rows):
                    raise InputError(f"row index {i} out of range in column {j}")
        self._columns = tuple(cs)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], object]) -> "SparseMatrix":
        cs: list[dict] = [{} for _ in range(cols)]
        for (i, j), c in entries.items():
            if not (0 <= j < cols):
                raise InputError(f"column index {j} out of range")
            axpy(cs[j], i, Fraction(c))
        return cls(rows, cols, cs)

    @classmethod
    def from_dense(cls, rows_data: list[list]) -> "SparseMatrix":
        nr = len(rows_data)
        nc = len(rows_data[0]) if nr else 0
        entries = {}
        for i, row in enumerate(rows_data):
            if len(row) != nc:
                raise InputError("ragged dense matrix")
            for j, c in enumerate(row):
                if c:
                    entries[(i, j)] = c
        return cls.from_entries(nr, nc, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, [{i: ONE} for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> dict:
        return {(i, j): c for j, col in enumerate(self._columns) for i, c in col.items()}

    def column(self, j: int) -> dict:
        return dict(self._columns[j])

    def columns(self) -> tuple:
        return self._columns

    def matvec(self, v: Mapping) -> dict:
        out: dict = {}
        for j, x in v.items():
            if not (0 <= j < self.cols):
                raise InputError(f"vector index {j} out of range")
            for i, c in self._columns[j].items():
                axpy(out, i, c * x)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return SparseMatrix(self.rows, other.cols, [self.matvec(c) for c in other._columns])

    def transpose(self) -> "SparseMatrix":
        cs: list[dict] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self._columns):
            for i, c in col.items():
                cs[i][j] = c
        return SparseMatrix(self.cols, self.rows, cs)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self._columns):
            for i, c in col.items():
                out[i][j] = c
        return out

    def is_zero(self) -> bool:
        return not any(self._columns)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self._columns == other._columns
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={sum(len(c) for c in self._columns)})"


class Echelon:
    """Incrementally built echelon basis of a subspace, with provenance.

    Each pivot vector remembers which inserted vectors (by tag) it is a
    combination of, so reductions can report how a target decomposes.
    """

    def __init__(self, track: bool = True):
        self.track = track
        self._pivots: dict = {}  # lead index -> (vector, provenance)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, vec: Mapping, prov: Mapping | None = None) -> tuple[dict, dict]:
        """Return (residual, provenance) after eliminating every pivot index.

        If the residual is empty, ``vec`` equals the combination of tagged
        inputs given by ``-provenance`` (when prov started empty).
        """
        v = dict(vec)
        p = dict(prov) if prov else {}
        heap = list(v)
        heapify(heap)
        pivots = self._pivots
        while heap:
            i = heappop(heap)
            c = v.get(i)
            if c is None:
                continue
            piv = pivots.get(i)
            if piv is None:
                continue
            pvec, pprov = piv
            for j, a in pvec.items():
                if j not in v:
                    heappush(heap, j)
                axpy(v, j, -c * a)
            if self.track:
                for t, a in pprov.items():
                    axpy(p, t, -c * a)
        return v, p

    def add(self, vec: Mapping, tag: Hashable = None) -> tuple[bool, dict]:
        """Insert ``vec``; return (is_new_pivot, provenance_of_residual)."""
        start = {tag: ONE} if (self.track and tag is not None) else {}
        v, p = self.reduce(vec, start)
        if not v:
            return False, p
        lead = min(v)
        inv = ONE / v[lead]
        self._pivots[lead] = (vec_scale(v, inv), vec_scale(p, inv))
        return True, p

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec: Mapping) -> dict | None:
        """Coefficients c_t with vec = sum_t c_t * (input tagged t), or None."""
        v, p = self.reduce(vec)
        if v:
            return None
        return vec_scale(p, -ONE)


def rank(m: SparseMatrix) -> int:
    e = Echelon(track=False)
    for col in m.columns():
        if col:
            e.add(col)
    return e.rank


def rank_kernel(m: SparseMatrix) -> tuple[int, list[dict]]:
    """Rank of ``m`` and a basis of its kernel.

    Kernel vectors come one per non-pivot column j, with coefficient 1 at j
    and support otherwise on earlier columns.
    """
    e = Echelon(track=True)
    kernel: list[dict] = []
    for j, col in enumerate(m.columns()):
        new, prov = e.add(col, j)
        if not new:
            kernel.append(prov)
    return e.rank, kernel


def solve(m: SparseMatrix, b: Mapping) -> dict | None:
    """Some x with m x = b (free variables set to zero), or None."""
    for i in b:
        if not (0 <= i < m.rows):
            raise InputError(f"right-hand side index {i} outside {m.rows} rows")
    e = Echelon(track=True)
    for j, col in enumerate(m.columns()):
        if col:
            e.add(col, j)
    x = e.express(vec_clean(b))
    if x is None:
        return None
    if m.matvec(x) != vec_clean(b):  # pragma: no cover - defensive
        raise ArithmeticError("solver produced a wrong solution")
    return x


def composite_witness(d_out: SparseMatrix, d_in: SparseMatrix) -> int | None:
    """First basis index j with d_out(d_in e_j) != 0, or None."""
    if d_out.cols != d_in.rows:
        raise InputError(f"incompatible maps: {d_out.rows}x{d_out.cols} after {d_in.rows}x{d_in.cols}")
    for j, col in enumerate(d_in.columns()):
        if d_out.matvec(col):
            return j
    return None


def homology_dims(d_out: SparseMatrix, d_in: SparseMatrix) -> int:
    """dim ker(d_out) - rank(d_in), after verifying d_out d_in = 0."""
    bad = composite_witness(d_out, d_in)
    if bad is not None:
        raise NotAComplexError(f"not a complex: basis element {bad} maps to a nonzero composite", bad)
    return d_out.cols - rank(d_out) - rank(d_in)


class Homology:
    """Homology at one spot of a complex, with a fixed representative basis.

    Representatives are chosen by inserting all boundaries first and then
    the kernel basis of ``d_out`` in order; kernel vectors that are new
    pivots become representatives.
    """

    def __init__(self, d_out: SparseMatrix, d_in: SparseMatrix):
        bad = composite_witness(d_out, d_in)
        if bad is not None:
            raise NotAComplexError(f"not a complex: basis element {bad} maps to a nonzero composite", bad)
        self.d_out = d_out
        self.d_in = d_in
        self.space_dim = d_out.cols
        _, cycles = rank_kernel(d_out)
        self._ech = Echelon(track=True)
        for j, col in enumerate(d_in.columns()):
            if col:
                self._ech.add(col, ("b", j))
        self.boundary_rank = self._ech.rank
        self.reps: list[dict] = []
        for z in cycles:
            new, _ = self._ech.add(z, ("r", len(self.reps)))
            if new:
                self.reps.append(z)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def is_cycle(self, z: Mapping) -> bool:
        return not self.d_out.matvec(z)

    def decompose(self, z: Mapping) -> tuple[list[Fraction], dict] | None:
        """(class coordinates, boundary preimage) of a cycle, or None if z is not in cycles."""
        coeffs = self._ech.express(vec_clean(z))
        if coeffs is None:
            return None
        coords = [ZERO] * self.dim
        pre: dict = {}
        for (kind, idx), c in coeffs.items():
            if kind == "r":
                coords[idx] += c
            else:
                axpy(pre, idx, c)
        return coords, pre

    def coords(self, z: Mapping) -> list[Fraction]:
        d = self.decompose(z)
        if d is None:
            raise NotAComplexError("vector is not a cycle", z)
        return d[0]

    def witness(self, z: Mapping) -> dict | None:
        """y with d_in y = z if z is a boundary, else None."""
        d = self.decompose(z)
        if d is None or any(d[0]):
            return None
        y = d[1]
        if self.d_in.matvec(y) != vec_clean(z):  # pragma: no cover - defensive
            raise ArithmeticError("witness failed substitution")
        return y


@dataclass(frozen=True)
class GradedDims:
    """Finitely supported map degree -> dimension."""

    dims: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, n in self.dims.items():
            if n < 0:
                raise InputError(f"negative dimension {n} in degree {d}")
            if n:
                clean[int(d)] = int(n)
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    def __getitem__(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def total(self) -> int:
        return sum(self.dims.values())

    def as_list(self, lo: int, hi: int) -> list[int]:
        return [self[d] for d in range(lo, hi + 1)]

    def __add__(self, other: "GradedDims") -> "GradedDims":
        out = dict(self.dims)
        for d, n in other.dims.items():
            out[d] = out.get(d, 0) + n
        return GradedDims(out)

    def tensor(self, other: "GradedDims") -> "GradedDims":
        out: dict = {}
        for a, n in self.dims.items():
            for b, m in other.dims.items():
                out[a + b] = out.get(a + b, 0) + n * m
        return GradedDims(out)

    def dominated_by(self, other: "GradedDims") -> bool:
        return all(n <= other[d] for d, n in self.dims.items())
