"""Exact dense linear algebra over the prime field GF(D), D an odd prime.

Matrices are stored as numpy int64 arrays with every entry reduced to
the range 0..D-1.  All arithmetic is integer arithmetic followed by
reduction mod D, so ranks, kernels and solves are exact; no floating
point enters anywhere in this module.

The text wire format for a matrix is one header line ``D nrows ncols``
followed by ``nrows`` lines of space-separated residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "MatGF",
    "rank",
    "kernel_basis",
    "solve",
    "inverse",
    "random_invertible",
    "weight",
    "row_weights",
    "col_weights",
    "kron",
    "matrix_to_text",
    "matrix_from_text",
    "rank_batch",
]


def _is_prime(v: int) -> bool:
    if v < 2:
        return False
    i = 2
    while i * i <= v:
        if v % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(order) for an odd prime order >= 3."""

    order: int

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or self.order < 3 or not _is_prime(self.order):
            raise ValueError(f"field order must be an odd prime >= 3, got {self.order!r}")

    def inv(self, a: int) -> int:
        """Multiplicative inverse of a nonzero residue."""
        a %= self.order
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.order)


class MatGF:
    """A dense matrix over GF(D) with entries held reduced mod D.

    The underlying array is marked read-only; every operation returns a
    fresh matrix.  ``@``, ``+``, ``-`` and scalar ``*`` act mod D and
    require matching fields.
    """

    __slots__ = ("field", "_data")

    def __init__(self, field: FieldSpec, data, *, _reduced: bool = False):
        arr = np.array(data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if not _reduced:
            arr %= field.order
        arr.flags.writeable = False
        self.field = field
        self._data = arr

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "MatGF":
        return cls(field, np.zeros((rows, cols), dtype=np.int64), _reduced=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatGF":
        return cls(field, np.eye(n, dtype=np.int64), _reduced=True)

    @property
    def data(self) -> np.ndarray:
        """Read-only int64 view of the entries."""
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def T(self) -> "MatGF":
        return MatGF(self.field, self._data.T, _reduced=True)

    def _check_field(self, other: "MatGF") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: GF({self.field.order}) vs GF({other.field.order})")

    def __matmul__(self, other):
        p = self.field.order
        if isinstance(other, MatGF):
            self._check_field(other)
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch for @: {self.shape} and {other.shape}")
            return MatGF(self.field, (self._data @ other._data) % p, _reduced=True)
        vec = np.asarray(other, dtype=np.int64) % p
        return (self._data @ vec) % p

    def __add__(self, other: "MatGF") -> "MatGF":
        self._check_field(other)
        return MatGF(self.field, (self._data + other._data) % self.field.order, _reduced=True)

    def __sub__(self, other: "MatGF") -> "MatGF":
        self._check_field(other)
        return MatGF(self.field, (self._data - other._data) % self.field.order, _reduced=True)

    def __neg__(self) -> "MatGF":
        return MatGF(self.field, (-self._data) % self.field.order, _reduced=True)

    def __mul__(self, scalar: int) -> "MatGF":
        return MatGF(self.field, (self._data * int(scalar)) % self.field.order, _reduced=True)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatGF):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self._data, other._data))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self._data.any()

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MatGF":
        sub = self._data[np.ix_(np.asarray(row_idx, dtype=np.intp), np.asarray(col_idx, dtype=np.intp))]
        return MatGF(self.field, sub, _reduced=True)

    def __repr__(self) -> str:
        return f"MatGF(GF({self.field.order}), {self.rows}x{self.cols})"


def _row_reduce(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod p and the pivot column list.

    Pivots are chosen as the first nonzero entry scanning down each
    column, so the result is deterministic for a fixed input.
    """
    m = np.array(a, dtype=np.int64, copy=True) % p
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: MatGF) -> int:
    """Rank of ``m`` over its field."""
    return len(_row_reduce(m.data, m.field.order)[1])


def kernel_basis(m: MatGF) -> list[np.ndarray]:
    """Basis of the right kernel {v : m v = 0}, one 1-D array per vector.

    Computed from the reduced row echelon form: each non-pivot column
    contributes one basis vector.  The list is ordered by free-column
    index and is deterministic for a fixed input.
    """
    p = m.field.order
    rref, pivots = _row_reduce(m.data, p)
    pivot_set = set(pivots)
    basis: list[np.ndarray] = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-rref[i, f]) % p
        basis.append(v)
    return basis


def solve(m: MatGF, b) -> np.ndarray | None:
    """One solution x of m x = b with free variables set to 0, else None.

    Returns None exactly when the system is inconsistent.  ``b`` must
    have length ``m.rows``.
    """
    p = m.field.order
    rhs = np.asarray(b, dtype=np.int64) % p
    if rhs.shape != (m.rows,):
        raise ValueError(f"right-hand side has shape {rhs.shape}, expected ({m.rows},)")
    aug = np.concatenate([m.data, rhs.reshape(-1, 1)], axis=1)
    rref, pivots = _row_reduce(aug, p)
    if m.cols in pivots:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = rref[i, -1]
    return x


def inverse(m: MatGF) -> MatGF:
    """Inverse of a square invertible matrix; raises ValueError if singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    p = m.field.order
    aug = np.concatenate([m.data, np.eye(m.rows, dtype=np.int64)], axis=1)
    rref, pivots = _row_reduce(aug, p)
    if pivots[: m.rows] != list(range(m.rows)):
        raise ValueError("matrix is singular")
    return MatGF(m.field, rref[:, m.cols :], _reduced=True)


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> MatGF:
    """A uniformly random element of GL(n, D) by rejection sampling.

    Uniform entries are drawn until the sample is invertible; every
    invertible matrix is kept with equal probability, so the output is
    uniform on GL(n, D).  The acceptance probability is
    prod_{i>=1} (1 - D^-i) > 0.43 for every D >= 3, so the expected
    number of draws is below 2.4.
    """
    p = field.order
    while True:
        cand = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if len(_row_reduce(cand, p)[1]) == n:
            return MatGF(field, cand, _reduced=True)


def row_weights(m: MatGF) -> np.ndarray:
    return np.count_nonzero(m.data, axis=1)


def col_weights(m: MatGF) -> np.ndarray:
    return np.count_nonzero(m.data, axis=0)


def weight(m: MatGF) -> int:
    """Largest number of nonzero entries in any single row or column."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(max(row_weights(m).max(initial=0), col_weights(m).max(initial=0)))


def kron(a: MatGF, b: MatGF) -> MatGF:
    """Kronecker product over the common field; fields must match."""
    a._check_field(b)
    return MatGF(a.field, np.kron(a.data, b.data) % a.field.order, _reduced=True)


def matrix_to_text(m: MatGF) -> str:
    """Serialize to the ``D nrows ncols`` text format, one row per line."""
    lines = [f"{m.field.order} {m.rows} {m.cols}"]
    for row in m.data:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def _matrix_from_lines(lines: Sequence[str], pos: int) -> tuple[MatGF, int]:
    if pos >= len(lines):
        raise ValueError("missing matrix header line")
    head = lines[pos].split()
    if len(head) != 3:
        raise ValueError(f"bad matrix header {lines[pos]!r}")
    try:
        d, nrows, ncols = (int(t) for t in head)
    except ValueError as exc:
        raise ValueError(f"bad matrix header {lines[pos]!r}") from exc
    if nrows < 0 or ncols < 0:
        raise ValueError("negative matrix dimensions")
    field = FieldSpec(d)
    if pos + 1 + nrows > len(lines):
        raise ValueError("truncated matrix text")
    entries = np.zeros((nrows, ncols), dtype=np.int64)
    for i in range(nrows):
        vals = lines[pos + 1 + i].split()
        if len(vals) != ncols:
            raise ValueError(f"row {i} has {len(vals)} entries, expected {ncols}")
        try:
            entries[i] = [int(t) for t in vals]
        except ValueError as exc:
            raise ValueError(f"row {i} has a non-integer entry") from exc
    if entries.size and (entries.min() < 0 or entries.max() >= d):
        raise ValueError(f"matrix entry out of range for GF({d})")
    return MatGF(field, entries, _reduced=True), pos + 1 + nrows


def matrix_from_text(text: str) -> MatGF:
    """Parse the text format produced by :func:`matrix_to_text`."""
    lines = text.splitlines()
    m, pos = _matrix_from_lines(lines, 0)
    if any(line.strip() for line in lines[pos:]):
        raise ValueError("trailing content after matrix rows")
    return m


def rank_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a batch of matrices, shape (N, rows, cols), over GF(p).

    Vectorized Gauss-Jordan elimination across the whole batch; used by
    the brute-force enumeration oracles where N is large and the
    matrices are tiny.  Intermediate products stay below p**2, so int16
    storage is safe for p <= 11 and int64 is used beyond that.
    """
    dtype = np.int16 if p <= 11 else np.int64
    m = np.array(mats, dtype=dtype, copy=True) % p
    if m.ndim != 3:
        raise ValueError("expected a (N, rows, cols) array")
    nmat, nrows, ncols = m.shape
    if nmat == 0 or nrows == 0 or ncols == 0:
        return np.zeros(nmat, dtype=np.int64)
    inv_table = np.array([0] + [pow(v, -1, p) for v in range(1, p)], dtype=dtype)
    cursor = np.zeros(nmat, dtype=np.int64)
    row_index = np.arange(nrows)
    for c in range(ncols):
        live = row_index[None, :] >= cursor[:, None]
        nz = (m[:, :, c] != 0) & live
        has = nz.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        cur = cursor[sel]
        pivrow = np.argmax(nz[sel], axis=1)
        tmp = m[sel, cur, :].copy()
        m[sel, cur, :] = m[sel, pivrow, :]
        m[sel, pivrow, :] = tmp
        pv = m[sel, cur, c]
        m[sel, cur, :] = (m[sel, cur, :] * inv_table[pv][:, None]) % p
        fac = m[sel, :, c].copy()
        fac[np.arange(len(sel)), cur] = 0
        m[sel] = (m[sel] - fac[:, :, None] * m[sel, cur, :][:, None, :]) % p
        cursor[sel] += 1
    return cursor
