"""Two-sector chain complexes with involution over GF(D).

A complex here is C = C+ (+) C- with a boundary map that exchanges the
two sectors and squares to zero, together with the involution P acting
as +1 on C+ and -1 on C-.  Only the two off-diagonal blocks of the
boundary are stored:

    d_pm : C- -> C+   (rows indexed by C+, columns by C-)
    d_mp : C+ -> C-   (rows indexed by C-, columns by C+)

With this representation P is implicit in the sector split, P**2 = I
and the anticommutation of P with the boundary hold by construction,
and the boundary-squares-to-zero condition becomes d_pm @ d_mp = 0 and
d_mp @ d_pm = 0.

The shape family used throughout has sector dimension n = H + 2L: the
standard boundary has an L x L identity coupling the middle block of
rows to the trailing block of columns, its kernel has dimension H + L
per sector, and its homology has dimension H per sector.  Random
members of the family conjugate the standard boundary by independent
uniform invertible matrices, one per sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf import (
    FieldSpec,
    MatGF,
    _matrix_from_lines,
    inverse,
    matrix_to_text,
    random_invertible,
    rank,
)

__all__ = [
    "ComplexShape",
    "InvolutiveComplex",
    "standard_boundary",
    "random_boundary",
    "validate",
    "homology_dimensions",
    "is_good",
    "flip_sectors",
    "complex_to_text",
    "complex_from_text",
]


@dataclass(frozen=True)
class ComplexShape:
    """Sector dimension n split as n = H + 2L.

    H is the homology dimension per sector and L the rank of each
    boundary block.  ``rho`` records the density the shape was derived
    from, when it was; it does not participate in equality-sensitive
    logic.
    """

    n: int
    H: int
    L: int
    rho: float | None = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.H < 0 or self.L < 0:
            raise ValueError("shape dimensions must be nonnegative with n >= 1")
        if self.n != self.H + 2 * self.L:
            raise ValueError(f"shape requires n = H + 2L, got n={self.n}, H={self.H}, L={self.L}")

    @classmethod
    def from_rho(cls, n: int, rho) -> "ComplexShape":
        """Shape with H = floor(rho * n); n - H must be even."""
        if not 0 <= rho <= 1:
            raise ValueError(f"rho must lie in [0, 1], got {rho}")
        H = math.floor(rho * n)
        if (n - H) % 2 != 0:
            raise ValueError(
                f"floor(rho*n) = {H} leaves n - H = {n - H} odd; "
                f"choose a compatible rho or build the shape from an explicit H"
            )
        return cls(n=n, H=H, L=(n - H) // 2, rho=float(rho))

    @classmethod
    def from_hom_dim(cls, n: int, H: int) -> "ComplexShape":
        """Shape with the homology dimension given directly."""
        if (n - H) % 2 != 0 or H < 0 or H > n:
            raise ValueError(f"need 0 <= H <= n with n - H even, got n={n}, H={H}")
        return cls(n=n, H=H, L=(n - H) // 2)


@dataclass(frozen=True, eq=False)
class InvolutiveComplex:
    """The pair of boundary blocks; the involution is the sector split."""

    field: FieldSpec
    d_pm: MatGF
    d_mp: MatGF

    def __post_init__(self) -> None:
        if self.d_pm.field != self.field or self.d_mp.field != self.field:
            raise ValueError("boundary blocks must live over the complex's field")
        if self.d_pm.rows != self.d_mp.cols or self.d_pm.cols != self.d_mp.rows:
            raise ValueError(
                f"incompatible block shapes {self.d_pm.shape} and {self.d_mp.shape}"
            )

    @property
    def dim_plus(self) -> int:
        return self.d_pm.rows

    @property
    def dim_minus(self) -> int:
        return self.d_mp.rows

    @property
    def dim_total(self) -> int:
        return self.dim_plus + self.dim_minus

    def full_boundary(self) -> MatGF:
        """The boundary on C+ (+) C- with the plus block first."""
        dp, dm = self.dim_plus, self.dim_minus
        full = np.zeros((dp + dm, dp + dm), dtype=np.int64)
        full[:dp, dp:] = self.d_pm.data
        full[dp:, :dp] = self.d_mp.data
        return MatGF(self.field, full, _reduced=True)

    def involution(self) -> MatGF:
        signs = np.concatenate(
            [np.ones(self.dim_plus, dtype=np.int64), np.full(self.dim_minus, -1, dtype=np.int64)]
        )
        return MatGF(self.field, np.diag(signs % self.field.order), _reduced=True)

    def sector_signs(self) -> np.ndarray:
        """+1 for C+ coordinates, -1 for C- coordinates."""
        return np.concatenate(
            [np.ones(self.dim_plus, dtype=np.int64), np.full(self.dim_minus, -1, dtype=np.int64)]
        )


def standard_boundary(shape: ComplexShape, field: FieldSpec) -> InvolutiveComplex:
    """The canonical complex for a shape: both blocks carry the same
    matrix, zero everywhere except an L x L identity linking row block
    H..H+L to column block H+L..n."""
    n, H, L = shape.n, shape.H, shape.L
    d0 = np.zeros((n, n), dtype=np.int64)
    d0[H : H + L, H + L :] = np.eye(L, dtype=np.int64)
    block = MatGF(field, d0, _reduced=True)
    c = InvolutiveComplex(field, block, block)
    problems = validate(c)
    if problems:
        raise AssertionError(f"standard complex failed validation: {problems}")
    return c


def random_boundary(
    shape: ComplexShape, field: FieldSpec, rng: np.random.Generator
) -> tuple[InvolutiveComplex, MatGF, MatGF]:
    """A random member of the shape family, plus the conjugating pair.

    Draws u_plus then u_minus uniformly from GL(n, D) and forms
    d_pm = u_plus @ d0 @ u_minus^-1 and d_mp = u_minus @ d0 @ u_plus^-1,
    where d0 is the standard block.  Squaring to zero is inherited from
    d0 @ d0 = 0.
    """
    base = standard_boundary(shape, field)
    u_plus = random_invertible(field, shape.n, rng)
    u_minus = random_invertible(field, shape.n, rng)
    d_pm = u_plus @ base.d_pm @ inverse(u_minus)
    d_mp = u_minus @ base.d_mp @ inverse(u_plus)
    c = InvolutiveComplex(field, d_pm, d_mp)
    problems = validate(c)
    if problems:
        raise AssertionError(f"random complex failed validation: {problems}")
    return c, u_plus, u_minus


def validate(c: InvolutiveComplex) -> list[str]:
    """Check the defining identities exactly; returns a list of violations.

    Verifies, on materialized full matrices, that the boundary squares
    to zero, that the involution squares to the identity, that the
    involution anticommutes with the boundary, and that the boundary has
    no sector-diagonal blocks.  An empty list means the complex is valid.
    """
    problems: list[str] = []
    field = c.field
    if not (c.d_pm @ c.d_mp).is_zero():
        problems.append("boundary does not square to zero on C+ (d_pm @ d_mp != 0)")
    if not (c.d_mp @ c.d_pm).is_zero():
        problems.append("boundary does not square to zero on C- (d_mp @ d_pm != 0)")
    full = c.full_boundary()
    invol = c.involution()
    if not (full @ full).is_zero():
        problems.append("full boundary does not square to zero")
    if invol @ invol != MatGF.identity(field, c.dim_total):
        problems.append("involution does not square to the identity")
    if not (full @ invol + invol @ full).is_zero():
        problems.append("involution does not anticommute with the boundary")
    dp = c.dim_plus
    if full.data[:dp, :dp].any() or full.data[dp:, dp:].any():
        problems.append("boundary has nonzero sector-diagonal blocks")
    return problems


def homology_dimensions(c: InvolutiveComplex) -> tuple[int, int]:
    """dim(ker/im) per sector: (h_plus, h_minus).

    Cycles in C+ are ker d_mp and boundaries in C+ are im d_pm, and
    symmetrically for C-.
    """
    rk_pm = rank(c.d_pm)
    rk_mp = rank(c.d_mp)
    h_plus = (c.dim_plus - rk_mp) - rk_pm
    h_minus = (c.dim_minus - rk_pm) - rk_mp
    return h_plus, h_minus


def is_good(c: InvolutiveComplex, n_prime: int) -> bool:
    """True iff no nonzero kernel vector is supported entirely on the
    trailing n - n_prime coordinates of either sector.

    Decided exactly: the restriction of each boundary block to its last
    n - n_prime columns must have a trivial kernel.
    """
    n = c.dim_plus
    if c.dim_minus != n:
        raise ValueError("goodness is defined for equal sector dimensions")
    if not 0 <= n_prime <= n:
        raise ValueError(f"n_prime must lie in [0, {n}], got {n_prime}")
    tail = n - n_prime
    if tail == 0:
        return True
    sub_mp = MatGF(c.field, c.d_mp.data[:, n_prime:], _reduced=True)
    sub_pm = MatGF(c.field, c.d_pm.data[:, n_prime:], _reduced=True)
    return rank(sub_mp) == tail and rank(sub_pm) == tail


def flip_sectors(c: InvolutiveComplex) -> InvolutiveComplex:
    """The same complex with the roles of C+ and C- exchanged, i.e. the
    complex whose involution is -P."""
    return InvolutiveComplex(c.field, d_pm=c.d_mp, d_mp=c.d_pm)


def _header_shape(c: InvolutiveComplex) -> tuple[int, int, int]:
    n = c.dim_plus
    if c.dim_minus != n:
        raise ValueError("serialization requires equal sector dimensions")
    rk_pm = rank(c.d_pm)
    rk_mp = rank(c.d_mp)
    if rk_pm != rk_mp:
        raise ValueError("serialization requires equal boundary block ranks")
    h_plus, h_minus = homology_dimensions(c)
    if h_plus != h_minus:
        raise ValueError("serialization requires equal sector homology dimensions")
    return n, h_plus, rk_pm


def complex_to_text(c: InvolutiveComplex) -> str:
    """Serialize as a ``D n H L`` header followed by both blocks in the
    matrix text format, d_pm first."""
    n, H, L = _header_shape(c)
    header = f"{c.field.order} {n} {H} {L}\n"
    return header + matrix_to_text(c.d_pm) + matrix_to_text(c.d_mp)


def complex_from_text(text: str) -> InvolutiveComplex:
    """Parse and re-validate the format written by :func:`complex_to_text`."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty complex text")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError(f"bad complex header {lines[0]!r}")
    try:
        d, n, H, L = (int(t) for t in head)
    except ValueError as exc:
        raise ValueError(f"bad complex header {lines[0]!r}") from exc
    field = FieldSpec(d)
    d_pm, pos = _matrix_from_lines(lines, 1)
    d_mp, _ = _matrix_from_lines(lines, pos)
    if d_pm.field != field or d_mp.field != field:
        raise ValueError("matrix blocks disagree with the header field")
    if d_pm.shape != (n, n) or d_mp.shape != (n, n):
        raise ValueError("matrix blocks disagree with the header dimension")
    c = InvolutiveComplex(field, d_pm, d_mp)
    problems = validate(c)
    if problems:
        raise ValueError(f"complex text fails validation: {problems}")
    if _header_shape(c) != (n, H, L):
        raise ValueError("header shape disagrees with the matrices")
    return c
