"""Quotients of a complex by the boundary image of its trailing coordinates.

For a complex with equal sector dimensions n, fix 1 <= n' <= n and let
V be the span of the first n' basis vectors in each sector, V> the span
of the rest, and W the coordinate projection onto V.  The subspace
S> = W d(V>) sits inside V, and the quotient V' = V / S> inherits a
boundary d'(x + S>) = phi(d x) and involution P'(x + S>) = phi(P x),
where phi: full space -> V' is projection followed by the quotient map.
Well-definedness is not assumed; reduce() asserts it on a basis of S>.

Coset representatives are chosen canonically: row-reduce a generator
basis of S>, then represent each class by the non-pivot coordinates of
its canonically reduced element.  This makes phi a concrete matrix and
keeps every downstream identity checkable exactly.

Because d swaps sectors and W preserves them, S> splits as a direct sum
of sector-homogeneous pieces, so the quotient is again a two-sector
complex.  The complex is called good for n' when both pieces have the
largest possible dimension n - n'; then each quotient sector has
dimension K = 2n' - n.

The same parameter object carries the weight thresholds used to cut an
n' x n' reduced matrix out of a low-density n x n one and to test the
uniform low weight condition on the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .complexes import InvolutiveComplex, validate
from .gf import MatGF, _row_reduce, col_weights, kernel_basis, rank, row_weights

__all__ = [
    "ReductionParams",
    "ReducedComplex",
    "reduce",
    "reduced_kerim_check",
    "SupportSelection",
    "select_reduced_support",
    "reduced_matrix",
    "uniform_low_weight",
    "weights_within",
]


@dataclass(frozen=True)
class ReductionParams:
    """Reduction size n' for ambient sector dimension n, plus the
    optional weight-density parameter c.

    Derived quantities: r = (n - n')/n, K = 2n' - n, and when c is set,
    c' = c / (r(1-r)).  All of them are exact fractions.  The density
    parameter must satisfy 0 < c < r, which forces n' < n.
    """

    n: int
    n_prime: int
    c: Fraction | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not (2 * self.n_prime > self.n and self.n_prime <= self.n):
            raise ValueError(f"need n/2 < n_prime <= n, got n={self.n}, n_prime={self.n_prime}")
        if self.c is not None:
            object.__setattr__(self, "c", Fraction(self.c))
            if not (0 < self.c < self.r):
                raise ValueError(f"need 0 < c < r = {self.r}, got c = {self.c}")

    @property
    def r(self) -> Fraction:
        return Fraction(self.n - self.n_prime, self.n)

    @property
    def K(self) -> int:
        return 2 * self.n_prime - self.n

    @property
    def c_prime(self) -> Fraction:
        if self.c is None:
            raise ValueError("c was not set")
        return self.c / (self.r * (1 - self.r))

    @property
    def row_col_threshold(self) -> Fraction:
        """Weight cap c*n/r for rows and columns kept by the support
        selection."""
        if self.c is None:
            raise ValueError("c was not set")
        return self.c * self.n / self.r

    @property
    def ulw_threshold(self) -> Fraction:
        """Weight cap c'*n' of the uniform low weight condition."""
        return self.c_prime * self.n_prime


@dataclass(frozen=True, eq=False)
class ReducedComplex:
    """Output of reduce(): the quotient complex together with the maps
    relating it to the base.

    phi sends full-space vectors (length 2n) to quotient coordinates;
    embed sends quotient coordinates back to the canonical coset
    representative (a full-space vector supported on V).  s_gt holds a
    row-echelon basis of S> written in V coordinates, and pivot_coords /
    rep_coords record which V coordinates were consumed by S> and which
    represent the quotient.
    """

    base: InvolutiveComplex
    params: ReductionParams
    quotient: InvolutiveComplex
    phi: MatGF
    embed: MatGF
    s_gt: MatGF
    pivot_coords: tuple[int, ...]
    rep_coords: tuple[int, ...]

    @property
    def v_dim(self) -> int:
        return self.params.n_prime

    @property
    def s_plus(self) -> int:
        """dim of the plus-sector part of S>."""
        return sum(1 for i in self.pivot_coords if i < self.params.n_prime)

    @property
    def s_minus(self) -> int:
        return len(self.pivot_coords) - self.s_plus

    @property
    def quotient_dim_plus(self) -> int:
        return self.quotient.dim_plus

    @property
    def quotient_dim_minus(self) -> int:
        return self.quotient.dim_minus

    @property
    def good(self) -> bool:
        """Whether both parts of S> reach the maximal dimension n - n',
        equivalently whether both quotient sectors have dimension K."""
        gap = self.params.n - self.params.n_prime
        return self.s_plus == gap and self.s_minus == gap

    def induced_boundary(self) -> MatGF:
        return self.quotient.full_boundary()

    def induced_involution(self) -> MatGF:
        return self.quotient.involution()


def reduce(c: InvolutiveComplex, params: ReductionParams) -> ReducedComplex:
    """Quotient of c by S> = W d(V>), with V the leading n' coordinates
    of each sector.

    Always succeeds; goodness only affects the dimensions, never the
    construction.  Raises AssertionError if the quotient maps fail the
    identities they are constructed to satisfy (which would indicate a
    broken input complex rather than a usage error).
    """
    n = c.dim_plus
    if c.dim_minus != n:
        raise ValueError("reduction requires equal sector dimensions")
    np1 = params.n_prime
    if params.n != n:
        raise ValueError(f"params built for n = {params.n}, complex has n = {n}")
    p = c.field.order
    v_idx = np.concatenate([np.arange(np1), n + np.arange(np1)])
    tail_idx = np.concatenate([np.arange(np1, n), n + np.arange(np1, n)])
    dfull = c.full_boundary()
    pfull = c.involution()

    gens = dfull.data[np.ix_(v_idx, tail_idx)]
    s_rref, piv = _row_reduce(gens.T, p)
    s_rank = len(piv)
    s_basis = s_rref[:s_rank, :]
    piv_set = set(piv)
    rep = tuple(i for i in range(2 * np1) if i not in piv_set)
    q = len(rep)

    sel_v = np.zeros((2 * np1, 2 * n), dtype=np.int64)
    sel_v[np.arange(2 * np1), v_idx] = 1
    canon = sel_v if s_rank == 0 else (sel_v - s_basis.T @ sel_v[piv, :]) % p
    phi = MatGF(c.field, canon[list(rep), :], _reduced=True)

    embed_data = np.zeros((2 * n, q), dtype=np.int64)
    embed_data[v_idx[list(rep)], np.arange(q)] = 1
    embed = MatGF(c.field, embed_data, _reduced=True)

    # phi kills S> by construction; the quotient maps are well defined
    # because d and P also send S> into ker(phi).  Checked, not assumed.
    s_full = MatGF.zeros(c.field, 2 * n, s_rank).data.copy()
    s_full[v_idx, :] = s_basis.T
    s_full_m = MatGF(c.field, s_full, _reduced=True)
    assert (phi @ s_full_m).is_zero(), "phi does not kill S>"
    assert (phi @ (dfull @ s_full_m)).is_zero(), "boundary does not descend to the quotient"
    assert (phi @ (pfull @ s_full_m)).is_zero(), "involution does not descend to the quotient"

    d_q = phi @ dfull @ embed
    p_q = phi @ pfull @ embed

    q_plus = sum(1 for i in rep if i < np1)
    signs = np.concatenate([np.ones(q_plus, dtype=np.int64), -np.ones(q - q_plus, dtype=np.int64)])
    expected_p = MatGF(c.field, np.diag(signs % p), _reduced=True)
    assert p_q == expected_p, "quotient involution is not the sector sign matrix"
    assert not d_q.data[:q_plus, :q_plus].any(), "quotient boundary has a ++ block"
    assert not d_q.data[q_plus:, q_plus:].any(), "quotient boundary has a -- block"

    quotient = InvolutiveComplex(
        field=c.field,
        d_pm=MatGF(c.field, d_q.data[:q_plus, q_plus:], _reduced=True),
        d_mp=MatGF(c.field, d_q.data[q_plus:, :q_plus], _reduced=True),
    )
    problems = validate(quotient)
    assert not problems, f"quotient fails complex axioms: {problems}"

    return ReducedComplex(
        base=c,
        params=params,
        quotient=quotient,
        phi=phi,
        embed=embed,
        s_gt=MatGF(c.field, s_basis, _reduced=True),
        pivot_coords=tuple(int(i) for i in piv),
        rep_coords=rep,
    )


def _same_column_space(a: MatGF, b: MatGF) -> bool:
    if a.rows != b.rows:
        return False
    ra = rank(a)
    rb = rank(b)
    if ra != rb:
        return False
    stacked = MatGF(a.field, np.concatenate([a.data, b.data], axis=1), _reduced=True)
    return rank(stacked) == ra


def _kernel_matrix(m: MatGF) -> MatGF:
    basis = kernel_basis(m)
    if not basis:
        return MatGF.zeros(m.field, m.cols, 0)
    return MatGF(m.field, np.array(basis, dtype=np.int64).T, _reduced=True)


def reduced_kerim_check(rc: ReducedComplex) -> list[str]:
    """Exact verification of the quotient's kernel/image description.

    Checks, as subspace equalities: ker d' = phi(d^{-1}(V>)) and
    im d' = phi(im d), plus the chain-map identities phi d = d' phi and
    phi P = P' phi.  When the base is good for n', also checks that each
    off-diagonal block of d' loses exactly n - n' kernel and image
    dimensions relative to the corresponding block of d.  Returns a
    list of violated properties, empty when everything holds.
    """
    problems: list[str] = []
    c = rc.base
    params = rc.params
    n = params.n
    np1 = params.n_prime
    dfull = c.full_boundary()
    pfull = c.involution()
    d_q = rc.quotient.full_boundary()
    p_q = rc.quotient.involution()

    if rc.phi @ dfull != d_q @ rc.phi:
        problems.append("chain map fails: phi d != d' phi")
    if rc.phi @ pfull != p_q @ rc.phi:
        problems.append("chain map fails: phi P != P' phi")

    # d^{-1}(V>) is the kernel of d with its V-coordinate rows kept,
    # i.e. of the 2n' x 2n matrix (W d) restricted to V rows.
    v_idx = np.concatenate([np.arange(np1), n + np.arange(np1)])
    wd = MatGF(c.field, dfull.data[v_idx, :], _reduced=True)
    preimage = _kernel_matrix(wd)
    lhs_ker = _kernel_matrix(d_q)
    rhs_ker = rc.phi @ preimage
    if not _same_column_space(lhs_ker, rhs_ker):
        problems.append("ker d' != phi(d^{-1}(V>))")

    rhs_im = rc.phi @ dfull
    if not _same_column_space(d_q, rhs_im):
        problems.append("im d' != phi(im d)")

    if rc.good:
        gap = n - np1
        pairs = [
            ("+- block", c.d_pm, rc.quotient.d_pm),
            ("-+ block", c.d_mp, rc.quotient.d_mp),
        ]
        for label, base_block, q_block in pairs:
            base_rank = rank(base_block)
            q_rank = rank(q_block)
            if q_rank != base_rank - gap:
                problems.append(
                    f"{label}: expected image dim {base_rank - gap}, got {q_rank}"
                )
            base_ker = base_block.cols - base_rank
            q_ker = q_block.cols - q_rank
            if q_ker != base_ker - gap:
                problems.append(
                    f"{label}: expected kernel dim {base_ker - gap}, got {q_ker}"
                )
    return problems


@dataclass(frozen=True)
class SupportSelection:
    """Row and column index sets cutting an n' x n' submatrix out of
    each sector block."""

    rows_plus: tuple[int, ...]
    cols_plus: tuple[int, ...]
    rows_minus: tuple[int, ...]
    cols_minus: tuple[int, ...]


def _light_indices(weights: np.ndarray, bound: Fraction, count: int) -> tuple[int, ...] | None:
    picked = [int(i) for i, w in enumerate(weights) if int(w) <= bound]
    if len(picked) < count:
        return None
    return tuple(picked[:count])


def select_reduced_support(
    psi_plus: MatGF, psi_minus: MatGF, params: ReductionParams
) -> SupportSelection | None:
    """First n' rows and columns of each block whose weight is at most
    c*n/r, independently per block; None when a block has too few.

    A block of total weight below c*n^2 always has at least n' = (1-r)n
    rows (and columns) below the cap, so None can only occur when that
    density hypothesis fails.
    """
    n = params.n
    for name, m in (("plus", psi_plus), ("minus", psi_minus)):
        if m.shape != (n, n):
            raise ValueError(f"{name} block has shape {m.shape}, expected ({n}, {n})")
    bound = params.row_col_threshold
    np1 = params.n_prime
    parts = (
        _light_indices(row_weights(psi_plus), bound, np1),
        _light_indices(col_weights(psi_plus), bound, np1),
        _light_indices(row_weights(psi_minus), bound, np1),
        _light_indices(col_weights(psi_minus), bound, np1),
    )
    if any(part is None for part in parts):
        return None
    return SupportSelection(*parts)


def reduced_matrix(
    psi_plus: MatGF, psi_minus: MatGF, supports: SupportSelection
) -> tuple[MatGF, MatGF]:
    """Restrict each block to its selected rows and columns."""
    return (
        psi_plus.submatrix(supports.rows_plus, supports.cols_plus),
        psi_minus.submatrix(supports.rows_minus, supports.cols_minus),
    )


def weights_within(m: MatGF, bound: Fraction) -> bool:
    """Whether every row and column weight of m is at most ``bound``."""
    if m.rows == 0 or m.cols == 0:
        return True
    return int(row_weights(m).max()) <= bound and int(col_weights(m).max()) <= bound


def uniform_low_weight(m: MatGF, params: ReductionParams) -> bool:
    """The uniform low weight condition: every row and column of the
    n' x n' matrix has weight at most c'*n'."""
    if m.shape != (params.n_prime, params.n_prime):
        raise ValueError(f"expected a {params.n_prime} x {params.n_prime} matrix, got {m.shape}")
    return weights_within(m, params.ulw_threshold)
