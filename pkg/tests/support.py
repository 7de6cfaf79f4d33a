"""Shared builders for the test suite.

The distance-3 factor construction conjugates the standard boundary by
matrices whose leading columns are Vandermonde evaluations over GF(5):
columns 1,2 span the degree<=1 evaluation space and column 0 adds the
degree-2 row.  The kernel of one sector block is then the full degree<=2
space (an MDS [5,3,3] code) and the dual-side kernel is the dual of the
degree<=1 space (also [5,3,3]), so every logical class on every side has
weight exactly 3.
"""

from __future__ import annotations

import numpy as np

from quditprod import (
    ComplexShape,
    FieldSpec,
    InvolutiveComplex,
    is_good,
    random_boundary,
    standard_boundary,
    trial_rng,
)
from quditprod.gf import MatGF, inverse, rank

FIELD3 = FieldSpec(3)
FIELD5 = FieldSpec(5)

SHAPE3 = ComplexShape(3, 1, 1)
SHAPE5 = ComplexShape(5, 1, 2)

_PTS = np.arange(5)
_ROW_CONST = np.ones(5, dtype=np.int64)
_ROW_LIN = _PTS % 5
_ROW_QUAD = (_PTS * _PTS) % 5


def vandermonde_conjugator(rng: np.random.Generator) -> MatGF:
    """Invertible 5x5 over GF(5) whose columns 0..2 span the degree<=2
    evaluation space, with columns 1,2 spanning the degree<=1 subspace."""
    while True:
        u = np.zeros((5, 5), dtype=np.int64)
        u[:, 0] = _ROW_QUAD
        u[:, 1] = _ROW_CONST
        u[:, 2] = _ROW_LIN
        u[:, 3] = rng.integers(0, 5, 5)
        u[:, 4] = rng.integers(0, 5, 5)
        m = MatGF(FIELD5, u)
        if rank(m) == 5:
            return m


def distance3_complex(rng: np.random.Generator) -> InvolutiveComplex:
    """A random n=5, H=1 complex over GF(5) whose code has distance 3 on
    both sides for both involution signs."""
    std = standard_boundary(SHAPE5, FIELD5)
    u_plus = vandermonde_conjugator(rng)
    u_minus = vandermonde_conjugator(rng)
    d_pm = u_plus @ std.d_pm @ inverse(u_minus)
    d_mp = u_minus @ std.d_mp @ inverse(u_plus)
    return InvolutiveComplex(FIELD5, d_pm, d_mp)


def good_complexes(
    shape: ComplexShape,
    field: FieldSpec,
    n_prime: int,
    master_seed: int,
    count: int,
    max_attempts: int = 2000,
) -> list[InvolutiveComplex]:
    """The first `count` good complexes from a seeded rejection search."""
    out: list[InvolutiveComplex] = []
    for i in range(max_attempts):
        c, _, _ = random_boundary(shape, field, trial_rng(master_seed, i))
        if is_good(c, n_prime):
            out.append(c)
            if len(out) == count:
                return out
    raise AssertionError(
        f"only {len(out)} good complexes in {max_attempts} attempts"
    )
