from __future__ import annotations

import numpy as np
import pytest

from quditprod import (
    ComplexShape,
    cycle_space_plus,
    extract_css,
    homology_dimensions,
    kunneth_check,
    product,
    product_chain_map,
    random_boundary,
    standard_boundary,
    trial_rng,
    validate,
)
from quditprod.gf import MatGF, rank
from support import FIELD3, FIELD5, SHAPE3


def _standard_product():
    std = standard_boundary(SHAPE3, FIELD3)
    return product(std, std)


def test_product_dimensions_and_validity() -> None:
    pc = _standard_product()
    assert pc.complex.dim_plus == 18
    assert pc.complex.dim_minus == 18
    assert validate(pc.complex) == []
    assert pc.block_shapes == ((3, 3), (3, 3))


def test_product_rejects_mixed_fields() -> None:
    a = standard_boundary(SHAPE3, FIELD3)
    b = standard_boundary(SHAPE3, FIELD5)
    with pytest.raises(ValueError):
        product(a, b)


def test_sorted_raw_is_a_permutation() -> None:
    pc = _standard_product()
    order = pc.sorted_raw()
    assert sorted(order.tolist()) == list(range(36))


def test_vector_block_round_trip() -> None:
    pc = _standard_product()
    rng = np.random.default_rng(0)
    v = rng.integers(0, 3, pc.complex.dim_plus)
    psi_plus, psi_minus = pc.vector_to_blocks(v)
    assert psi_plus.shape == (3, 3) and psi_minus.shape == (3, 3)
    assert (pc.blocks_to_vector(psi_plus, psi_minus) == v).all()
    with pytest.raises(ValueError):
        pc.vector_to_blocks(np.zeros(7, dtype=np.int64))


def test_product_boundary_matches_raw_tensor_formula() -> None:
    """The sorted boundary must be the raw d1 (x) I + P1 (x) d2 matrix
    under the sorted-to-raw index map."""
    c1, _, _ = random_boundary(SHAPE3, FIELD3, trial_rng(30, 0))
    c2, _, _ = random_boundary(ComplexShape(4, 2, 1), FIELD3, trial_rng(30, 1))
    pc = product(c1, c2)
    raw = (
        np.kron(c1.full_boundary().data, np.eye(c2.dim_total, dtype=np.int64))
        + np.kron(c1.involution().data, c2.full_boundary().data)
    ) % 3
    order = pc.sorted_raw()
    assert (pc.complex.full_boundary().data == raw[np.ix_(order, order)]).all()


@pytest.mark.parametrize("h1,h2", [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)])
def test_kunneth_on_random_factors(h1: int, h2: int) -> None:
    n_for = {0: 2, 1: 3, 2: 4}
    s1 = ComplexShape.from_hom_dim(n_for[h1], h1)
    s2 = ComplexShape.from_hom_dim(n_for[h2], h2)
    for i in range(5):
        c1, _, _ = random_boundary(s1, FIELD3, trial_rng(31 + h1, i))
        c2, _, _ = random_boundary(s2, FIELD3, trial_rng(31 + h2, 100 + i))
        pc = product(c1, c2)
        rep = kunneth_check(pc)
        assert rep.ok
        assert rep.h_plus == 2 * h1 * h2
        assert rep.h_minus == 2 * h1 * h2
        assert homology_dimensions(pc.complex) == (2 * h1 * h2, 2 * h1 * h2)


def test_kunneth_mixed_sector_homologies() -> None:
    """Factors whose plus and minus homologies differ still satisfy
    h+(product) = h1+ h2+ + h1- h2-."""
    c1, _, _ = random_boundary(SHAPE3, FIELD3, trial_rng(32, 0))
    c2, _, _ = random_boundary(ComplexShape(4, 2, 1), FIELD3, trial_rng(32, 1))
    pc = product(c1, c2)
    rep = kunneth_check(pc)
    assert rep.ok
    h1p, h1m = homology_dimensions(c1)
    h2p, h2m = homology_dimensions(c2)
    assert rep.expected_plus == h1p * h2p + h1m * h2m
    assert rep.expected_minus == h1p * h2m + h1m * h2p


def test_cycle_space_plus_spans_the_kernel() -> None:
    pc = _standard_product()
    basis = cycle_space_plus(pc)
    d_mp = pc.complex.d_mp
    assert len(basis) == pc.complex.dim_plus - rank(d_mp)
    for v in basis:
        assert not (d_mp @ v).any()
    assert rank(MatGF(FIELD3, np.array(basis))) == len(basis)


def test_product_code_parameters_at_desk_scale() -> None:
    pc = _standard_product()
    code = extract_css(pc.complex)
    assert code.n_phys == 18
    assert code.k == 2
    assert code.stab_weight <= 6


def test_product_chain_map_of_identities_is_identity() -> None:
    pc = _standard_product()
    eye1 = MatGF.identity(FIELD3, 6)
    eye2 = MatGF.identity(FIELD3, 6)
    m = product_chain_map(eye1, eye2, pc, pc)
    assert m == MatGF.identity(FIELD3, 36)


def test_product_chain_map_rejects_sector_mixing() -> None:
    pc = _standard_product()
    swap = np.zeros((6, 6), dtype=np.int64)
    swap[:3, 3:] = np.eye(3, dtype=np.int64)
    swap[3:, :3] = np.eye(3, dtype=np.int64)
    with pytest.raises(ValueError, match="sector"):
        product_chain_map(MatGF(FIELD3, swap), MatGF.identity(FIELD3, 6), pc, pc)


def test_product_chain_map_commutes_with_boundaries() -> None:
    """Sector-preserving factor chain maps induce a product map that
    intertwines the product boundaries."""
    c1, _, _ = random_boundary(SHAPE3, FIELD3, trial_rng(33, 0))
    c2, _, _ = random_boundary(SHAPE3, FIELD3, trial_rng(33, 1))
    pc1 = product(c1, c1)
    pc2 = product(c2, c2)
    # f = u (x) u with u block diagonal intertwines conjugated boundaries;
    # build f1: c1 -> c2 as the change of basis linking the two conjugates
    _, u1p, u1m = random_boundary(SHAPE3, FIELD3, trial_rng(33, 0))
    _, u2p, u2m = random_boundary(SHAPE3, FIELD3, trial_rng(33, 1))
    from quditprod.gf import inverse

    blk = np.zeros((6, 6), dtype=np.int64)
    blk[:3, :3] = (u2p @ inverse(u1p)).data
    blk[3:, 3:] = (u2m @ inverse(u1m)).data
    f = MatGF(FIELD3, blk)
    big = product_chain_map(f, f, pc1, pc2)
    lhs = big @ pc1.complex.full_boundary()
    rhs = pc2.complex.full_boundary() @ big
    assert lhs == rhs
