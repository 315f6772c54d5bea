import random

import pytest

from fflab.errors import NotFound, WrongDimension
from fflab.etale import (RAMIFIED, SPLIT, UNRAMIFIED, build_quadratic,
                         compute_e3, is_regular_semisimple, resultant,
                         symmetry_check)
from fflab.linalg import Matrix
from fflab.localfield import LocalField
from fflab.pairs import (EmbeddingPair, build_l_delta, centralizer,
                         direct_sum, invariant, match_alpha, random_pair,
                         random_unimodular, standard_embedding, w_element)

F = LocalField(3)
E0 = build_quadratic(SPLIT, F)
E1 = build_quadratic(UNRAMIFIED, F)
E2R = build_quadratic(RAMIFIED, F)
E3 = compute_e3(E1, E1)


def test_minimal_polynomial_enforced():
    std = standard_embedding(E1, 1)
    EmbeddingPair(E1, E1, std, std)  # valid
    with pytest.raises(ValueError):
        EmbeddingPair(E1, E1, std, Matrix.identity(F, 2))


def test_degenerate_equal_embeddings():
    std = standard_embedding(E1, 1)
    inv = invariant(EmbeddingPair(E1, E1, std, std))
    assert symmetry_check(inv.delta)
    assert not inv.rs_flag


def test_symmetry_always_holds():
    for eb, seeds in ((E1, range(4)), (E2R, range(3))):
        for s in seeds:
            pair, inv, _ = random_pair(E1, eb, 1, seed=s)
            assert symmetry_check(inv.delta)


def test_w_element_centralizes():
    for s in range(5):
        pair, inv, _ = random_pair(E1, E1, 1, seed=s)
        w = w_element(pair)
        z = Matrix.zero(F, 2)
        assert (w * pair.A - pair.A * w).same(z)
        assert (w * pair.B - pair.B * w).same(z)


def test_conjugation_invariance():
    pair, inv, _ = random_pair(E1, E1, 1, seed=7)
    rng = random.Random(3)
    for _ in range(5):
        g, gi = random_unimodular(F, 2, rng)
        invc = invariant(pair.conjugate(g, gi))
        assert all(x.same(y) for x, y in zip(invc.delta.coeffs, inv.delta.coeffs))


def test_block_multiplicativity():
    p0, i0, _ = random_pair(E1, E1, 1, seed=7)
    p1, i1, _ = random_pair(E1, E1, 1, seed=11)
    ds_inv = invariant(direct_sum(p0, p1))
    prod = i0.delta * i1.delta
    assert all(x.same(y) for x, y in zip(ds_inv.delta.coeffs, prod.coeffs))


def test_rs_of_direct_sum_needs_nonzero_resultant():
    p0, i0, _ = random_pair(E1, E1, 1, seed=1)
    ds_inv = invariant(direct_sum(p0, p0))  # equal invariants: Res = 0
    assert not ds_inv.rs_flag
    p1, i1, _ = random_pair(E1, E1, 1, seed=3)
    ds2 = invariant(direct_sum(p0, p1))
    assert ds2.rs_flag == (is_regular_semisimple(i0.delta)
                           and is_regular_semisimple(i1.delta)
                           and resultant(i0.delta, i1.delta).is_invertible())


def test_centralizer_dimension_and_gamma():
    pair, inv, _ = random_pair(E1, E1, 1, seed=7)
    cent = centralizer(pair)
    assert [f.degree for f in cent.factors] == [1]
    gg = cent.gamma_group()
    assert [g.shift for g in gg.gens] == [2]
    # centralizer elements commute with w
    w = w_element(pair)
    for b in cent.basis:
        assert (b * w - w * b).same(Matrix.zero(F, 2))


def test_centralizer_wrong_dimension_on_degenerate():
    std = standard_embedding(E1, 1)
    with pytest.raises(WrongDimension):
        centralizer(EmbeddingPair(E1, E1, std, std))


def test_centralizer_n2():
    p0, _, _ = random_pair(E1, E1, 1, seed=1)
    p1, _, _ = random_pair(E1, E1, 1, seed=3)
    cent = centralizer(direct_sum(p0, p1))
    assert sorted(f.degree for f in cent.factors) == [1, 1]
    gg = cent.gamma_group()
    assert sorted(g.shift for g in gg.gens) == [2, 2]


def test_match_alpha_roundtrip_split_target():
    for s in range(4):
        pair, inv, _ = random_pair(E1, E1, 1, seed=s)
        alpha, ainv = match_alpha(inv.delta, E0, E3)
        assert all(x.same(y) for x, y in zip(ainv.delta.coeffs, inv.delta.coeffs))
        # idempotent relations of the first embedding
        P = alpha.A
        assert (P * P).same(P)
        ident = Matrix.identity(F, 2)
        assert (P + (ident - P)).same(ident)


def test_match_alpha_roundtrip_field_target():
    for s in range(3):
        pair, inv, _ = random_pair(E1, E2R, 1, seed=s)
        alpha, ainv = match_alpha(inv.delta, E0, inv.target)
        assert all(x.same(y) for x, y in zip(ainv.delta.coeffs, inv.delta.coeffs))


def test_match_alpha_n2():
    p0, i0, _ = random_pair(E1, E1, 1, seed=1)
    p1, i1, _ = random_pair(E1, E1, 1, seed=3)
    ds_inv = invariant(direct_sum(p0, p1))
    alpha, ainv = match_alpha(ds_inv.delta, E0, E3)
    assert all(x.same(y) for x, y in zip(ainv.delta.coeffs, ds_inv.delta.coeffs))


def test_match_alpha_family_relation():
    # every family member satisfies the quadratic relation of the target
    pair, inv, _ = random_pair(E1, E1, 1, seed=2)
    alpha, _ = match_alpha(inv.delta, E0, E3)
    C = alpha.B
    ident = Matrix.identity(F, 2)
    rel = C * C - C.scale(E3.tr) + ident.scale(E3.nm)
    assert rel.same(Matrix.zero(F, 2))


def test_build_l_delta():
    pair, inv, _ = random_pair(E1, E1, 1, seed=1)
    L = build_l_delta(inv.delta)
    assert L.dim == 1
    assert [f.degree for f in L.factors] == [1]
    p1, i1, _ = random_pair(E1, E1, 1, seed=3)
    ds_inv = invariant(direct_sum(pair, p1))
    L2 = build_l_delta(ds_inv.delta)
    assert L2.dim == 2
    assert sorted(f.degree for f in L2.factors) == [1, 1]
