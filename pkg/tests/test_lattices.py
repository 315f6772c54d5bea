import random

import pytest

from fflab.errors import SingularBasis, UnstableBase
from fflab.etale import RAMIFIED, SPLIT, UNRAMIFIED, build_quadratic
from fflab.lattices import (GammaGenerator, GammaGroup, canonicalize,
                            count_chains, from_generators, in_lattice, index,
                            lattice_leq, lattices_at_position,
                            relative_position, stable_family, stable_lattices,
                            standard_lattice, sublattices_of_index,
                            superlattices_of_index)
from fflab.linalg import Matrix, mat_det
from fflab.localfield import LocalField

F = LocalField(3)
one, pi = F.one, F.pi()
std2 = standard_lattice(F, 2)


def test_canonicalize_identity_and_idempotence():
    assert standard_lattice(F, 2).diag == (0, 0)
    L = canonicalize(F, Matrix(F, [[pi, F.zero], [one, one]]))
    assert L.diag == (1, 0)
    assert canonicalize(F, L.basis) == L


def test_canonicalize_unimodular_invariance():
    rng = random.Random(1)
    for _ in range(8):
        g = Matrix(F, [[F.random_element(rng, -1, 2) for _ in range(2)]
                       for _ in range(2)])
        try:
            lg = canonicalize(F, g)
        except SingularBasis:
            continue
        u = Matrix(F, [[one, F.random_element(rng, 0, 2)], [F.zero, one]])
        assert canonicalize(F, g * u) == lg


def test_singular_rejected():
    with pytest.raises(SingularBasis):
        canonicalize(F, Matrix(F, [[one, one], [one, one]]))


def test_index_examples():
    piL = canonicalize(F, Matrix.diagonal(F, [pi, pi]))
    assert index(std2, piL) == 2
    mixed = canonicalize(F, Matrix.diagonal(F, [pi, F.pi(-1)]))
    assert index(std2, mixed) == 0
    assert index(std2, std2) == 0


def test_index_additive_in_towers():
    rng = random.Random(2)
    subs = list(sublattices_of_index(std2, 1))
    for a in subs[:3]:
        for b in sublattices_of_index(a, 2):
            assert index(std2, b) == index(std2, a) + index(a, b)


def test_relative_position():
    piL = canonicalize(F, Matrix.diagonal(F, [pi, pi]))
    assert relative_position(std2, piL) == (1, 1)
    d = canonicalize(F, Matrix.diagonal(F, [pi, one]))
    assert relative_position(std2, d) == (1, 0)
    # sum of entries equals the index
    for sub in sublattices_of_index(std2, 3):
        assert sum(relative_position(std2, sub)) == 3


def test_relative_position_invariance():
    rng = random.Random(3)
    subs = list(sublattices_of_index(std2, 2))
    for _ in range(5):
        while True:
            g = Matrix(F, [[F.random_element(rng, 0, 1) for _ in range(2)]
                           for _ in range(2)])
            if mat_det(g).coeffs:
                break
        l1, l2 = subs[0], subs[5]
        gl1 = canonicalize(F, g * l1.basis)
        gl2 = canonicalize(F, g * l2.basis)
        assert relative_position(gl1, gl2) == relative_position(l1, l2)


def test_sublattice_counts_brute_force():
    # rank 2: sum_{j<=k} q^j lattices of index k
    for k in (0, 1, 2, 3):
        subs = list(sublattices_of_index(std2, k))
        assert len(subs) == len(set(subs))
        assert len(subs) == sum(3 ** j for j in range(k + 1))


def test_superlattices_dual_route():
    piL = canonicalize(F, Matrix.diagonal(F, [pi, pi]))
    sups = list(superlattices_of_index(piL, 1))
    assert len(sups) == 4
    assert all(lattice_leq(piL, s) and index(s, piL) == 1 for s in sups)


def test_lattices_at_position():
    assert len(list(lattices_at_position(std2, (1, 0)))) == 4
    assert len(list(lattices_at_position(std2, (0, -1)))) == 4
    assert list(lattices_at_position(std2, (0, 0))) == [std2]


def test_count_chains():
    piL = canonicalize(F, Matrix.diagonal(F, [pi, pi]))
    assert count_chains(piL, std2, (1, 1)) == 4
    assert count_chains(piL, std2, (2,)) == 1
    assert count_chains(piL, std2, (1,)) == 0
    assert count_chains(std2, std2, ()) == 1


def test_stable_lattices_unramified_rank2():
    E = build_quadratic(UNRAMIFIED, F)
    J = Matrix(F, [[F.zero, -E.nm], [one, E.tr]])
    ball = stable_lattices(F, J, E, 2, std2)
    assert sorted(l.det_valuation for l in ball) == [-4, -2, 0, 2, 4]
    assert all(all(in_lattice(l, J.apply(l.basis.column(j))) for j in range(2))
               for l in ball)


def test_stable_lattices_rank4_count():
    E = build_quadratic(UNRAMIFIED, F)
    J2 = Matrix(F, [[F.zero, -E.nm], [one, E.tr]])
    J = Matrix.block_diag(F, [J2, J2])
    ball = stable_lattices(F, J, E, 1, standard_lattice(F, 4))
    # neighbors are the q^2+1 residue lines and as many hyperplanes
    assert len(ball) == 1 + 2 * (3 ** 2 + 1)
    assert len(set(ball)) == len(ball)


def test_stable_lattices_split():
    E0 = build_quadratic(SPLIT, F)
    J = Matrix(F, [[one, F.zero], [F.zero, F.zero]])
    ball = stable_lattices(F, J, E0, 1, std2)
    assert len(ball) == 9  # 3 x 3 component moves


def test_unstable_base_rejected():
    E = build_quadratic(RAMIFIED, F)
    J = Matrix(F, [[F.zero, -E.nm], [one, E.tr]])
    bad = canonicalize(F, Matrix.diagonal(F, [F.pi(2), one]))
    with pytest.raises(UnstableBase):
        stable_family(F, J, E, bad)


def test_stable_closed_under_centralizer_spot():
    # multiplication by the generator preserves the stable family
    E = build_quadratic(UNRAMIFIED, F)
    J = Matrix(F, [[F.zero, -E.nm], [one, E.tr]])
    fam = stable_family(F, J, E, std2)
    ball = fam.ball(1)
    for l in ball[:4]:
        moved = canonicalize(F, J * l.basis)
        assert fam.is_stable(moved)


def test_gamma_reduction():
    gen = GammaGenerator(F, Matrix.identity(F, 2).scale(pi),
                         Matrix.identity(F, 2))
    gg = GammaGroup(F, [gen])
    assert gen.shift == 2
    l = canonicalize(F, Matrix.diagonal(F, [F.pi(3), F.pi(2)]))
    (r1, r2), e, vol = gg.reduce_pair(l, l)
    assert vol == 0
    l2 = canonicalize(F, Matrix.diagonal(F, [pi, one]))
    (r1b, _), _, _ = gg.reduce_pair(l2, l2)
    assert r1 == r1b  # same orbit, same representative
    assert gg.in_fundamental_box(r1)
