from fractions import Fraction

import pytest

from fflab.hecke import (ULaurent, convolve, dimension_census, f_of_m,
                         partial_satake_closed, pi_power, pi_twist, s_k,
                         satake_direct, sym_b, sym_e, t_m, unit, verify_69)
from fflab.lattices import count_chains, lattices_at_position, standard_lattice
from fflab.localfield import LocalField

F = LocalField(3)


def test_generators():
    assert t_m(2, 0) == s_k(2, 0) == unit(2)
    assert t_m(2, 1) == s_k(2, 1)
    assert sorted(t_m(2, 2).c) == [(1, 1), (2, 0)]
    assert pi_power(2, 3).c == {(3, 3): Fraction(1)}
    assert s_k(2, -1).c == {(0, -1): Fraction(1)}


def test_convolution_unit_and_count():
    f = t_m(2, 2)
    assert convolve(unit(2), f, F) == f
    c = convolve(t_m(2, 1), t_m(2, 1), F)
    assert c.c == {(1, 1): Fraction(4), (2, 0): Fraction(1)}


def test_convolution_commutative_associative():
    fs = [t_m(2, 1), t_m(2, 2), s_k(2, 2)]
    for a in fs:
        for b in fs:
            assert convolve(a, b, F) == convolve(b, a, F)
    a, b, c = fs
    assert convolve(convolve(a, b, F), c, F) == convolve(a, convolve(b, c, F), F)


def test_f_of_m_matches_chain_counts():
    std = standard_lattice(F, 2)
    for m in [(1,), (2,), (1, 1), (2, 1)]:
        f = f_of_m(2, m, F)
        for mu, coeff in f.c.items():
            lat = next(iter(lattices_at_position(std, mu)))
            assert count_chains(lat, std, m) == coeff


def test_pi_twist():
    f = t_m(2, 1)
    g = pi_twist(f, 2)
    assert g.c == {(3, 2): Fraction(1)}
    assert pi_twist(g, -2) == f


def test_satake_closed_forms():
    for q in (2, 3):
        field = LocalField(q)
        for n in (1, 2, 3):
            for k in range(n + 1):
                got = satake_direct(s_k(n, k), (1,) * n, field)
                want = sym_e(n, q, k).scale(
                    ULaurent.q_half_power(q, Fraction(k * (n - k), 2)))
                assert got == want
            for m in range(3):
                got = satake_direct(t_m(n, m), (1,) * n, field)
                want = sym_b(n, q, m).scale(
                    ULaurent.q_half_power(q, Fraction(m * (n - 1), 2)))
                assert got == want


def test_satake_rank1_identity():
    f = f_of_m(1, (2, 1), F)
    img = satake_direct(f, (1,), F)
    assert img.c == {(3,): ULaurent.from_rational(3, f.c[(3,)])}


def test_satake_homomorphism():
    gens = [s_k(2, k) for k in range(3)] + [t_m(2, 1), t_m(2, 2)]
    for a in gens:
        for b in gens:
            lhs = satake_direct(convolve(a, b, F), (1, 1), F)
            rhs = satake_direct(a, (1, 1), F) * satake_direct(b, (1, 1), F)
            assert lhs == rhs


def test_satake_weyl_invariance_and_grading():
    img = satake_direct(t_m(3, 2), (1, 1, 1), F)
    for key in img.c:
        assert sum(key) == 2
        assert img.c[tuple(sorted(key, reverse=True))] == img.c[key]


def test_partial_satake_against_closed():
    for split in ((1, 1), (1, 2)):
        rank = sum(split)
        for m in range(3):
            direct = satake_direct(f_of_m(rank, (m,), F), split, F,
                                   as_tensor=True)
            closed = partial_satake_closed(F, 0, (m,), split)
            assert direct == closed


def test_partial_satake_rank4_integral_exponents():
    closed = partial_satake_closed(F, 0, (1,), (2, 2))
    for coeff in closed.values():
        assert coeff.b == 0  # integral powers of q for even splits


def test_generation_by_s_family():
    # every f(m) with small support is a polynomial in the S_k images
    from itertools import product
    field = F
    for rank in (2, 3):
        target = satake_direct(f_of_m(rank, (2,), field), (1,) * rank, field)
        # solve in the symmetric algebra: T_2's image is a combination of
        # e_2, e_1^2 with u-coefficients; verify by reconstructing
        e1 = satake_direct(s_k(rank, 1), (1,) * rank, field)
        e2 = satake_direct(s_k(rank, 2), (1,) * rank, field)
        combos = [e1 * e1, e2]
        # target = a*(e1^2) + b*e2 for some rational a, b times u-powers:
        # verify membership by brute force over small exponent grids
        found = False
        for num_a in range(-9, 10):
            for num_b in range(-9, 10):
                for shift in (-2, -1, 0, 1, 2):
                    ua = ULaurent.q_half_power(3, Fraction(shift, 2), num_a)
                    ub = ULaurent.q_half_power(3, Fraction(shift, 2), num_b)
                    cand = combos[0].scale(ua) + combos[1].scale(ub)
                    if cand == target:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        assert found


def test_symmetric_identities():
    for n in (1, 2, 3, 4):
        for k in range(1, 5):
            assert verify_69(n, 3, k)
    assert sym_b(2, 3, 1) == sym_e(2, 3, 1)
    # n=2: b_2 = e_1^2 - e_2
    assert sym_b(2, 3, 2) == sym_e(2, 3, 1) * sym_e(2, 3, 1) - sym_e(2, 3, 2)


def test_dimension_census():
    assert dimension_census(2, 2) == (2, 2)
    assert dimension_census(3, 3) == (3, 3)
    assert dimension_census(3, 0) == (1, 1)
    for n in (1, 2, 3):
        for k in range(6):
            a, b = dimension_census(n, k)
            assert a == b
