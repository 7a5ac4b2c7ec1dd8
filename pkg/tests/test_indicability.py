"""Smith normal form and infinite-cyclic-quotient detection."""

import random

import pytest

from _oracles import gcd_of_minors_invariants
from ordlab.indicability import (
    Presentation,
    abelianization,
    has_infinite_cyclic_quotient,
    kernel_lattice_basis,
    smith_normal_form,
    z_quotient_witness,
)
from ordlab.intmat import mat_mul


def test_snf_diagonal_example():
    result = smith_normal_form([[2, 0], [0, 3]])
    assert result.invariants == (1, 6)


def test_snf_identity():
    assert smith_normal_form([[1, 0], [0, 1]]).invariants == (1, 1)


def test_snf_row_vector():
    assert smith_normal_form([[2, -3]]).invariants == (1,)


def test_snf_zero_matrix():
    result = smith_normal_form([[0, 0], [0, 0]])
    assert result.invariants == ()
    assert result.free_rank == 2


def test_snf_transform_identity_random(rng):
    """U*M*V = D with unimodular U, V and a divisibility chain, at random."""
    for _ in range(200):
        rows = rng.randint(1, 8)
        cols = rng.randint(1, 8)
        matrix = [[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)]
        result = smith_normal_form(matrix)  # verification runs internally
        diag = mat_mul(mat_mul(result.u, result.matrix), result.v)
        assert diag == result.diagonal_matrix()
        for d1, d2 in zip(result.invariants, result.invariants[1:]):
            assert d2 % d1 == 0


def test_snf_matches_gcd_of_minors(rng):
    for _ in range(150):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        matrix = [[rng.randint(-30, 30) for _ in range(cols)] for _ in range(rows)]
        assert smith_normal_form(matrix).invariants == gcd_of_minors_invariants(matrix)


def test_abelianization_rank_one():
    pres = Presentation.from_lists(2, [[1, 1, -2, -2, -2]])  # x^2 y^-3
    result = abelianization(pres)
    assert result.invariants == (1,)
    assert result.free_rank == 1


def test_abelianization_klein_bottle():
    pres = Presentation.from_lists(2, [[2, 1, -2, 1]])  # b a b^-1 a
    result = abelianization(pres)
    assert result.free_rank == 1
    assert result.torsion == (2,)
    assert result.group_description() == "Z + Z/2"


def test_abelianization_finite_cyclic():
    pres = Presentation.from_lists(1, [[1, 1, 1, 1, 1]])
    result = abelianization(pres)
    assert result.free_rank == 0
    assert result.torsion == (5,)


def test_witness_example():
    pres = Presentation.from_lists(2, [[1, 1, -2, -2, -2]])
    phi = z_quotient_witness(pres)
    assert phi == (3, 2)
    assert 2 * phi[0] - 3 * phi[1] == 0


def test_witness_none_for_torsion():
    pres = Presentation.from_lists(1, [[1, 1, 1, 1, 1]])
    assert has_infinite_cyclic_quotient(pres) is False
    assert z_quotient_witness(pres) is None


def test_witness_free_group():
    pres = Presentation.from_lists(2, [])
    assert has_infinite_cyclic_quotient(pres) is True
    assert z_quotient_witness(pres) == (1, 0)


def test_witness_annihilates_random_presentations(rng):
    for _ in range(100):
        gens = rng.randint(1, 4)
        relators = []
        for _ in range(rng.randint(0, 3)):
            relators.append(
                [rng.choice((1, -1)) * rng.randint(1, gens) for _ in range(rng.randint(1, 6))]
            )
        pres = Presentation.from_lists(gens, relators)
        phi = z_quotient_witness(pres)
        if phi is None:
            assert abelianization(pres).free_rank == 0
            continue
        assert any(phi)
        for row in pres.exponent_matrix():
            assert sum(r * p for r, p in zip(row, phi)) == 0


def test_rank_matches_minor_oracle(rng):
    for _ in range(100):
        gens = rng.randint(1, 4)
        relators = [
            [rng.choice((1, -1)) * rng.randint(1, gens) for _ in range(rng.randint(1, 5))]
            for _ in range(rng.randint(0, 3))
        ]
        pres = Presentation.from_lists(gens, relators)
        matrix = pres.exponent_matrix() or ((0,) * gens,)
        oracle_rank = gens - len([d for d in gcd_of_minors_invariants(matrix)])
        assert has_infinite_cyclic_quotient(pres) == (oracle_rank >= 1)


def test_presentation_validates_letters():
    with pytest.raises(ValueError):
        Presentation.from_lists(2, [[3]])
    with pytest.raises(ValueError):
        Presentation.from_lists(2, [[0]])


def test_kernel_lattice_basis():
    basis = kernel_lattice_basis((2, 3))
    assert len(basis) == 1
    (v,) = basis
    assert 2 * v[0] + 3 * v[1] == 0 and v != (0, 0)
    basis = kernel_lattice_basis((1, 0, 0))
    assert len(basis) == 2
    for v in basis:
        assert v[0] == 0
