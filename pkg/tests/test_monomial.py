import pytest

from seqcm.exceptions import IndexOutOfRangeError, NotMonomialError, RingMismatchError, ZeroModuleError
from seqcm.groebner import PresentedModule
from seqcm.monomial import (MonomialIdeal, MonomialPrime, ass_multigraded, associated_primes, attached_primes,
                            attached_prime_table, dimension_filtration, largest_small_submodule,
                            monomial_intersect, multidegrees, primary_decomposition, verify_filtration)

from conftest import make_ring, monomial_ideal
from oracles import hochster_attached_primes


def primes(*variable_sets):
    return frozenset(MonomialPrime(v) for v in variable_sets)


def test_monomial_prime():
    ring, (x, y, z) = make_ring("xyz")
    p = MonomialPrime((2, 0, 2))
    assert p.variables == (0, 2)
    assert p.dimension(3) == 1
    assert p.names(ring) == ["x", "z"]
    assert p.format(ring) == "(x,z)"
    assert p.polys(ring) == [x, z]
    assert MonomialPrime.maximal(3).contains(p)
    assert not p.contains(MonomialPrime.maximal(3))
    assert p.contains_poly(x * y + z ** 2)
    assert not p.contains_poly(x + y)
    assert MonomialPrime((0,)) < MonomialPrime((0, 1)) < MonomialPrime((1,))


def test_monomial_ideal_operations():
    ring, (x, y, z) = make_ring("xyz")
    ideal = monomial_ideal(ring, [x ** 2 * y, x * y ** 2, x ** 3 * y, ring.zero])
    assert ideal.generators == ((1, 2, 0), (2, 1, 0))
    assert ideal.radical().generators == ((1, 1, 0),)
    assert ideal.saturate_variable(0).generators == ((0, 1, 0),)
    assert ideal.colon_variable_power(1, 1).generators == ((1, 1, 0), (2, 0, 0))
    assert ideal.dimension == 2
    assert ideal.contains_monomial((2, 2, 5))
    assert not ideal.contains_monomial((1, 1, 3))
    assert monomial_ideal(ring, [x * y]).contains(ideal)
    assert (ideal + monomial_ideal(ring, [z])).generators == ((0, 0, 1), (1, 2, 0), (2, 1, 0))
    assert MonomialIdeal.unit(ring).is_unit
    assert MonomialIdeal.of_prime(ring, MonomialPrime((1, 2))).polys() == [y, z]
    assert not ideal.is_unit


def test_monomial_ideal_rejects_non_monomials():
    ring, (x, y, _) = make_ring("xyz")
    with pytest.raises(NotMonomialError):
        monomial_ideal(ring, [x + y])
    with pytest.raises(NotMonomialError):
        MonomialIdeal(ring, ((1, 0),))


def test_monomial_intersect():
    ring, (x, y, z) = make_ring("xyz")
    both = monomial_intersect([monomial_ideal(ring, [x]), monomial_ideal(ring, [y])])
    assert both.generators == ((1, 1, 0),)
    three = monomial_intersect([monomial_ideal(ring, [x]), monomial_ideal(ring, [y, z]),
                                monomial_ideal(ring, [x ** 2, y ** 2, z])])
    assert set(three.generators) == {(1, 0, 1), (2, 1, 0), (1, 2, 0)}
    with pytest.raises(ZeroModuleError):
        monomial_intersect([])
    other, _ = make_ring("ab")
    with pytest.raises(RingMismatchError):
        monomial_intersect([monomial_ideal(ring, [x]), MonomialIdeal.unit(other)])


def test_primary_decomposition_recovers_the_ideal(ideal_d):
    components = primary_decomposition(ideal_d)
    assert [prime.variables for _, prime in components] == [(0,), (1, 2), (0, 1, 2)]
    assert monomial_intersect([q for q, _ in components]) == ideal_d
    for q, prime in components:
        assert q.radical() == MonomialIdeal.of_prime(ideal_d.ring, prime)


def test_primary_decomposition_of_unit_ideal():
    ring, _ = make_ring("xy")
    with pytest.raises(ZeroModuleError):
        primary_decomposition(MonomialIdeal.unit(ring))
    with pytest.raises(ZeroModuleError):
        dimension_filtration(MonomialIdeal.unit(ring))


@pytest.mark.parametrize("name,expected", [
    ("c", primes((0, 1), (2, 3))),
    ("d", primes((0,), (1, 2), (0, 1, 2))),
    ("e", primes((0,), (1,), (0, 1))),
    ("g", primes((0, 1), (2, 3))),
])
def test_associated_primes(all_ideals, name, expected):
    ideal = all_ideals[name]
    assert associated_primes(ideal) == expected
    assert ass_multigraded(ideal.quotient_module()) == expected


@pytest.mark.parametrize("name,table", [
    ("c", (primes(), primes(), primes((0, 1, 2, 3)), primes((0, 1), (2, 3)))),
    ("d", (primes((0, 1, 2)), primes((1, 2)), primes((0,)))),
    ("e", (primes(), primes(), primes((0, 1)), primes((0,), (1,)))),
    ("g", (primes(), primes((0, 1, 2, 3)), primes((0, 1), (2, 3)))),
])
def test_attached_prime_tables(all_ideals, name, table):
    assert attached_prime_table(all_ideals[name].quotient_module()) == table


@pytest.mark.parametrize("name", ["c", "g"])
def test_attached_primes_match_hochster(all_ideals, name):
    ideal = all_ideals[name]
    m = ideal.quotient_module()
    for i in range(m.dimension + 1):
        assert attached_primes(m, i) == hochster_attached_primes(ideal, i)


def test_attached_primes_index_out_of_range(ideal_g):
    with pytest.raises(IndexOutOfRangeError):
        attached_primes(ideal_g.quotient_module(), 3)


def test_dimension_filtration(ideal_e):
    filtration = dimension_filtration(ideal_e)
    assert filtration.dimensions == (3, 2, -1)
    assert filtration.chain[0].is_unit
    assert filtration.chain[1].generators == ((1, 1, 0, 0),)
    assert filtration.chain[2] == ideal_e
    assert filtration.length == 2
    assert [q.dimension for q in filtration.quotients()] == [3, 2]
    assert dimension_filtration(ideal_e) is filtration


def test_filtration_keeps_the_finite_length_part(ideal_d):
    filtration = dimension_filtration(ideal_d)
    assert filtration.dimensions == (2, 1, 0)
    assert [q.dimension for q in filtration.quotients()] == [2, 1]
    assert filtration.submodule(2).dimension == 0


@pytest.mark.parametrize("name", ["c", "d", "e", "g"])
def test_filtration_ass_identities(all_ideals, name):
    verify_filtration(all_ideals[name])


def test_largest_small_submodule(ideal_e):
    assert largest_small_submodule(ideal_e, 2).generators == ((1, 1, 0, 0),)
    assert largest_small_submodule(ideal_e, 3).is_unit
    assert largest_small_submodule(ideal_e, 1) == ideal_e


def test_multidegrees():
    ring, (x, y) = make_ring("xy")
    assert multidegrees(PresentedModule.cyclic(ring, [x * y, y ** 2])) == ((0, 0),)
    not_monomial = PresentedModule.cyclic(ring, [x + y])
    with pytest.raises(NotMonomialError):
        multidegrees(not_monomial)
    with pytest.raises(NotMonomialError):
        ass_multigraded(not_monomial)
