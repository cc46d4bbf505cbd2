import itertools
import random

import pytest
from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_div, monomial_lcm

from seqcm.exceptions import AmbientMismatchError, HomogeneityError, InfiniteLengthError
from seqcm.groebner import (ModuleMap, PresentedModule, Submodule, annihilator, buchberger, colon,
                            hilbert_function, hilbert_series, ideal_product, intersect, kernel_of_map,
                            length_or_none, minimal_presentation, module_dimension, module_length,
                            monomial_quotient_dimension, normal_form, quotient, saturation, syzygies)
from seqcm.kernel import FreeElement, FreeModule, MonomialOrder, ideal_free_module

from conftest import make_ring
from oracles import dense_contains, dense_hilbert_function


@pytest.fixture
def plane():
    return make_ring("xy")


@pytest.fixture
def space():
    return make_ring("xyz")


def as_polys(gb):
    return {e.coordinate(0) for e in gb.elements}


def test_groebner_basis_of_small_ideal(plane):
    ring, (x, y) = plane
    gb = buchberger(Submodule.ideal(ring, [x ** 2 - y ** 2, x * y]))
    assert as_polys(gb) == {x ** 2 - y ** 2, x * y, y ** 3}
    assert gb.minimal_generators == (0, 1)
    assert gb.initial_monomials() == {0: ((1, 1), (2, 0), (0, 3))}


def test_normal_form(plane):
    ring, (x, y) = plane
    gb = buchberger(Submodule.ideal(ring, [x ** 2 - y ** 2, x * y]))
    free = ideal_free_module(ring)
    assert normal_form(free.element([x ** 2 + y ** 3]), gb).coordinate(0) == y ** 2
    assert normal_form(free.element([x ** 3]), gb).is_zero
    with pytest.raises(AmbientMismatchError):
        normal_form(FreeModule(ring, (0, 0)).basis(0), gb)


def test_lex_basis_agrees_on_membership(plane):
    ring, (x, y) = plane
    sub = Submodule.ideal(ring, [x ** 2 - y ** 2, x * y])
    gb = buchberger(sub, order=MonomialOrder("lex"))
    free = ideal_free_module(ring)
    assert normal_form(free.element([y ** 3]), gb).is_zero
    assert not normal_form(free.element([y ** 2]), gb).is_zero


def test_membership_matches_dense_rank(space):
    ring, (x, y, z) = space
    polys = [x * y - z ** 2, y ** 2 - x * z]
    sub = Submodule.ideal(ring, polys)
    free = ideal_free_module(ring)
    for f in [x * y ** 2 - y * z ** 2, y ** 3 - x * y * z, x ** 3, z ** 3 - x * y * z]:
        assert sub.contains(free.element([f])) == dense_contains(ring, polys, f)


def test_length_and_hilbert_function(plane):
    ring, (x, y) = plane
    m = PresentedModule.cyclic(ring, [x ** 2, x * y, y ** 3])
    assert module_length(m) == 4
    assert [hilbert_function(m, k) for k in range(4)] == [1, 2, 1, 0]
    assert module_dimension(m) == 0


def test_hypersurface_dimension_and_multiplicity(space):
    ring, (x, y, z) = space
    m = PresentedModule.cyclic(ring, [x * y])
    series = hilbert_series(m)
    assert m.dimension == 2
    assert series.dimension == 2
    assert series.multiplicity == 2
    assert module_dimension(m, method="hilbert") == 2
    with pytest.raises(InfiniteLengthError):
        module_length(m)
    assert length_or_none(m) is None


def test_zero_module(space):
    ring, (x, _, _) = space
    m = PresentedModule.cyclic(ring, [ring.one])
    assert m.is_zero
    assert m.dimension == -1
    assert module_length(m) == 0
    assert monomial_quotient_dimension([(0, 0, 0)], 3) == -1
    assert annihilator(m).is_everything()
    assert not PresentedModule.cyclic(ring, [x]).is_zero


def test_annihilator_of_direct_sum(plane):
    ring, (x, y) = plane
    free = FreeModule(ring, (0, 0))
    m = PresentedModule(free, [free.element([x, 0]), free.element([0, y])])
    assert annihilator(m).same_as(Submodule.ideal(ring, [x * y]))


def test_colon_and_saturation(space):
    ring, (x, y, z) = space
    sub = Submodule.ideal(ring, [x ** 2 * y, x * y ** 2])
    assert colon(sub, x * y).same_as(Submodule.ideal(ring, [x, y]))
    assert colon(sub, [x, y]).same_as(Submodule.ideal(ring, [x * y]))
    assert colon(sub, ring.zero).is_everything()
    assert saturation(Submodule.ideal(ring, [x ** 2, x * y, y ** 2]), x).is_everything()
    assert saturation(sub, x).same_as(Submodule.ideal(ring, [y]))
    with pytest.raises(HomogeneityError):
        colon(sub, x + z ** 2)


def test_intersect_and_product(space):
    ring, (x, y, z) = space
    a, b = Submodule.ideal(ring, [x]), Submodule.ideal(ring, [y])
    assert intersect(a, b).same_as(Submodule.ideal(ring, [x * y]))
    assert intersect(a, Submodule.ideal(ring, [])).is_zero()
    prod = ideal_product(Submodule.ideal(ring, [x, y]), Submodule.ideal(ring, [z]))
    assert prod.same_as(Submodule.ideal(ring, [x * z, y * z]))
    with pytest.raises(AmbientMismatchError):
        intersect(a, Submodule(FreeModule(ring, (0, 0)), ()))


def test_syzygies_map_to_zero(plane):
    ring, (x, y) = plane
    gb = buchberger(Submodule.ideal(ring, [x ** 2 - y ** 2, x * y]))
    syz = syzygies(gb)
    phi = ModuleMap(syz.free, gb.free, gb.elements)
    assert syz.nonzero_generators
    assert all(phi.apply(s).is_zero for s in syz.generators)


def test_kernel_of_map(plane):
    ring, (x, y) = plane
    target = ideal_free_module(ring)
    source = FreeModule(ring, (1, 1))
    phi = ModuleMap(source, target, (target.element([x]), target.element([y])))
    kernel = kernel_of_map(phi)
    assert len(kernel.generators) == 1
    assert kernel.same_as(Submodule(source, (source.element([y, -x]),)))


def test_module_map_transpose_and_compose(plane):
    ring, (x, y) = plane
    target = ideal_free_module(ring)
    source = FreeModule(ring, (1, 1))
    phi = ModuleMap(source, target, (target.element([x]), target.element([y])))
    dual = phi.transpose()
    assert dual.source.degrees == (0,)
    assert dual.target.degrees == (-1, -1)
    assert dual.columns[0].coordinates == (x, y)
    back = FreeModule(ring, (2,))
    psi = ModuleMap(back, source, (source.element([y, -x]),))
    assert phi.compose(psi).is_zero
    with pytest.raises(HomogeneityError):
        ModuleMap(FreeModule(ring, (2,)), target, (target.element([x]),))


def test_minimal_presentation_prunes_units(plane):
    ring, (x, y) = plane
    free = FreeModule(ring, (1, 0))
    e0, e1 = free.basis(0), free.basis(1)
    m = PresentedModule(free, [e0 - e1.scale(x), e0.scale(y)])
    pruned = minimal_presentation(m)
    assert pruned.free.degrees == (0,)
    assert len(pruned.relations) == 1
    assert pruned.relations[0].coordinate(0) == x * y
    assert pruned.dimension == 1
    assert minimal_presentation(pruned) is pruned


def test_quotient_is_memoized(space):
    ring, (x, y, z) = space
    m = PresentedModule.cyclic(ring, [x * y])
    first = quotient(m, [z])
    assert quotient(m, [z]) is first
    assert first.dimension == 1


def test_inhomogeneous_generators_are_rejected(space):
    ring, (x, y, _) = space
    with pytest.raises(HomogeneityError):
        Submodule.ideal(ring, [x + y ** 2])
    free = ideal_free_module(ring)
    with pytest.raises(HomogeneityError):
        PresentedModule(free, [FreeElement.from_coordinates(free, [x + y ** 2])])


@pytest.mark.parametrize("name", ["c", "d", "e", "g"])
def test_hilbert_function_matches_dense_count(all_ideals, name):
    ideal = all_ideals[name]
    m = ideal.quotient_module()
    for k in range(6):
        assert hilbert_function(m, k) == dense_hilbert_function(ideal.ring, ideal.polys(), k)


@pytest.mark.parametrize("name", ["c", "d", "e", "g"])
def test_dimension_methods_agree(all_ideals, name):
    m = all_ideals[name].quotient_module()
    assert module_dimension(m) == module_dimension(m, method="hilbert") == all_ideals[name].dimension


def random_homogeneous_ideal(rng, ring, max_generators=3):
    polys = []
    for _ in range(rng.randint(1, max_generators)):
        d = rng.randint(1, 3)
        coeffs = {}
        for _ in range(rng.randint(1, 3)):
            exps = [0] * ring.n
            for _ in range(d):
                exps[rng.randrange(ring.n)] += 1
            coeffs[tuple(exps)] = rng.choice([-2, -1, 1, 2, 3])
        polys.append(ring.from_terms(coeffs))
    return polys


def s_polynomial(f, g, lt_f, lt_g, ring):
    lcm = monomial_lcm(lt_f, lt_g)
    return (f * ring.monomial(monomial_div(lcm, lt_f)) * (QQ.one / f[lt_f])
            - g * ring.monomial(monomial_div(lcm, lt_g)) * (QQ.one / g[lt_g]))


def test_s_pairs_of_random_bases_reduce_to_zero(space):
    ring, _ = space
    free = ideal_free_module(ring)
    rng = random.Random(21)
    for _ in range(15):
        gb = buchberger(Submodule.ideal(ring, random_homogeneous_ideal(rng, ring)))
        polys = [e.coordinate(0) for e in gb.elements]
        lts = [m for _, m in gb.leading_terms]
        for i, j in itertools.combinations(range(len(polys)), 2):
            s = s_polynomial(polys[i], polys[j], lts[i], lts[j], ring)
            assert normal_form(free.element([s]), gb).is_zero


def test_random_ideals_have_the_dimension_of_their_initial_ideal(space):
    ring, _ = space
    rng = random.Random(22)
    for _ in range(15):
        polys = random_homogeneous_ideal(rng, ring)
        initial = buchberger(Submodule.ideal(ring, polys)).initial_monomials().get(0, ())
        m = PresentedModule.cyclic(ring, polys)
        initial_module = PresentedModule.cyclic(ring, [ring.monomial(e) for e in initial])
        expected = monomial_quotient_dimension(initial, ring.n)
        assert module_dimension(m, method="hilbert") == expected
        assert module_dimension(initial_module, method="hilbert") == expected
