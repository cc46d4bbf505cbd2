import pytest

from seqcm.config import DEFAULT_SETTINGS
from seqcm.exceptions import (HomogeneityError, IndexOutOfRangeError, NotSystemOfParametersError,
                              SearchExhausted, SeqcmError, ZeroModuleError)
from seqcm.groebner import PresentedModule, Submodule
from seqcm.kernel import degree
from seqcm.monomial import associated_primes, attached_prime_table
from seqcm.sequences import (LinearFormSampler, SequenceKind, annihilator_product, check_sequence,
                             classify_element, find_p_standard_sop, find_sequence,
                             fit_length_polynomial, has_maximal_associated_prime, i_function, is_p_standard_sop,
                             is_part_of_sop, is_sop, length_function, multiplicity, sequential_element_exists,
                             verify_length_polynomial)

from conftest import make_ring


def gens_of(ideal):
    return ideal.ring.gens


@pytest.mark.parametrize("name,element,expected", [
    ("c", lambda x, y, z, t, w: x + z, (True, True, True, False, False)),
    ("c", lambda x, y, z, t, w: w, (True, True, True, True, True)),
    ("d", lambda x, y, z: x + z, (False, True, True, True, True)),
    ("d", lambda x, y, z: y, (False, False, True, False, True)),
    ("e", lambda x, y, z, t: x, (False, False, False, False, False)),
])
def test_classify_element(all_ideals, name, element, expected):
    ideal = all_ideals[name]
    result = classify_element(ideal.quotient_module(), element(*gens_of(ideal)))
    verdicts = (result.is_regular, result.is_f_element, result.is_generalized_regular,
                result.is_sequential, result.is_sequential_f)
    assert verdicts == expected
    assert result.hierarchy_holds()
    assert result.verdict(SequenceKind.SEQUENTIAL) == expected[3]


def test_failures_carry_evidence(ideal_e):
    x = gens_of(ideal_e)[0]
    result = classify_element(ideal_e.quotient_module(), x)
    assert result.witnesses["regular"] == "(0 :_M f) has dimension 3"
    assert result.witnesses["sequential"] == "f is a zero divisor on K^2"


def sampled_forms(ring, count):
    sampler = LinearFormSampler(ring, DEFAULT_SETTINGS, "classification-test")
    return [sampler.sample(index) for index in range(count)]


@pytest.mark.slow
@pytest.mark.parametrize("name", ["c", "d", "e", "g"])
def test_classification_matches_prime_avoidance(all_ideals, name):
    ideal = all_ideals[name]
    m = ideal.quotient_module()
    n = ideal.n
    ass = associated_primes(ideal)
    table = attached_prime_table(m)

    def avoids(f, primes):
        return not any(p.contains_poly(f) for p in primes)

    for f in sampled_forms(ideal.ring, 100):
        result = classify_element(m, f)
        assert result.hierarchy_holds()
        assert result.is_regular == avoids(f, ass)
        assert result.is_f_element == avoids(f, [p for p in ass if p.dimension(n) > 0])
        assert result.is_generalized_regular == avoids(f, [p for p in ass if p.dimension(n) > 1])
        assert result.is_sequential == all(avoids(f, table[i]) for i in range(1, len(table)))
        assert result.is_sequential_f == all(avoids(f, [p for p in table[i] if p.dimension(n) > 0])
                                             for i in range(2, len(table)))


def test_classify_rejects_bad_elements(ideal_e):
    x, y, _, _ = gens_of(ideal_e)
    m = ideal_e.quotient_module()
    with pytest.raises(HomogeneityError):
        classify_element(m, x + y ** 2)
    with pytest.raises(HomogeneityError):
        classify_element(m, ideal_e.ring.one)
    with pytest.raises(HomogeneityError):
        check_sequence(m, [x, ideal_e.ring.zero], SequenceKind.REGULAR)


def test_zero_module_is_rejected():
    ring, (x, _) = make_ring("xy")
    zero = PresentedModule.cyclic(ring, [ring.one])
    with pytest.raises(ZeroModuleError):
        classify_element(zero, x)
    with pytest.raises(ZeroModuleError):
        find_sequence(zero, SequenceKind.REGULAR, 1)


def test_check_sequence(ideal_e):
    x, y, z, t = gens_of(ideal_e)
    m = ideal_e.quotient_module()
    report = check_sequence(m, [z, t], SequenceKind.REGULAR)
    assert report.verdict
    assert report.first_failure is None
    assert len(report.trail) == 3
    assert report.trail[2].dimension == 1

    failed = check_sequence(m, [z, x], SequenceKind.REGULAR)
    assert not failed.verdict
    assert failed.first_failure == (1, "(0 :_M f) has dimension 2")

    assert check_sequence(m, [z, t, x + y], SequenceKind.SEQUENTIAL).verdict


def test_repeated_element_is_not_regular():
    ring, (x, y) = make_ring("xy")
    report = check_sequence(PresentedModule.cyclic(ring, [x]), [y, y], SequenceKind.REGULAR)
    assert not report.verdict
    assert report.first_failure == (1, "(0 :_M f) has dimension 0")


def test_systems_of_parameters(ideal_e, ideal_g):
    x, y, z, t = gens_of(ideal_g)
    g = ideal_g.quotient_module()
    assert is_sop(g, [x - z, y - t])
    assert not is_sop(g, [x, y])
    assert not is_sop(g, [x - z])
    e = ideal_e.quotient_module()
    assert not is_sop(e, [z, t])
    assert is_part_of_sop(e, [z, t])
    assert not is_part_of_sop(e, [x, y])
    assert is_part_of_sop(e, [])


def test_length_and_multiplicity_of_skew_lines(ideal_g):
    x, y, z, t = gens_of(ideal_g)
    m = ideal_g.quotient_module()
    sop = [x - z, y - t]
    assert multiplicity(m, sop) == 2
    assert length_function(m, sop, (1, 1)) == 3
    assert i_function(m, sop, (1, 1)) == 1
    assert i_function(m, sop, (2, 3)) == 1
    assert fit_length_polynomial(m, sop) == (1, 0, 2)
    assert verify_length_polynomial(m, sop) == []
    with pytest.raises(IndexOutOfRangeError, match="do not match"):
        length_function(m, sop, (1,))
    with pytest.raises(NotSystemOfParametersError):
        multiplicity(m, [x - z])


def test_find_sequence_on_a_free_module():
    ring, (x, y) = make_ring("xy")
    m = PresentedModule.free_of_rank(ring)
    assert find_sequence(m, SequenceKind.REGULAR, 2) == (x, y)
    assert find_sequence(m, SequenceKind.REGULAR, 0) == ()


def test_find_sequence_results_are_verified(ideal_e):
    m = ideal_e.quotient_module()
    found = find_sequence(m, SequenceKind.SEQUENTIAL, 3)
    assert found is not None
    assert check_sequence(m, found, SequenceKind.SEQUENTIAL).verdict
    assert is_sop(m, found)


def test_find_sequence_limits(ideal_c, ideal_g):
    m = ideal_c.quotient_module()
    with pytest.raises(IndexOutOfRangeError):
        find_sequence(m, SequenceKind.REGULAR, 4)
    tight = DEFAULT_SETTINGS.with_overrides(retry_budget=1)
    with pytest.raises(SearchExhausted):
        find_sequence(m, SequenceKind.SEQUENTIAL, 3, tight, raise_on_failure=True)
    assert find_sequence(m, SequenceKind.SEQUENTIAL, 3, tight) is None
    assert find_sequence(ideal_g.quotient_module(), SequenceKind.SEQUENTIAL, 2) is None


def test_maximal_ideal_detection(ideal_d, ideal_e, ideal_g):
    assert has_maximal_associated_prime(ideal_d.quotient_module())
    assert not has_maximal_associated_prime(ideal_e.quotient_module())
    assert not sequential_element_exists(ideal_g.quotient_module())
    assert sequential_element_exists(ideal_e.quotient_module())


def test_sequence_kind_parse():
    assert SequenceKind.parse("f-element") is SequenceKind.F_ELEMENT
    assert SequenceKind.parse("sequential-f") is SequenceKind.SEQUENTIAL_F
    with pytest.raises(SeqcmError, match="unknown sequence kind"):
        SequenceKind.parse("regular-ish")


def test_sampler_is_deterministic(ideal_g):
    ring = ideal_g.ring
    first = LinearFormSampler(ring, DEFAULT_SETTINGS, "determinism")
    second = LinearFormSampler(ring, DEFAULT_SETTINGS, "determinism")
    forms = [first.sample(i) for i in range(10)]
    assert [second.sample(9), second.sample(3)] == [forms[9], forms[3]]
    assert all(f and degree(f) == 1 for f in forms)
    assert all(abs(int(c)) <= DEFAULT_SETTINGS.coefficient_bound for f in forms for c in f.values())
    sop = first.sample_sop(ideal_g.quotient_module(), 0)
    assert sop is not None
    assert is_sop(ideal_g.quotient_module(), sop)


def test_p_standard_systems(ideal_e):
    x, y, z, t = gens_of(ideal_e)
    m = ideal_e.quotient_module()
    assert annihilator_product(m).same_as(Submodule.ideal(ideal_e.ring, [x, y]))
    assert is_p_standard_sop(m, [z, t, x + y])
    assert not is_p_standard_sop(m, [x + y, t, z])
    with pytest.raises(NotSystemOfParametersError):
        is_p_standard_sop(m, [z, t])


def test_find_p_standard_sop(ideal_e):
    m = ideal_e.quotient_module()
    found = find_p_standard_sop(m)
    assert found is not None
    assert len(found) == 3
    assert is_p_standard_sop(m, found)
    assert verify_length_polynomial(m, found) == []
