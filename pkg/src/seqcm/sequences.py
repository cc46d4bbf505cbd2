"""
Element and sequence classification (regular, filter regular, generalized
regular, sequential, sequential filter regular), systems of parameters,
seeded witness search, p-standard systems of parameters and the
length/multiplicity functions built on them.
"""
import enum
import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from seqcm.config import DEFAULT_SETTINGS, SearchSettings
from seqcm.exceptions import (HomogeneityError, IndexOutOfRangeError, NotSystemOfParametersError,
                              SearchExhausted, SeqcmError, ZeroModuleError)
from seqcm.groebner import (PresentedModule, Submodule, annihilator, colon, ideal_product,
                            kernel_of_multiplication, module_length, quotient)
from seqcm.homology import ext_battery
from seqcm.kernel import FreeElement, degree, format_polynomial, ideal_free_module

logger = logging.getLogger(__name__)


class SequenceKind(enum.Enum):
    REGULAR = "regular"
    F_ELEMENT = "f-element"
    GENERALIZED_REGULAR = "generalized-regular"
    SEQUENTIAL = "sequential"
    SEQUENTIAL_F = "sequential-f"

    @classmethod
    def parse(cls, text: str) -> "SequenceKind":
        try:
            return cls(text)
        except ValueError as e:
            raise SeqcmError(f"unknown sequence kind '{text}'", e) from e


@dataclass(frozen=True)
class ElementClassification:
    element: PolyElement
    is_regular: bool
    is_f_element: bool
    is_generalized_regular: bool
    is_sequential: bool
    is_sequential_f: bool
    witnesses: Dict[str, str] = field(default_factory=dict)

    def verdict(self, kind: SequenceKind) -> bool:
        return {
            SequenceKind.REGULAR: self.is_regular,
            SequenceKind.F_ELEMENT: self.is_f_element,
            SequenceKind.GENERALIZED_REGULAR: self.is_generalized_regular,
            SequenceKind.SEQUENTIAL: self.is_sequential,
            SequenceKind.SEQUENTIAL_F: self.is_sequential_f,
        }[kind]

    def hierarchy_holds(self) -> bool:
        """ regular => f-element => generalized regular; sequential => f-element; sequential-f => generalized regular. """
        return ((not self.is_regular or self.is_f_element)
                and (not self.is_f_element or self.is_generalized_regular)
                and (not self.is_sequential or self.is_f_element)
                and (not self.is_sequential_f or self.is_generalized_regular))


@dataclass(frozen=True, eq=False)
class SequenceReport:
    kind: SequenceKind
    elements: Tuple[PolyElement, ...]
    verdict: bool
    first_failure: Optional[Tuple[int, str]]
    trail: Tuple[PresentedModule, ...]


def _check_element(m: PresentedModule, f: PolyElement) -> None:
    m.ring.check(f)
    d = degree(f)
    if d is None:
        raise HomogeneityError(f"{format_polynomial(f)} is not a nonzero homogeneous element")
    if d == 0:
        raise HomogeneityError(f"{format_polynomial(f)} has degree 0")


def _test(m: PresentedModule, f: PolyElement, kind: SequenceKind) -> Tuple[bool, Optional[str]]:
    """ One classification test on a nonzero module, with the failure evidence. """
    if kind in (SequenceKind.REGULAR, SequenceKind.F_ELEMENT, SequenceKind.GENERALIZED_REGULAR):
        kernel = kernel_of_multiplication(m, f)
        if kind == SequenceKind.REGULAR:
            ok = kernel.is_zero
        else:
            ok = kernel.dimension <= (0 if kind == SequenceKind.F_ELEMENT else 1)
        return ok, None if ok else f"(0 :_M f) has dimension {kernel.dimension}"
    battery = ext_battery(m)
    first = 1 if kind == SequenceKind.SEQUENTIAL else 2
    for i in range(first, battery.dimension + 1):
        k = battery[i]
        if k.is_zero:
            continue
        kernel = kernel_of_multiplication(k, f)
        if kind == SequenceKind.SEQUENTIAL and not kernel.is_zero:
            return False, f"f is a zero divisor on K^{i}"
        if kind == SequenceKind.SEQUENTIAL_F and kernel.dimension > 0:
            return False, f"(0 :_K^{i} f) has dimension {kernel.dimension}"
    return True, None


def classify_element(m: PresentedModule, f: PolyElement) -> ElementClassification:
    _check_element(m, f)
    if m.is_zero:
        raise ZeroModuleError("cannot classify elements on the zero module")
    verdicts, witnesses = {}, {}
    for kind in SequenceKind:
        ok, reason = _test(m, f, kind)
        verdicts[kind] = ok
        if reason:
            witnesses[kind.value] = reason
    result = ElementClassification(f, verdicts[SequenceKind.REGULAR], verdicts[SequenceKind.F_ELEMENT],
                                   verdicts[SequenceKind.GENERALIZED_REGULAR], verdicts[SequenceKind.SEQUENTIAL],
                                   verdicts[SequenceKind.SEQUENTIAL_F], witnesses)
    logger.debug(f"classified {format_polynomial(f)}: "
                 f"{[k.value for k in SequenceKind if verdicts[k]]}")
    return result


def check_sequence(m: PresentedModule, fs: Sequence[PolyElement], kind: SequenceKind) -> SequenceReport:
    """ Classify f_{i+1} on M/(f_1..f_i)M for each i; steps on a zero quotient pass vacuously. """
    for f in fs:
        _check_element(m, f)
    current = m
    trail = [m]
    for idx, f in enumerate(fs):
        if not current.is_zero:
            ok, reason = _test(current, f, kind)
            if not ok:
                return SequenceReport(kind, tuple(fs), False, (idx, reason), tuple(trail))
        current = quotient(current, [f])
        trail.append(current)
    return SequenceReport(kind, tuple(fs), True, None, tuple(trail))


def is_sop(m: PresentedModule, fs: Sequence[PolyElement]) -> bool:
    for f in fs:
        _check_element(m, f)
    return len(fs) == m.dimension and quotient(m, fs).dimension <= 0


def is_part_of_sop(m: PresentedModule, fs: Sequence[PolyElement]) -> bool:
    for f in fs:
        _check_element(m, f)
    if len(fs) > m.dimension:
        return False
    return quotient(m, fs).dimension == m.dimension - len(fs) if fs else True


def _is_parameter(m: PresentedModule, f: PolyElement) -> Tuple[bool, PresentedModule]:
    q = quotient(m, [f])
    return q.dimension == m.dimension - 1, q


class LinearFormSampler:
    """
    Sparse random linear forms with small integer coefficients. Each draw is
    seeded from (seed, purpose, index) so results do not depend on call order.
    With ``primes`` given, half of the draws are supported on the variables of
    one of them.
    """

    def __init__(self, ring, settings: SearchSettings = DEFAULT_SETTINGS, purpose: str = "sample",
                 primes: Sequence = ()):
        self.ring = ring
        self.settings = settings
        self.purpose = purpose
        self.primes = [p for p in primes if p.variables]
        bound = settings.coefficient_bound
        self.coefficients = [c for c in range(-bound, bound + 1) if c]

    def rng(self, index) -> random.Random:
        return random.Random(f"{self.settings.seed}:{self.purpose}:{index}")

    def draw(self, rng: random.Random) -> PolyElement:
        support = list(range(self.ring.n))
        if self.primes and rng.random() < 0.5:
            support = list(rng.choice(self.primes).variables)
        coeffs = {j: (0 if rng.random() < self.settings.sparsity else rng.choice(self.coefficients))
                  for j in support}
        if not any(coeffs.values()):
            coeffs[rng.choice(support)] = rng.choice(self.coefficients)
        return sum((c * self.ring.gens[j] for j, c in coeffs.items() if c), self.ring.zero)

    def sample(self, index) -> PolyElement:
        return self.draw(self.rng(index))

    def sample_sop(self, m: PresentedModule, index, budget: int = 50) -> Optional[Tuple[PolyElement, ...]]:
        """ A random s.o.p. of M, built one parameter at a time. """
        rng = self.rng(index)
        current, chain = m, []
        for _ in range(budget):
            if len(chain) == m.dimension:
                return tuple(chain)
            f = self.draw(rng)
            ok, q = _is_parameter(current, f)
            if ok:
                chain.append(f)
                current = q
        return tuple(chain) if len(chain) == m.dimension else None


def has_maximal_associated_prime(m: PresentedModule) -> bool:
    """ H^0_m(M) != 0, i.e. some element is killed by every variable. """
    if m.is_zero:
        return False
    relations = m.relation_module
    return not relations.contains_submodule(colon(relations, list(m.ring.gens)))


def sequential_element_exists(m: PresentedModule) -> bool:
    """ False when m is attached to some H^j, j >= 1: every element of m then kills part of K^j. """
    battery = ext_battery(m)
    return not any(has_maximal_associated_prime(battery[i]) for i in range(1, battery.dimension + 1))


def find_sequence(m: PresentedModule, kind: SequenceKind, length: int,
                  settings: SearchSettings = DEFAULT_SETTINGS,
                  raise_on_failure: bool = False) -> Optional[Tuple[PolyElement, ...]]:
    """
    Search a sequence of linear forms of the given kind whose prefixes are all
    parameters. Variables in declared and reversed order are tried first, then
    seeded random chains until the evaluation budget is spent. Every answer is
    re-verified with check_sequence.
    """
    if m.is_zero:
        raise ZeroModuleError("cannot search sequences on the zero module")
    if not 0 <= length <= m.dimension:
        raise IndexOutOfRangeError(f"sequence length {length} outside 0..{m.dimension}")
    if length == 0:
        return ()

    def give_up(reason):
        logger.warning(f"find-seq {kind.value}: {reason}")
        if raise_on_failure:
            raise SearchExhausted(reason)
        return None

    if kind == SequenceKind.SEQUENTIAL and m.dimension >= 1 and not sequential_element_exists(m):
        return give_up("no sequential element exists")

    def accept(chain):
        return check_sequence(m, chain, kind).verdict and is_part_of_sop(m, chain)

    gens = list(m.ring.gens)
    evaluations = 0
    for attempt in (tuple(gens[:length]), tuple(reversed(gens))[:length]):
        evaluations += 1
        if accept(attempt):
            logger.debug(f"find-seq {kind.value}: structured attempt accepted")
            return attempt

    sampler = LinearFormSampler(m.ring, settings, f"find-{kind.value}")
    chain_index = 0
    while evaluations < settings.retry_budget:
        rng = sampler.rng(chain_index)
        chain_index += 1
        current, chain = m, []
        while len(chain) < length and evaluations < settings.retry_budget:
            f = sampler.draw(rng)
            evaluations += 1
            ok, q = _is_parameter(current, f)
            if not ok or not _test(current, f, kind)[0]:
                logger.debug(f"find-seq {kind.value}: rejected {format_polynomial(f)} at step {len(chain)}")
                break
            chain.append(f)
            current = q
        if len(chain) == length and accept(tuple(chain)):
            logger.debug(f"find-seq {kind.value}: witness after {evaluations} evaluations")
            return tuple(chain)
    return give_up(f"budget of {settings.retry_budget} evaluations exhausted")


def annihilator_product(m: PresentedModule) -> Submodule:
    """ a(M): the product of Ann K^j(M) over j < dim M. """
    ring = m.ring
    unit = Submodule.ideal(ring, [ring.one])
    if m.is_zero:
        return unit
    battery = ext_battery(m)
    factors = [annihilator(battery[j]) for j in range(battery.dimension)]
    return reduce(lambda a, b: ideal_product(a, b).minimalized(), factors, unit)


def _contains_poly(ideal: Submodule, f: PolyElement) -> bool:
    return ideal.contains(FreeElement.from_coordinates(ideal_free_module(ideal.ring), [f]))


def is_p_standard_sop(m: PresentedModule, fs: Sequence[PolyElement]) -> bool:
    if not is_sop(m, fs):
        raise NotSystemOfParametersError("p-standard checks need a system of parameters")
    for k in reversed(range(len(fs))):
        tail = quotient(m, fs[k + 1:]) if k + 1 < len(fs) else m
        if not _contains_poly(annihilator_product(tail), fs[k]):
            logger.debug(f"p-standard: element {k + 1} is not in a(M/(later elements))")
            return False
    return True


def find_p_standard_sop(m: PresentedModule,
                        settings: SearchSettings = DEFAULT_SETTINGS) -> Optional[Tuple[PolyElement, ...]]:
    """
    Build an s.o.p. from the last element backwards, drawing each element from
    a(N) for the current quotient N: its lowest-degree generators first, then
    random integer combinations of them (random linear forms when a(N) = S).
    """
    ring = m.ring
    sampler = LinearFormSampler(ring, settings, "p-standard")
    current, chosen = m, []
    for step in range(m.dimension):
        ideal = annihilator_product(current)
        polys = ideal.polys()
        low = min(degree(f) for f in polys)
        if low == 0:
            candidates = list(reversed(ring.gens))
            draw = sampler.draw
        else:
            lowest = [f for f in polys if degree(f) == low]
            candidates = list(lowest)

            def draw(rng, lowest=lowest):
                f = ring.zero
                while not f:
                    f = sum((rng.choice(sampler.coefficients + [0]) * g for g in lowest), ring.zero)
                return f
        rng = sampler.rng(step)
        found = None
        for tries in range(settings.retry_budget):
            f = candidates[tries] if tries < len(candidates) else draw(rng)
            ok, q = _is_parameter(current, f)
            if ok:
                found = f
                current = q
                break
        if found is None:
            logger.warning(f"p-standard search: no parameter found in a(N) at step {step}")
            return None
        chosen.append(found)
    result = tuple(reversed(chosen))
    return result if is_p_standard_sop(m, result) else None


def _euler_characteristic(n: PresentedModule, fs: Sequence[PolyElement]) -> int:
    if n.is_zero:
        return 0
    if not fs:
        return module_length(n)
    f, rest = fs[0], fs[1:]
    return _euler_characteristic(quotient(n, [f]), rest) - \
        _euler_characteristic(kernel_of_multiplication(n, f), rest)


def multiplicity(m: PresentedModule, fs: Sequence[PolyElement]) -> int:
    """ e(fs; M) as the Koszul Euler characteristic. """
    if not is_sop(m, fs):
        raise NotSystemOfParametersError("multiplicity needs a system of parameters")
    return _euler_characteristic(m, list(fs))


def length_function(m: PresentedModule, fs: Sequence[PolyElement], ns: Sequence[int]) -> int:
    """ length of M/(f_1^n_1, ..., f_d^n_d)M. """
    if len(ns) != len(fs) or any(k < 1 for k in ns):
        raise IndexOutOfRangeError(f"exponents {tuple(ns)} do not match {len(fs)} elements")
    return module_length(quotient(m, [f ** k for f, k in zip(fs, ns)]))


def i_function(m: PresentedModule, fs: Sequence[PolyElement], ns: Sequence[int]) -> int:
    e = multiplicity(m, fs)
    product = 1
    for k in ns:
        product *= k
    return length_function(m, fs, ns) - product * e


def _length_terms(ns: Sequence[int]) -> List[int]:
    """ 1, n_1, n_1*n_2, ..., n_1*...*n_d. """
    terms = [1]
    for k in ns:
        terms.append(terms[-1] * k)
    return terms


def fit_length_polynomial(m: PresentedModule, fs: Sequence[PolyElement]) -> Tuple[object, ...]:
    """
    Solve for lambda_0..lambda_d in length = sum lambda_i n_1...n_i from the
    points n = (2,..,2,1,..,1) with k twos, k = 0..d.
    """
    d = len(fs)
    points = [(2,) * k + (1,) * (d - k) for k in range(d + 1)]
    a = DomainMatrix.from_list([_length_terms(ns) for ns in points], QQ)
    b = DomainMatrix.from_list([[length_function(m, fs, ns)] for ns in points], QQ)
    solution = a.lu_solve(b)
    return tuple(row[0] for row in solution.to_list())


def verify_length_polynomial(m: PresentedModule, fs: Sequence[PolyElement],
                             lambdas: Optional[Sequence] = None) -> List[Tuple[Tuple[int, ...], int, object]]:
    """ Mismatches (n, length, predicted) of the fitted polynomial on {1,2,3}^d; empty when exact. """
    if lambdas is None:
        lambdas = fit_length_polynomial(m, fs)
    mismatches = []
    for ns in itertools.product((1, 2, 3), repeat=len(fs)):
        predicted = sum((lam * t for lam, t in zip(lambdas, _length_terms(ns))), QQ.zero)
        actual = length_function(m, fs, ns)
        if predicted != actual:
            mismatches.append((ns, actual, predicted))
    return mismatches
