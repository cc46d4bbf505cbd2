"""
Headline invariants: polynomial type p(M), sequential polynomial type sp(M)
by two routes, the sCM/sgCM deciders, the non-Cohen-Macaulay locus and the
sampled equivalence harness tying sequences to the verdicts.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

from sympy.polys.rings import PolyElement

from seqcm.config import DEFAULT_SETTINGS, SearchSettings
from seqcm.exceptions import InvariantViolation, ZeroModuleError
from seqcm.groebner import PresentedModule, annihilator, quotient, subquotient
from seqcm.homology import ext_battery, hom_dim_depth, is_cohen_macaulay, is_generalized_cm
from seqcm.monomial import (MonomialIdeal, MonomialPrime, associated_primes, attached_prime_table,
                            dimension_filtration, largest_small_submodule)
from seqcm.sequences import (LinearFormSampler, SequenceKind, check_sequence, classify_element,
                             find_sequence, has_maximal_associated_prime)

logger = logging.getLogger(__name__)


def polynomial_type(m: PresentedModule) -> int:
    """ p(M) = max dim K^i(M) over i < dim M; -1 when all of them vanish. """
    if m.is_zero:
        raise ZeroModuleError("the polynomial type of the zero module is undefined")
    return m.memo("p", lambda: max((k.dimension for k in ext_battery(m).modules[:-1]), default=-1))


@dataclass(frozen=True)
class SpBreakdown:
    route_def: Tuple[int, ...] = ()
    associated_dimensions: Tuple[int, ...] = ()
    q1: int = -1
    q2: int = -1

    @property
    def from_definition(self) -> int:
        return max(self.route_def, default=-1)

    @property
    def from_homology(self) -> int:
        return max(self.q1, self.q2)


def sp_definition(ideal: MonomialIdeal) -> SpBreakdown:
    """ max p(D_{i-1}/D_i) over the dimension filtration. """
    filtration = dimension_filtration(ideal)
    return SpBreakdown(route_def=tuple(polynomial_type(q) for q in filtration.quotients()))


def sp_homological(ideal: MonomialIdeal) -> SpBreakdown:
    """ max(q1, q2) with q1 over the indices missing from D(M), q2 over those in it. """
    n = ideal.n
    m = ideal.quotient_module()
    dims = tuple(sorted({p.dimension(n) for p in associated_primes(ideal)}, reverse=True))
    battery = ext_battery(m)
    q1 = max((battery[i].dimension for i in range(battery.dimension + 1) if i not in dims), default=-1)
    q2 = max((polynomial_type(battery[i]) for i in dims if not battery[i].is_zero), default=-1)
    return SpBreakdown(associated_dimensions=dims, q1=q1, q2=q2)


def sp_breakdown(ideal: MonomialIdeal) -> SpBreakdown:
    by_def, by_hom = sp_definition(ideal), sp_homological(ideal)
    if by_def.from_definition != by_hom.from_homology:
        raise InvariantViolation(f"sp by filtration is {by_def.from_definition}, "
                                 f"by deficiency modules {by_hom.from_homology}")
    return SpBreakdown(by_def.route_def, by_hom.associated_dimensions, by_hom.q1, by_hom.q2)


def sequential_polynomial_type(ideal: MonomialIdeal) -> int:
    return sp_breakdown(ideal).from_definition


def is_sequentially_cm_battery(m: PresentedModule) -> bool:
    """ Every nonzero K^i is Cohen-Macaulay of dimension i. """
    if m.is_zero:
        return True
    battery = ext_battery(m)
    return all(k.is_zero or (k.dimension == i and is_cohen_macaulay(k)) for i, k in enumerate(battery.modules))


def is_sequentially_gcm_battery(m: PresentedModule) -> bool:
    """ Every K^i has finite length or is generalized Cohen-Macaulay of dimension i. """
    if m.is_zero:
        return True
    battery = ext_battery(m)
    return all(k.dimension <= 0 or (k.dimension == i and is_generalized_cm(k))
               for i, k in enumerate(battery.modules))


def _decide_both_ways(name: str, by_filtration: bool, by_battery: bool) -> bool:
    if by_filtration != by_battery:
        raise InvariantViolation(f"{name}: filtration says {by_filtration}, deficiency modules say {by_battery}")
    return by_filtration


def is_sequentially_cm(ideal: MonomialIdeal) -> bool:
    quotients = dimension_filtration(ideal).quotients()
    return _decide_both_ways("sCM", all(is_cohen_macaulay(q) for q in quotients),
                             is_sequentially_cm_battery(ideal.quotient_module()))


def is_sequentially_gcm(ideal: MonomialIdeal) -> bool:
    quotients = dimension_filtration(ideal).quotients()
    return _decide_both_ways("sgCM", all(is_generalized_cm(q) for q in quotients),
                             is_sequentially_gcm_battery(ideal.quotient_module()))


def annihilator_dimensions(m: PresentedModule) -> Tuple[int, ...]:
    """ dim S/Ann K^i(M) for i = 0..d. """
    battery = ext_battery(m)
    return tuple(PresentedModule.cyclic(m.ring, annihilator(k).polys()).dimension for k in battery.modules)


def u0_dimension(ideal: MonomialIdeal) -> int:
    """ Dimension of U(0), the largest submodule of dimension below d. """
    d = ideal.dimension
    if d <= 0:
        return -1
    j = largest_small_submodule(ideal, d - 1)
    if ideal.contains(j):
        return -1
    return subquotient(j.submodule().generators, ideal.submodule()).dimension


def non_cm_locus_dim(ideal: MonomialIdeal) -> int:
    """
    Largest dim S/p over monomial primes p containing I where M_p is not
    Cohen-Macaulay. Ext^j(M,S)_p != 0 iff Ann Ext^j lies in p; M_p is CM iff
    exactly one such j exists.
    """
    ring, n = ideal.ring, ideal.n
    m = ideal.quotient_module()
    battery = ext_battery(m)
    supports = {n - i: annihilator(k).polys() for i, k in enumerate(battery.modules) if not k.is_zero}
    minimal_primes = [p for p in associated_primes(ideal)
                      if not any(q != p and p.contains(q) for q in associated_primes(ideal))]
    worst = -1
    for k in range(n + 1):
        for variables in itertools.combinations(range(n), k):
            prime = MonomialPrime(variables)
            if not all(prime.contains_poly(f) for f in ideal.polys()):
                continue
            present = sorted(j for j, polys in supports.items() if all(prime.contains_poly(f) for f in polys))
            height = len(variables)
            local_dim = max(height - len(q.variables) for q in minimal_primes if prime.contains(q))
            if local_dim != height - present[0]:
                raise InvariantViolation(f"local dimension at {prime.format(ring)} disagrees with Ext grade")
            if len(present) > 1:
                worst = max(worst, n - height)
    return worst


@dataclass(frozen=True)
class QuotientCheck:
    hypothesis_holds: bool
    conclusion_holds: bool

    @property
    def consistent(self) -> bool:
        return not self.hypothesis_holds or self.conclusion_holds


def quotient_preserves_sgcm(ideal: MonomialIdeal, f: PolyElement) -> QuotientCheck:
    """ M sgCM and f generalized regular should leave M/fM sgCM. """
    m = ideal.quotient_module()
    hypothesis = is_sequentially_gcm(ideal) and classify_element(m, f).is_generalized_regular
    return QuotientCheck(hypothesis, is_sequentially_gcm_battery(quotient(m, [f])))


def quotient_preserves_scm(ideal: MonomialIdeal, f: PolyElement) -> QuotientCheck:
    m = ideal.quotient_module()
    hypothesis = is_sequentially_cm(ideal) and classify_element(m, f).is_regular
    return QuotientCheck(hypothesis, is_sequentially_cm_battery(quotient(m, [f])))


def verify_top_attached(ideal: MonomialIdeal) -> None:
    """ Att H^d is the top-dimensional part of Ass, and every p in Ass shows up in Att H^{dim S/p}. """
    n = ideal.n
    m = ideal.quotient_module()
    table = attached_prime_table(m)
    d = len(table) - 1
    ass = associated_primes(ideal)
    top = {p for p in ass if p.dimension(n) == d}
    if set(table[d]) != top:
        raise InvariantViolation(f"Att H^{d} is {sorted(table[d])}, top associated primes are {sorted(top)}")
    for p in ass:
        if p not in table[p.dimension(n)]:
            raise InvariantViolation(f"associated prime {p.format(ideal.ring)} missing from Att H^{p.dimension(n)}")


@dataclass(frozen=True, eq=False)
class Profile:
    ideal: MonomialIdeal
    dimension: int
    depth: int
    ass: FrozenSet[MonomialPrime]
    attached: Tuple[FrozenSet[MonomialPrime], ...]
    filtration_dimensions: Tuple[int, ...]
    filtration_cm: Tuple[bool, ...]
    filtration_gcm: Tuple[bool, ...]
    is_cm: bool
    is_gcm: bool
    is_scm: bool
    is_sgcm: bool
    p: int
    sp: int
    breakdown: SpBreakdown
    non_cm_locus_dim: int
    u0_dim: int
    witness: Optional[Tuple[PolyElement, ...]] = None
    falsifier: Optional[Tuple[PolyElement, ...]] = None

    def check(self) -> None:
        pairs = (("sCM", self.is_scm, self.sp == -1), ("sgCM", self.is_sgcm, self.sp <= 0),
                 ("CM", self.is_cm, self.p == -1), ("gCM", self.is_gcm, self.p <= 0))
        for name, verdict, from_number in pairs:
            if verdict != from_number:
                raise InvariantViolation(f"{name} verdict {verdict} contradicts p={self.p}, sp={self.sp}")
        if self.p > self.dimension - 1 or self.sp > self.dimension - 1:
            raise InvariantViolation(f"p={self.p} or sp={self.sp} exceeds d-1={self.dimension - 1}")


def target_primes(m: PresentedModule, ideal: Optional[MonomialIdeal] = None) -> List[MonomialPrime]:
    """ Non-maximal attached and associated primes, for steering the sampler. """
    n = m.ring.n
    primes = set(p for att in attached_prime_table(m) for p in att)
    if ideal is not None:
        primes |= associated_primes(ideal)
    return sorted(p for p in primes if 0 < len(p.variables) < n)


def _sampled_sops(m: PresentedModule, kind: Optional[SequenceKind], settings: SearchSettings,
                  purpose: str, primes) -> List[Tuple[PolyElement, ...]]:
    """ Up to ``samples`` s.o.p.s of the given kind; rejected draws spend the retry budget. """
    sampler = LinearFormSampler(m.ring, settings, purpose, primes)
    sops = []
    for index in range(settings.samples + settings.retry_budget):
        if len(sops) == settings.samples:
            break
        sop = sampler.sample_sop(m, index)
        if sop is None:
            continue
        if kind is None or check_sequence(m, sop, kind).verdict:
            sops.append(sop)
    return sops


def profile(ideal: MonomialIdeal, settings: SearchSettings = DEFAULT_SETTINGS) -> Profile:
    m = ideal.quotient_module()
    if m.is_zero:
        raise ZeroModuleError("the unit ideal gives the zero module")
    n = ideal.n
    dim, dep = hom_dim_depth(m)
    filtration = dimension_filtration(ideal)
    quotients = filtration.quotients()
    breakdown = sp_breakdown(ideal)
    scm, sgcm = is_sequentially_cm(ideal), is_sequentially_gcm(ideal)
    witness = falsifier = None
    if scm:
        witness = find_sequence(m, SequenceKind.SEQUENTIAL, dim, settings)
    else:
        for sop in _sampled_sops(m, SequenceKind.F_ELEMENT, settings, "profile-falsify", target_primes(m, ideal)):
            if not check_sequence(m, sop, SequenceKind.SEQUENTIAL).verdict:
                falsifier = sop
                break
    result = Profile(
        ideal=ideal, dimension=dim, depth=dep, ass=associated_primes(ideal),
        attached=attached_prime_table(m), filtration_dimensions=filtration.dimensions,
        filtration_cm=tuple(is_cohen_macaulay(q) for q in quotients),
        filtration_gcm=tuple(is_generalized_cm(q) for q in quotients),
        is_cm=is_cohen_macaulay(m), is_gcm=is_generalized_cm(m), is_scm=scm, is_sgcm=sgcm,
        p=polynomial_type(m), sp=breakdown.from_definition, breakdown=breakdown,
        non_cm_locus_dim=non_cm_locus_dim(ideal), u0_dim=u0_dimension(ideal),
        witness=witness, falsifier=falsifier)
    result.check()
    logger.debug(f"profile over {n} variables: dim {dim}, depth {dep}, p {result.p}, sp {result.sp}")
    return result


AGREE, DISAGREE, INCONCLUSIVE, SKIPPED = "agree", "disagree", "inconclusive", "skipped"


@dataclass(frozen=True)
class ClauseOutcome:
    clause: str
    verdict_name: str
    verdict: bool
    sampled: int
    passed: int
    outcome: str
    falsifier: Optional[Tuple[PolyElement, ...]] = None
    label: str = "sampled"


@dataclass(frozen=True)
class HarnessReport:
    clauses: Tuple[ClauseOutcome, ...]
    seed: int
    samples: int

    @property
    def disagreements(self) -> List[ClauseOutcome]:
        return [c for c in self.clauses if c.outcome == DISAGREE]


def _universal_clause(name: str, verdict_name: str, verdict: bool, sops, implied: SequenceKind,
                      m: PresentedModule) -> ClauseOutcome:
    """ verdict <=> every s.o.p. in the sample has the implied property. """
    falsifier = None
    passed = 0
    for sop in sops:
        if check_sequence(m, sop, implied).verdict:
            passed += 1
        elif falsifier is None:
            falsifier = sop
    if not sops:
        outcome = INCONCLUSIVE
    elif verdict:
        outcome = AGREE if falsifier is None else DISAGREE
    else:
        outcome = AGREE if falsifier is not None else INCONCLUSIVE
    return ClauseOutcome(name, verdict_name, verdict, len(sops), passed, outcome, falsifier)


def equivalence_harness(ideal: MonomialIdeal, settings: SearchSettings = DEFAULT_SETTINGS) -> HarnessReport:
    m = ideal.quotient_module()
    if m.is_zero:
        raise ZeroModuleError("the unit ideal gives the zero module")
    d = m.dimension
    primes = target_primes(m, ideal)
    scm, sgcm = is_sequentially_cm(ideal), is_sequentially_gcm(ideal)
    cm, gcm = is_cohen_macaulay(m), is_generalized_cm(m)
    clauses = []

    f_sops = _sampled_sops(m, SequenceKind.F_ELEMENT, settings, "harness-f", primes)
    filter_regular = _universal_clause("filter-regular-sop-is-sequential", "scm", scm, f_sops,
                                       SequenceKind.SEQUENTIAL, m)
    clauses.append(filter_regular)

    # with no witness, the sampled non-sequential f-s.o.p. is the falsifier
    witness = find_sequence(m, SequenceKind.SEQUENTIAL, d, settings)
    if witness is not None:
        outcome = AGREE if scm else DISAGREE
    else:
        outcome = INCONCLUSIVE if scm else AGREE
    clauses.append(ClauseOutcome("sequential-sop-exists", "scm", scm, 1, int(witness is not None), outcome,
                                 None if witness is not None else filter_regular.falsifier))

    g_sops = _sampled_sops(m, SequenceKind.GENERALIZED_REGULAR, settings, "harness-g", primes)
    clauses.append(_universal_clause("generalized-regular-sop-is-sequential-f", "sgcm", sgcm, g_sops,
                                     SequenceKind.SEQUENTIAL_F, m))

    if d >= 2:
        sops = _sampled_sops(m, None, settings, "harness-any", primes)
        h0_vanishes = not has_maximal_associated_prime(m)
        clause = _universal_clause("cm-by-sequential-sop", "cm", cm, sops if h0_vanishes else [],
                                   SequenceKind.SEQUENTIAL, m)
        if not h0_vanishes:
            clause = ClauseOutcome(clause.clause, "cm", cm, len(sops), 0, DISAGREE if cm else AGREE)
        clauses.append(clause)

        m_prime = largest_small_submodule(ideal, 1)
        h0 = largest_small_submodule(ideal, 0)
        same = m_prime.contains(h0) and h0.contains(m_prime)
        clause = _universal_clause("gcm-by-sequential-f-sop", "gcm", gcm, sops if same else [],
                                   SequenceKind.SEQUENTIAL_F, m)
        if not same:
            clause = ClauseOutcome(clause.clause, "gcm", gcm, len(sops), 0, DISAGREE if gcm else AGREE)
        clauses.append(clause)
    else:
        for name, verdict_name, verdict in (("cm-by-sequential-sop", "cm", cm),
                                            ("gcm-by-sequential-f-sop", "gcm", gcm)):
            clauses.append(ClauseOutcome(name, verdict_name, verdict, 0, 0, SKIPPED))

    report = HarnessReport(tuple(clauses), settings.seed, settings.samples)
    for c in report.disagreements:
        logger.error(f"harness clause {c.clause} disagrees with {c.verdict_name}={c.verdict}")
    return report
