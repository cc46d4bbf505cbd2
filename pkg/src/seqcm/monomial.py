"""
Monomial ideal combinatorics: lcm intersections, primary decomposition,
associated primes of multigraded modules by brute force over monomial primes,
attached primes of local cohomology and the dimension filtration.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.monomials import monomial_divides, monomial_lcm
from sympy.polys.rings import PolyElement

from seqcm.exceptions import InvariantViolation, NotMonomialError, RingMismatchError, ZeroModuleError
from seqcm.groebner import (PresentedModule, Submodule, colon, minimalize, monomial_quotient_dimension,
                            saturation, subquotient)
from seqcm.homology import ext_battery
from seqcm.kernel import Monomial, RingDescriptor, is_monomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class MonomialPrime:
    """ The prime generated by the variables with the given (sorted) indices. """
    variables: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(sorted(set(self.variables))))

    @classmethod
    def maximal(cls, n: int) -> "MonomialPrime":
        return cls(tuple(range(n)))

    def dimension(self, n: int) -> int:
        return n - len(self.variables)

    def names(self, ring: RingDescriptor) -> List[str]:
        return [ring.variable_names[j] for j in self.variables]

    def polys(self, ring: RingDescriptor) -> List[PolyElement]:
        return [ring.gens[j] for j in self.variables]

    def contains(self, other: "MonomialPrime") -> bool:
        return set(other.variables) <= set(self.variables)

    def contains_poly(self, f: PolyElement) -> bool:
        """ f lies in the prime iff every term involves one of its variables. """
        return all(any(m[j] for j in self.variables) for m in f.keys())

    def format(self, ring: RingDescriptor) -> str:
        return f"({','.join(self.names(ring))})"


@dataclass(frozen=True)
class MonomialIdeal:
    """ A monomial ideal kept as its minimal generators. """
    ring: RingDescriptor
    generators: Tuple[Monomial, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.ring.n:
                raise NotMonomialError(f"monomial {g} does not have {self.ring.n} exponents")
        object.__setattr__(self, "generators", minimalize(self.generators))

    @classmethod
    def from_polys(cls, ring: RingDescriptor, polys: Iterable[PolyElement]) -> "MonomialIdeal":
        gens = []
        for f in polys:
            ring.check(f)
            if not f:
                continue
            if not is_monomial(f):
                raise NotMonomialError(f"{f.as_expr()} is not a monomial")
            gens.append(next(iter(f.keys())))
        return cls(ring, tuple(gens))

    @classmethod
    def unit(cls, ring: RingDescriptor) -> "MonomialIdeal":
        return cls(ring, ((0,) * ring.n,))

    @classmethod
    def of_prime(cls, ring: RingDescriptor, prime: MonomialPrime) -> "MonomialIdeal":
        return cls(ring, tuple(tuple(1 if k == j else 0 for k in range(ring.n)) for j in prime.variables))

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def is_unit(self) -> bool:
        return any(sum(g) == 0 for g in self.generators)

    def contains_monomial(self, m: Monomial) -> bool:
        return any(monomial_divides(g, m) for g in self.generators)

    def contains(self, other: "MonomialIdeal") -> bool:
        return all(self.contains_monomial(g) for g in other.generators)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.ring, self.generators + other.generators)

    def colon_variable_power(self, j: int, k: int) -> "MonomialIdeal":
        return MonomialIdeal(self.ring, tuple(tuple(max(e - k, 0) if i == j else e for i, e in enumerate(g))
                                              for g in self.generators))

    def saturate_variable(self, j: int) -> "MonomialIdeal":
        return MonomialIdeal(self.ring, tuple(tuple(0 if i == j else e for i, e in enumerate(g))
                                              for g in self.generators))

    def radical(self) -> "MonomialIdeal":
        return MonomialIdeal(self.ring, tuple(tuple(1 if e else 0 for e in g) for g in self.generators))

    @property
    def dimension(self) -> int:
        return monomial_quotient_dimension(self.generators, self.n)

    def polys(self) -> List[PolyElement]:
        return [self.ring.monomial(g) for g in self.generators]

    def submodule(self) -> Submodule:
        return Submodule.ideal(self.ring, self.polys())

    @cached_property
    def module(self) -> PresentedModule:
        return PresentedModule.cyclic(self.ring, self.polys())

    def quotient_module(self) -> PresentedModule:
        """ S/I, shared so that derived data is computed once per ideal. """
        return self.module

    def support_prime(self) -> MonomialPrime:
        """ The radical of an ideal generated by pure powers. """
        return MonomialPrime(tuple(j for g in self.generators for j, e in enumerate(g) if e))


def monomial_intersect(ideals: Sequence[MonomialIdeal]) -> MonomialIdeal:
    if not ideals:
        raise ZeroModuleError("intersection of an empty family of ideals")
    result = ideals[0]
    for other in ideals[1:]:
        if other.ring != result.ring:
            raise RingMismatchError("cannot intersect ideals of different rings")
        result = MonomialIdeal(result.ring, tuple(monomial_lcm(a, b)
                                                  for a in result.generators for b in other.generators))
    return result


def _irreducible_components(ideal: MonomialIdeal) -> List[MonomialIdeal]:
    if ideal.is_unit:
        return []
    mixed = next((g for g in ideal.generators if sum(1 for e in g if e) > 1), None)
    if mixed is None:
        return [ideal]
    j = next(i for i, e in enumerate(mixed) if e)
    a = max(g[j] for g in ideal.generators)
    power = tuple(a if i == j else 0 for i in range(ideal.n))
    if not ideal.contains_monomial(power):
        left = ideal + MonomialIdeal(ideal.ring, (power,))
        right = ideal.saturate_variable(j)
    else:
        head = tuple(mixed[j] if i == j else 0 for i in range(ideal.n))
        rest = tuple(0 if i == j else e for i, e in enumerate(mixed))
        left = ideal + MonomialIdeal(ideal.ring, (head,))
        right = ideal + MonomialIdeal(ideal.ring, (rest,))
    return _irreducible_components(left) + _irreducible_components(right)


def primary_decomposition(ideal: MonomialIdeal) -> List[Tuple[MonomialIdeal, MonomialPrime]]:
    """
    Irredundant primary decomposition: split on mixed generators down to
    irreducible ideals, drop the non-minimal ones and merge by radical.
    """
    if ideal.is_unit:
        raise ZeroModuleError("the unit ideal has no primary decomposition")
    leaves = []
    for q in _irreducible_components(ideal):
        if q not in leaves:
            leaves.append(q)
    minimal = [q for q in leaves if not any(p != q and q.contains(p) for p in leaves)]
    groups: Dict[MonomialPrime, List[MonomialIdeal]] = {}
    for q in minimal:
        groups.setdefault(q.support_prime(), []).append(q)
    components = [(monomial_intersect(qs), prime) for prime, qs in groups.items()]
    components.sort(key=lambda c: (len(c[1].variables), c[1].variables))
    logger.debug(f"primary decomposition: {len(leaves)} irreducible leaves, {len(components)} components")
    return components


def associated_primes(ideal: MonomialIdeal) -> FrozenSet[MonomialPrime]:
    return frozenset(prime for _, prime in primary_decomposition(ideal))


def multidegrees(m: PresentedModule) -> Tuple[Tuple[int, ...], ...]:
    """ A Z^n grading of the basis making every relation multihomogeneous, or NotMonomialError. """
    n = m.ring.n
    degrees: List[Optional[Tuple[int, ...]]] = [None] * m.free.rank
    pending = [list(r.terms) for r in m.relations]
    while pending:
        progress = False
        for terms in list(pending):
            known = next(((c, mono) for c, mono in terms if degrees[c] is not None), None)
            if known is None:
                continue
            c0, m0 = known
            total = tuple(a + b for a, b in zip(degrees[c0], m0))
            for c, mono in terms:
                need = tuple(a - b for a, b in zip(total, mono))
                if degrees[c] is None:
                    degrees[c] = need
                elif degrees[c] != need:
                    raise NotMonomialError("the presentation admits no multigrading")
            pending.remove(terms)
            progress = True
        if not progress:
            degrees[pending[0][0][0]] = (0,) * n
    return tuple(d if d is not None else (0,) * n for d in degrees)


def ass_multigraded(m: PresentedModule) -> FrozenSet[MonomialPrime]:
    """
    Ass of a multigraded module: p is associated iff (R :_F p) is not contained
    in the saturation of R by the product of the variables outside p.
    """
    if m.is_zero:
        return frozenset()
    multidegrees(m)
    ring = m.ring
    n, d = ring.n, m.dimension
    relations = m.relation_module
    saturated: Dict[Tuple[int, ...], Submodule] = {(): relations}

    def saturate(outside: Tuple[int, ...]) -> Submodule:
        if outside not in saturated:
            saturated[outside] = saturation(saturate(outside[:-1]), ring.gens[outside[-1]])
        return saturated[outside]

    found = []
    for k in range(n + 1):
        if n - k > d:
            continue
        for variables in itertools.combinations(range(n), k):
            outside = tuple(j for j in range(n) if j not in variables)
            sat = saturate(outside)
            if sat.is_everything():
                continue
            socle = colon(relations, [ring.gens[j] for j in variables]) if variables else relations
            if any(not sat.contains(g) for g in socle.generators):
                found.append(MonomialPrime(variables))
    logger.debug(f"ass over {n} variables: {len(found)} primes")
    return frozenset(found)


def attached_primes(m: PresentedModule, i: int) -> FrozenSet[MonomialPrime]:
    """ Att H^i_m(M) = Ass K^i(M). """
    return m.memo(f"att:{i}", lambda: ass_multigraded(ext_battery(m)[i]))


def attached_prime_table(m: PresentedModule) -> Tuple[FrozenSet[MonomialPrime], ...]:
    return tuple(attached_primes(m, i) for i in range(m.dimension + 1))


def largest_small_submodule(ideal: MonomialIdeal, e: int) -> MonomialIdeal:
    """ J(e)/I is the largest submodule of S/I of dimension at most e. """
    n = ideal.n
    kept = [q for q, prime in primary_decomposition(ideal) if prime.dimension(n) > e]
    return monomial_intersect(kept) if kept else MonomialIdeal.unit(ideal.ring)


@dataclass(frozen=True, eq=False)
class DimensionFiltration:
    """
    H^0_m(M) = D_t in ... in D_0 = M for M = S/I, stored as ideals with
    D_i = chain[i]/I; chain[0] is the unit ideal and dimensions[i] = dim D_i.
    """
    ideal: MonomialIdeal
    chain: Tuple[MonomialIdeal, ...]
    dimensions: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def submodule(self, i: int) -> PresentedModule:
        return subquotient(self.chain[i].submodule().generators, self.ideal.submodule())

    def quotient(self, i: int) -> PresentedModule:
        """ D_{i-1}/D_i. """
        return subquotient(self.chain[i - 1].submodule().generators, self.chain[i].submodule())

    @cached_property
    def quotient_modules(self) -> Tuple[PresentedModule, ...]:
        return tuple(self.quotient(i) for i in range(1, len(self.chain)))

    def quotients(self) -> List[PresentedModule]:
        return list(self.quotient_modules)


def dimension_filtration(ideal: MonomialIdeal) -> DimensionFiltration:
    if ideal.is_unit:
        raise ZeroModuleError("the zero module has no dimension filtration")

    def compute():
        n = ideal.n
        dims = sorted({prime.dimension(n) for _, prime in primary_decomposition(ideal)}, reverse=True)
        chain = [MonomialIdeal.unit(ideal.ring)]
        dimensions = [dims[0]]
        for k, current in enumerate(dims):
            if current <= 0:
                break
            chain.append(largest_small_submodule(ideal, current - 1))
            dimensions.append(dims[k + 1] if k + 1 < len(dims) else -1)
        return DimensionFiltration(ideal, tuple(chain), tuple(dimensions))
    return ideal.module.memo("filtration", compute)


def verify_filtration(ideal: MonomialIdeal) -> DimensionFiltration:
    """
    Check the Ass identities of the filtration: Ass D_i has the primes of
    dimension at most d_i, Ass M/D_i those above d_i, and Ass D_{i-1}/D_i
    those of dimension exactly d_{i-1}.
    """
    filtration = dimension_filtration(ideal)
    n = ideal.n
    ass = associated_primes(ideal)
    for i in range(1, len(filtration.chain)):
        d_i, d_prev = filtration.dimensions[i], filtration.dimensions[i - 1]
        checks = (
            ("D", ass_multigraded(filtration.submodule(i)), {p for p in ass if p.dimension(n) <= d_i}),
            ("M/D", associated_primes(filtration.chain[i]) if not filtration.chain[i].is_unit else frozenset(),
             {p for p in ass if p.dimension(n) > d_i}),
            ("D/D", ass_multigraded(filtration.quotient(i)), {p for p in ass if p.dimension(n) == d_prev}),
        )
        for label, got, expected in checks:
            if set(got) != expected:
                raise InvariantViolation(f"filtration step {i}: Ass of {label} is {sorted(got)}, "
                                         f"expected {sorted(expected)}")
    return filtration
