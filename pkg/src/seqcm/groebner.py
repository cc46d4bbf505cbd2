"""
Gröbner bases for graded submodules of free modules, and everything built on them:
normal forms, syzygies, kernels, colon and saturation, intersections, presented
modules with their Hilbert series, dimension and length.

Every input is homogeneous. Buchberger runs degree by degree with the
Gebauer-Möller update; the product criterion is only used for ideals, where it
is valid.
"""
import itertools
import logging
import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ, ZZ
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm
from sympy.polys.rings import PolyElement, ring as make_ring

from seqcm.exceptions import (AmbientMismatchError, HomogeneityError, InfiniteLengthError,
                              InvariantViolation)
from seqcm.kernel import (TOP, FreeElement, FreeModule, Monomial, MonomialOrder, RingDescriptor,
                          Term, TermMap, add_scaled, degree, format_polynomial, ideal_free_module)

logger = logging.getLogger(__name__)

_HILBERT_RING, _T = make_ring("t", ZZ)


class _Entry:
    """ A monic basis element under construction, with its leading term and tracking data. """
    __slots__ = ("vec", "rep", "lt", "degree")

    def __init__(self, vec: TermMap, rep: Optional[TermMap], key: Callable[[Term], tuple], degrees):
        lt = max(vec, key=key)
        inv = QQ.one / vec[lt]
        self.vec = {t: c * inv for t, c in vec.items()}
        self.rep = {t: c * inv for t, c in rep.items()} if rep is not None else None
        self.lt = lt
        self.degree = sum(lt[1]) + degrees[lt[0]]


def _find_divisor(term: Term, entries: Sequence[_Entry]) -> Optional[_Entry]:
    comp, m = term
    for e in entries:
        if e.lt[0] == comp and monomial_divides(e.lt[1], m):
            return e
    return None


def _reduce(vec: TermMap, rep: Optional[TermMap], entries: Sequence[_Entry],
            key: Callable[[Term], tuple]) -> Tuple[TermMap, Optional[TermMap]]:
    """ Full reduction of vec by monic entries; rep follows the same operations. """
    vec = dict(vec)
    rep = dict(rep) if rep is not None else None
    remainder = {}
    while vec:
        t = max(vec, key=key)
        c = vec[t]
        divisor = _find_divisor(t, entries)
        if divisor is None:
            remainder[t] = c
            del vec[t]
            continue
        shift = monomial_div(t[1], divisor.lt[1])
        add_scaled(vec, divisor.vec, -c, shift)
        if rep is not None:
            add_scaled(rep, divisor.rep, -c, shift)
    return remainder, rep


def _divide(vec: TermMap, entries: Sequence[_Entry],
            key: Callable[[Term], tuple]) -> Tuple[Dict[int, Dict[Monomial, object]], TermMap]:
    """ Division with quotients: vec = sum q_k * entries[k] + remainder. """
    vec = dict(vec)
    quotients: Dict[int, Dict[Monomial, object]] = {}
    remainder = {}
    while vec:
        t = max(vec, key=key)
        c = vec[t]
        for k, e in enumerate(entries):
            if e.lt[0] == t[0] and monomial_divides(e.lt[1], t[1]):
                shift = monomial_div(t[1], e.lt[1])
                add_scaled(vec, e.vec, -c, shift)
                q = quotients.setdefault(k, {})
                q[shift] = q.get(shift, 0) + c
                break
        else:
            remainder[t] = c
            del vec[t]
    return quotients, remainder


def _s_vector(a: _Entry, b: _Entry, track: bool) -> Tuple[TermMap, Optional[TermMap]]:
    lcm = monomial_lcm(a.lt[1], b.lt[1])
    sa, sb = monomial_div(lcm, a.lt[1]), monomial_div(lcm, b.lt[1])
    vec, rep = {}, ({} if track else None)
    add_scaled(vec, a.vec, QQ.one, sa)
    add_scaled(vec, b.vec, -QQ.one, sb)
    if track:
        add_scaled(rep, a.rep, QQ.one, sa)
        add_scaled(rep, b.rep, -QQ.one, sb)
    return vec, rep


@dataclass(frozen=True)
class Submodule:
    """ The submodule of ``free`` generated by ``generators`` (zero generators allowed). """
    free: FreeModule
    generators: Tuple[FreeElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.free != self.free:
                raise AmbientMismatchError(f"generator {g} does not live in the ambient free module")
            if not g.is_homogeneous:
                raise HomogeneityError(f"generator {g} is not homogeneous")

    @classmethod
    def ideal(cls, ring: RingDescriptor, polys: Sequence[PolyElement]) -> "Submodule":
        free = ideal_free_module(ring)
        return cls(free, tuple(FreeElement.from_coordinates(free, [f]) for f in polys))

    @property
    def ring(self) -> RingDescriptor:
        return self.free.ring

    @property
    def nonzero_generators(self) -> Tuple[FreeElement, ...]:
        return tuple(g for g in self.generators if g)

    @cached_property
    def gb(self) -> "GroebnerBasis":
        return buchberger(self)

    def contains(self, v: FreeElement) -> bool:
        return normal_form(v, self.gb).is_zero

    def contains_submodule(self, other: "Submodule") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_as(self, other: "Submodule") -> bool:
        return self.contains_submodule(other) and other.contains_submodule(self)

    def is_zero(self) -> bool:
        return not self.nonzero_generators

    def is_everything(self) -> bool:
        return all(self.contains(self.free.basis(i)) for i in range(self.free.rank))

    def minimalized(self) -> "Submodule":
        gb = self.gb
        return Submodule(self.free, tuple(self.generators[i] for i in gb.minimal_generators))

    def reduced_generators(self) -> Tuple[FreeElement, ...]:
        return self.gb.elements

    def polys(self) -> List[PolyElement]:
        """ Generators of an ideal as polynomials. """
        return [g.coordinate(0) for g in self.nonzero_generators]


@dataclass(frozen=True)
class GroebnerBasis:
    free: FreeModule
    order: MonomialOrder
    elements: Tuple[FreeElement, ...]
    reduced: bool
    minimal_generators: Tuple[int, ...] = ()
    representations: Optional[Tuple[FreeElement, ...]] = None
    source: Optional[FreeModule] = None

    @cached_property
    def key(self) -> Callable[[Term], tuple]:
        return self.order.term_key(self.free.degrees)

    @cached_property
    def entries(self) -> Tuple[_Entry, ...]:
        reps = self.representations or (None,) * len(self.elements)
        return tuple(_Entry(e.terms, r.terms if r is not None else None, self.key, self.free.degrees)
                     for e, r in zip(self.elements, reps))

    @property
    def leading_terms(self) -> Tuple[Term, ...]:
        return tuple(e.lt for e in self.entries)

    def initial_monomials(self) -> Dict[int, Tuple[Monomial, ...]]:
        """ Minimal generators of the initial module, per component. """
        per_comp: Dict[int, List[Monomial]] = {}
        for comp, m in self.leading_terms:
            per_comp.setdefault(comp, []).append(m)
        return {comp: minimalize(ms) for comp, ms in per_comp.items()}

    def restricted_to_minimal(self) -> "GroebnerBasis":
        """ Re-index representations onto the minimal generators only. """
        index = {old: new for new, old in enumerate(self.minimal_generators)}
        source = FreeModule(self.free.ring, tuple(self.source.degrees[i] for i in self.minimal_generators))
        reps = []
        for r in self.representations:
            terms = {}
            for (comp, m), c in r.terms.items():
                if comp not in index:
                    raise InvariantViolation("representation uses a redundant generator")
                terms[(index[comp], m)] = c
            reps.append(FreeElement(source, terms))
        return GroebnerBasis(self.free, self.order, self.elements, self.reduced,
                             tuple(range(len(self.minimal_generators))), tuple(reps), source)


def _update(entries: List[_Entry], active: List[int], pairs: List[tuple], h: int,
            key: Callable[[Term], tuple], use_product: bool) -> Tuple[List[int], List[tuple]]:
    """ Gebauer-Möller update after adding entries[h]. """
    comp, mh = entries[h].lt

    def lcm_with_h(g):
        return monomial_lcm(mh, entries[g].lt[1])

    def coprime(g):
        return use_product and all(not (a and b) for a, b in zip(mh, entries[g].lt[1]))

    candidates = [g for g in active if entries[g].lt[0] == comp]
    kept = []
    while candidates:
        g = candidates.pop(0)
        lcm_hg = lcm_with_h(g)
        dominated = any(monomial_divides(lcm_with_h(o), lcm_hg) for o in candidates) or \
            any(monomial_divides(lcm_with_h(o), lcm_hg) for o in kept)
        if coprime(g) or not dominated:
            kept.append(g)
    new_pairs = [g for g in kept if not coprime(g)]

    surviving = []
    for pair in pairs:
        _, _, i, j = pair
        if entries[i].lt[0] != comp:
            surviving.append(pair)
            continue
        mi, mj = entries[i].lt[1], entries[j].lt[1]
        lcm_ij = monomial_lcm(mi, mj)
        if not monomial_divides(mh, lcm_ij) or monomial_lcm(mi, mh) == lcm_ij \
                or monomial_lcm(mj, mh) == lcm_ij:
            surviving.append(pair)
    for g in new_pairs:
        lcm = lcm_with_h(g)
        term = (comp, lcm)
        surviving.append((entries[h].degree + sum(lcm) - sum(mh), key(term), min(g, h), max(g, h)))

    active = [g for g in active
              if not (entries[g].lt[0] == comp and monomial_divides(mh, entries[g].lt[1]))]
    active.append(h)
    return active, surviving


def buchberger(submodule: Submodule, order: MonomialOrder = TOP, reduced: bool = True,
               track: bool = False) -> GroebnerBasis:
    """
    Gröbner basis of a homogeneous submodule.

    Inputs are fed in by degree after all S-pairs of that degree, so the inputs
    that survive reduction form a minimal generating set (``minimal_generators``).
    With ``track`` every basis element carries its expression in the inputs.
    """
    free = submodule.free
    key = order.term_key(free.degrees)
    gens = submodule.generators
    source = FreeModule(free.ring, tuple(g.degree if g else 0 for g in gens))
    use_product = free.rank == 1
    zero = (0,) * free.ring.n

    entries: List[_Entry] = []
    active: List[int] = []
    pairs: List[tuple] = []
    pending = sorted((g.degree, idx) for idx, g in enumerate(gens) if g)
    minimal = []
    reductions = 0

    def add(vec, rep):
        entries.append(_Entry(vec, rep, key, free.degrees))
        return len(entries) - 1

    while pending or pairs:
        next_pair = min(pairs) if pairs else None
        if next_pair is not None and (not pending or next_pair[0] <= pending[0][0]):
            pairs.remove(next_pair)
            _, _, i, j = next_pair
            vec, rep = _s_vector(entries[i], entries[j], track)
            reductions += 1
            rem, rep = _reduce(vec, rep, [entries[a] for a in active], key)
            if rem:
                h = add(rem, rep)
                active, pairs = _update(entries, active, pairs, h, key, use_product)
        else:
            _, idx = pending.pop(0)
            rep = {(idx, zero): QQ.one} if track else None
            rem, rep = _reduce(gens[idx].terms, rep, [entries[a] for a in active], key)
            if rem:
                minimal.append(idx)
                h = add(rem, rep)
                active, pairs = _update(entries, active, pairs, h, key, use_product)

    basis = [entries[a] for a in active]
    if reduced:
        for pos, e in enumerate(basis):
            others = basis[:pos] + basis[pos + 1:]
            vec, rep = _reduce(e.vec, e.rep, others, key)
            basis[pos] = _Entry(vec, rep, key, free.degrees)
    basis.sort(key=lambda e: key(e.lt), reverse=True)
    logger.debug(f"buchberger: rank {free.rank}, {len(gens)} generators -> "
                 f"{len(basis)} elements after {reductions} S-pair reductions")
    elements = tuple(FreeElement(free, e.vec) for e in basis)
    reps = tuple(FreeElement(source, e.rep) for e in basis) if track else None
    return GroebnerBasis(free, order, elements, reduced, tuple(minimal), reps, source if track else None)


def normal_form(f: FreeElement, gb: GroebnerBasis) -> FreeElement:
    if f.free != gb.free:
        raise AmbientMismatchError(f"{f} and the Gröbner basis live in different free modules")
    rem, _ = _reduce(f.terms, None, gb.entries, gb.key)
    return FreeElement(f.free, rem)


def _schreyer_lifts(gb: GroebnerBasis) -> List[TermMap]:
    """
    Lifted syzygies of the basis elements, one for each pair (i, j), i < j, whose
    monomial lcm(LT_i, LT_j)/LT_i is minimal among the pairs starting at i.
    """
    entries = gb.entries
    zero_check = []
    lifts = []
    for i, a in enumerate(entries):
        candidates = []
        for j in range(i + 1, len(entries)):
            b = entries[j]
            if b.lt[0] != a.lt[0]:
                continue
            candidates.append((monomial_div(monomial_lcm(a.lt[1], b.lt[1]), a.lt[1]), j))
        for m, j in candidates:
            if any(monomial_divides(m2, m) and (m2 != m or j2 < j) for m2, j2 in candidates if j2 != j):
                continue
            b = entries[j]
            vec, _ = _s_vector(a, b, False)
            quotients, rem = _divide(vec, entries, gb.key)
            zero_check.append(not rem)
            lcm = monomial_lcm(a.lt[1], b.lt[1])
            syz = {}
            add_scaled(syz, {(i, monomial_div(lcm, a.lt[1])): QQ.one}, QQ.one)
            add_scaled(syz, {(j, monomial_div(lcm, b.lt[1])): QQ.one}, -QQ.one)
            for k, q in quotients.items():
                add_scaled(syz, {(k, mq): c for mq, c in q.items()}, -QQ.one)
            lifts.append(syz)
    if not all(zero_check):
        raise InvariantViolation("an S-vector of a Gröbner basis did not reduce to zero")
    return lifts


def syzygies(gb: GroebnerBasis) -> Submodule:
    """ Generators of the syzygy module of the basis elements (Schreyer's construction). """
    source = FreeModule(gb.free.ring, tuple(e.degree for e in gb.elements))
    return Submodule(source, tuple(FreeElement(source, s) for s in _schreyer_lifts(gb)))


@dataclass(frozen=True)
class ModuleMap:
    """ A graded map source -> target; column k is the image of the k-th basis vector. """
    source: FreeModule
    target: FreeModule
    columns: Tuple[FreeElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if len(self.columns) != self.source.rank:
            raise AmbientMismatchError(f"a map from rank {self.source.rank} needs that many columns")
        for k, col in enumerate(self.columns):
            self.target.check(col)
            if col and col.degree != self.source.degrees[k]:
                raise HomogeneityError(f"column {k} has degree {col.degree}, "
                                       f"expected {self.source.degrees[k]}")

    def apply(self, v: FreeElement) -> FreeElement:
        self.source.check(v)
        terms = {}
        for (k, m), c in v.terms.items():
            add_scaled(terms, self.columns[k].terms, c, m)
        return FreeElement(self.target, terms)

    def transpose(self) -> "ModuleMap":
        """ The dual map target* -> source*. """
        rows = [{} for _ in range(self.target.rank)]
        for k, col in enumerate(self.columns):
            for (r, m), c in col.terms.items():
                rows[r][(k, m)] = c
        dual_source = self.source.dual()
        return ModuleMap(self.target.dual(), dual_source, tuple(FreeElement(dual_source, r) for r in rows))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """ self after other. """
        return ModuleMap(other.source, self.target, tuple(self.apply(c) for c in other.columns))

    @property
    def is_zero(self) -> bool:
        return not any(self.columns)


def _kernel_generators(phi: ModuleMap, gb: Optional[GroebnerBasis] = None) -> List[FreeElement]:
    if gb is None:
        gb = buchberger(Submodule(phi.target, phi.columns), track=True)
    reps = [r.terms for r in gb.representations]
    zero = (0,) * phi.source.ring.n
    gens = []
    for syz in _schreyer_lifts(gb):
        v = {}
        for (k, m), c in syz.items():
            add_scaled(v, reps[k], c, m)
        if v:
            gens.append(FreeElement(phi.source, v))
    for idx, col in enumerate(phi.columns):
        v = {(idx, zero): QQ.one}
        if col:
            quotients, rem = _divide(col.terms, gb.entries, gb.key)
            if rem:
                raise InvariantViolation("a generator is not in the submodule spanned by its own basis")
            for k, q in quotients.items():
                for m, c in q.items():
                    add_scaled(v, reps[k], -c, m)
        if v:
            gens.append(FreeElement(phi.source, v))
    return gens


def kernel_of_map(phi: ModuleMap, minimal: bool = True) -> Submodule:
    gens = _kernel_generators(phi)
    kernel = Submodule(phi.source, tuple(gens))
    return kernel.minimalized() if minimal else kernel


def kernel_with_basis(phi: ModuleMap, gb: Optional[GroebnerBasis] = None) -> Tuple[Submodule, GroebnerBasis]:
    """ Minimal generators of ker(phi) and a tracked Gröbner basis expressed in them. """
    gens = _kernel_generators(phi, gb)
    kgb = buchberger(Submodule(phi.source, tuple(gens)), track=True)
    minimal = tuple(gens[i] for i in kgb.minimal_generators)
    return Submodule(phi.source, minimal), kgb.restricted_to_minimal()


def _project(v: FreeElement, free: FreeModule, offset: int = 0) -> FreeElement:
    """ The coordinates offset..offset+rank-1 of v, as an element of ``free``. """
    return FreeElement(free, {(c - offset, m): a for (c, m), a in v.terms.items()
                              if offset <= c < offset + free.rank})


def intersect(a: Submodule, b: Submodule) -> Submodule:
    if a.free != b.free:
        raise AmbientMismatchError("cannot intersect submodules of different free modules")
    ga, gb_ = a.nonzero_generators, b.nonzero_generators
    if not ga or not gb_:
        return Submodule(a.free, ())
    source = FreeModule(a.ring, tuple(g.degree for g in ga + gb_))
    kernel = kernel_of_map(ModuleMap(source, a.free, ga + tuple(-g for g in gb_)), minimal=False)
    part = ModuleMap(FreeModule(a.ring, source.degrees[:len(ga)]), a.free, ga)
    images = [part.apply(_project(k, part.source)) for k in kernel.generators]
    return Submodule(a.free, tuple(v for v in images if v)).minimalized()


IdealLike = Union[PolyElement, Sequence[PolyElement], Submodule]


def colon(n: Submodule, g: IdealLike) -> Submodule:
    """ (N :_F g) for a polynomial g, or the intersection over the generators of an ideal. """
    if isinstance(g, Submodule):
        g = g.polys()
    if not isinstance(g, PolyElement):
        polys = [f for f in g if f]
        if not polys:
            return Submodule(n.free, tuple(n.free.basis(i) for i in range(n.free.rank)))
        result = colon(n, polys[0])
        for f in polys[1:]:
            result = intersect(result, colon(n, f))
        return result
    free = n.free
    if not g:
        return Submodule(free, tuple(free.basis(i) for i in range(free.rank)))
    n.ring.check(g)
    deg_g = degree(g)
    if deg_g is None:
        raise HomogeneityError(f"cannot take a colon by the inhomogeneous element {g}")
    rels = n.nonzero_generators
    source = FreeModule(n.ring, tuple(a + deg_g for a in free.degrees) + tuple(v.degree for v in rels))
    columns = tuple(free.basis(i).scale(g) for i in range(free.rank)) + rels
    kernel = kernel_of_map(ModuleMap(source, free, columns), minimal=False)
    projected = [_project(k, free) for k in kernel.generators]
    result = Submodule(free, tuple(v for v in projected if v) + rels)
    return result.minimalized()


def saturation(n: Submodule, g: PolyElement) -> Submodule:
    """ (N : g^infinity) by iterated colon until the chain stabilizes. """
    current = n
    steps = 0
    while True:
        nxt = colon(current, g)
        steps += 1
        if current.contains_submodule(nxt):
            logger.debug(f"saturation stabilized after {steps} colon steps")
            return current
        current = nxt


def ideal_product(a: Submodule, b: Submodule) -> Submodule:
    return Submodule.ideal(a.ring, [f * g for f in a.polys() for g in b.polys()])


def minimalize(monomials) -> Tuple[Monomial, ...]:
    """ Minimal generators of a monomial ideal, sorted by degree. """
    kept: List[Monomial] = []
    for m in sorted(set(monomials), key=lambda m: (sum(m), m)):
        if not any(monomial_divides(k, m) for k in kept):
            kept.append(m)
    return tuple(kept)


def monomial_quotient_dimension(generators, n: int) -> int:
    """ dim S/J for a monomial ideal J: n minus the smallest variable cover of the supports. """
    gens = minimalize(generators)
    if any(sum(g) == 0 for g in gens):
        return -1
    supports = [frozenset(j for j, e in enumerate(g) if e) for g in gens]
    for k in range(n + 1):
        for cover in itertools.combinations(range(n), k):
            chosen = set(cover)
            if all(s & chosen for s in supports):
                return n - k
    raise InvariantViolation("no variable cover found")


@lru_cache(maxsize=8192)
def _numerator(gens: Tuple[Monomial, ...], n: int):
    if not gens:
        return _HILBERT_RING.one
    supports = [frozenset(j for j, e in enumerate(g) if e) for g in gens]
    if all(not (s & t) for s, t in itertools.combinations(supports, 2)):
        result = _HILBERT_RING.one
        for g in gens:
            result *= _HILBERT_RING.one - _T ** sum(g)
        return result
    counts = [sum(1 for s in supports if j in s) for j in range(n)]
    pivot = max(range(n), key=lambda j: (counts[j], -j))
    var = tuple(1 if j == pivot else 0 for j in range(n))
    with_var = minimalize(gens + (var,))
    quotient = minimalize(tuple(tuple(e - 1 if j == pivot and e else e for j, e in enumerate(g))
                                for g in gens))
    return _numerator(with_var, n) + _T * _numerator(quotient, n)


def hilbert_numerator(generators, n: int):
    """ K(t) with HS(S/J) = K(t)/(1-t)^n, by pivoting on the most frequent variable. """
    return _numerator(minimalize(generators), n)


@dataclass(frozen=True)
class HilbertSeries:
    """ HS(M) = t^(-shift) * numerator(t) / (1-t)^n. """
    numerator: object
    shift: int
    n: int

    @cached_property
    def _reduced(self) -> Tuple[object, int]:
        num, k = self.numerator, 0
        if not num:
            return num, 0
        while sum(num.values()) == 0:
            num = num.exquo(_HILBERT_RING.one - _T)
            k += 1
        return num, k

    @property
    def dimension(self) -> int:
        num, k = self._reduced
        return -1 if not num else self.n - k

    @property
    def multiplicity(self) -> int:
        num, _ = self._reduced
        return int(sum(num.values())) if num else 0


class PresentedModule:
    """
    coker(F1 -> F0) for a graded free module F0 (``free``) and homogeneous
    relations. Derived data is memoized per instance under a lock.
    """

    def __init__(self, free: FreeModule, relations: Sequence[FreeElement] = ()):
        self.free = free
        self.relations = tuple(r for r in relations if r)
        for r in self.relations:
            free.check(r)
            if not r.is_homogeneous:
                raise HomogeneityError(f"relation {r} is not homogeneous")
        self._memo: Dict[str, object] = {}
        self._lock = threading.RLock()

    @classmethod
    def cyclic(cls, ring: RingDescriptor, polys: Sequence[PolyElement]) -> "PresentedModule":
        """ S/I for the ideal generated by ``polys``. """
        free = ideal_free_module(ring)
        return cls(free, tuple(FreeElement.from_coordinates(free, [f]) for f in polys))

    @classmethod
    def free_of_rank(cls, ring: RingDescriptor, degrees: Sequence[int] = (0,)) -> "PresentedModule":
        return cls(FreeModule(ring, tuple(degrees)), ())

    @property
    def ring(self) -> RingDescriptor:
        return self.free.ring

    def memo(self, key: str, factory: Callable[[], object]):
        with self._lock:
            if key not in self._memo:
                self._memo[key] = factory()
            return self._memo[key]

    @property
    def relation_module(self) -> Submodule:
        return Submodule(self.free, self.relations)

    @property
    def presentation(self) -> ModuleMap:
        source = FreeModule(self.ring, tuple(r.degree for r in self.relations))
        return ModuleMap(source, self.free, self.relations)

    @property
    def gb(self) -> GroebnerBasis:
        return self.memo("gb", lambda: buchberger(self.relation_module))

    @property
    def is_zero(self) -> bool:
        def compute():
            zero = (0,) * self.ring.n
            killed = {comp for comp, m in self.gb.leading_terms if m == zero}
            return len(killed) == self.free.rank
        return self.memo("is_zero", compute)

    @property
    def dimension(self) -> int:
        return self.memo("dimension", lambda: module_dimension(self))

    def __repr__(self):
        return f"PresentedModule(degrees={list(self.free.degrees)}, relations={len(self.relations)})"


def module_dimension(m: PresentedModule, method: str = "combinatorial") -> int:
    """ Krull dimension from the initial module; -1 for the zero module. """
    if method == "hilbert":
        return hilbert_series(m).dimension
    initial = m.gb.initial_monomials()
    n = m.ring.n
    dims = [monomial_quotient_dimension(initial.get(c, ()), n) for c in range(m.free.rank)]
    return max(dims, default=-1)


def hilbert_series(m: PresentedModule) -> HilbertSeries:
    def compute():
        initial = m.gb.initial_monomials()
        n = m.ring.n
        shift = -min(m.free.degrees, default=0)
        total = _HILBERT_RING.zero
        for c, d in enumerate(m.free.degrees):
            total += _T ** (d + shift) * hilbert_numerator(initial.get(c, ()), n)
        return HilbertSeries(total, shift, n)
    return m.memo("hilbert_series", compute)


def _monomials_of_degree(n: int, k: int):
    for combo in itertools.combinations_with_replacement(range(n), k):
        exps = [0] * n
        for j in combo:
            exps[j] += 1
        yield tuple(exps)


def hilbert_function(m: PresentedModule, k: int) -> int:
    """ dim_Q of the degree-k piece, by counting standard monomials. """
    initial = m.gb.initial_monomials()
    count = 0
    for c, d in enumerate(m.free.degrees):
        if k - d < 0:
            continue
        lead = initial.get(c, ())
        count += sum(1 for a in _monomials_of_degree(m.ring.n, k - d)
                     if not any(monomial_divides(g, a) for g in lead))
    return count


def module_length(m: PresentedModule) -> int:
    if m.is_zero:
        return 0
    if m.dimension > 0:
        raise InfiniteLengthError(f"module of dimension {m.dimension} has infinite length")
    series = hilbert_series(m)
    num = series.numerator.exquo((_HILBERT_RING.one - _T) ** series.n)
    return int(sum(num.values()))


def length_or_none(m: PresentedModule) -> Optional[int]:
    try:
        return module_length(m)
    except InfiniteLengthError:
        return None


def minimal_presentation(m: PresentedModule) -> PresentedModule:
    """ Eliminate unit entries by exact row/column operations, then drop redundant relations. """
    if m.memo("is_minimal", lambda: False):
        return m
    zero = (0,) * m.ring.n
    rels = [dict(r.terms) for r in m.relations]
    degrees = list(m.free.degrees)
    while True:
        hit = None
        for ri, rel in enumerate(rels):
            units = sorted(c for (c, mono) in rel if mono == zero)
            if units:
                hit = (ri, units[0])
                break
        if hit is None:
            break
        ri, comp = hit
        pivot = rels.pop(ri)
        u = pivot[(comp, zero)]
        cleared = []
        for rel in rels:
            column = [(mono, c) for (cc, mono), c in rel.items() if cc == comp]
            for mono, c in column:
                add_scaled(rel, pivot, -c / u, mono)
            if rel:
                cleared.append({(c if c < comp else c - 1, mono): a for (c, mono), a in rel.items()})
        rels = cleared
        degrees.pop(comp)
    free = FreeModule(m.ring, tuple(degrees))
    relations = tuple(FreeElement(free, r) for r in rels)
    gb = buchberger(Submodule(free, relations))
    result = PresentedModule(free, tuple(relations[i] for i in gb.minimal_generators))
    result._memo["gb"] = gb
    result._memo["is_minimal"] = True
    return result


def subquotient(generators: Sequence[FreeElement], relations: Submodule) -> PresentedModule:
    """ (<generators> + N)/N, presented on the generators. """
    free = relations.free
    gens = tuple(g for g in generators if g)
    rels = relations.nonzero_generators
    target_free = FreeModule(free.ring, tuple(g.degree for g in gens))
    if not gens:
        return PresentedModule(target_free, ())
    source = FreeModule(free.ring, target_free.degrees + tuple(r.degree for r in rels))
    kernel = kernel_of_map(ModuleMap(source, free, gens + rels), minimal=False)
    projected = [_project(k, target_free) for k in kernel.generators]
    return minimal_presentation(PresentedModule(target_free, projected))


def quotient(m: PresentedModule, polys: Sequence[PolyElement]) -> PresentedModule:
    """ M/(f_1, ..., f_k)M. """
    key = "quotient:" + ";".join(format_polynomial(f) for f in polys)

    def compute():
        extra = tuple(m.free.basis(c).scale(f) for f in polys for c in range(m.free.rank))
        return minimal_presentation(PresentedModule(m.free, m.relations + extra))
    return m.memo(key, compute)


def kernel_of_multiplication(m: PresentedModule, f: PolyElement) -> PresentedModule:
    """ (0 :_M f) as a presented module. """
    rels = m.relation_module
    return m.memo(f"kernel:{format_polynomial(f)}", lambda: subquotient(colon(rels, f).generators, rels))


def annihilator(m: PresentedModule) -> Submodule:
    """ Ann(M) as the intersection over basis vectors of (image : e_i). """
    ring = m.ring
    if m.is_zero:
        return Submodule.ideal(ring, [ring.one])
    rels = m.relations
    result = None
    for i in range(m.free.rank):
        source = FreeModule(ring, (m.free.degrees[i],) + tuple(r.degree for r in rels))
        kernel = kernel_of_map(ModuleMap(source, m.free, (m.free.basis(i),) + rels), minimal=False)
        part = Submodule.ideal(ring, [k.coordinate(0) for k in kernel.generators if k.coordinate(0)])
        result = part if result is None else intersect(result, part)
    return result.minimalized()
