"""
Exact polynomial arithmetic, monomial orders and free-module vectors.

Polynomials are sympy ``PolyElement`` values over ``QQ`` in a ring whose
default order is grevlex. Vectors of a graded free module are kept as sparse
term maps ``{(component, exponents): coefficient}``; the Gröbner layer works
on those maps directly and only converts at its boundary.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_mul
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from seqcm.exceptions import AmbientMismatchError, RingMismatchError, SeqcmError

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Term = Tuple[int, Monomial]
TermMap = Dict[Term, object]


class RingDescriptor:
    """ Q[x_1, ..., x_n] with named variables, backed by a sympy ``PolyRing``. """

    def __init__(self, variable_names: Sequence[str]):
        names = tuple(variable_names)
        if not names:
            raise SeqcmError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise SeqcmError(f"duplicate variable names in {', '.join(names)}")
        for name in names:
            if not name.isidentifier():
                raise SeqcmError(f"'{name}' is not a valid variable name")
        self.variable_names = names
        self.poly_ring = PolyRing(names, QQ, grevlex)

    @property
    def n(self) -> int:
        return len(self.variable_names)

    @property
    def gens(self) -> Tuple[PolyElement, ...]:
        return tuple(self.poly_ring.gens)

    @property
    def zero(self) -> PolyElement:
        return self.poly_ring.zero

    @property
    def one(self) -> PolyElement:
        return self.poly_ring.one

    def variable(self, name: str) -> PolyElement:
        return self.poly_ring.gens[self.variable_names.index(name)]

    def index(self, name: str) -> int:
        return self.variable_names.index(name)

    def monomial(self, exponents: Monomial, coeff=1) -> PolyElement:
        if len(exponents) != self.n:
            raise SeqcmError(f"monomial {exponents} does not have {self.n} exponents")
        return self.poly_ring.from_dict({tuple(exponents): QQ.convert(coeff)})

    def from_terms(self, terms: Mapping[Monomial, object]) -> PolyElement:
        return self.poly_ring.from_dict(dict(terms))

    def check(self, *polys: PolyElement) -> None:
        """ Raise RingMismatchError unless every polynomial lives in this ring. """
        for f in polys:
            if getattr(f, "ring", None) is not self.poly_ring:
                raise RingMismatchError(f"{f} is not an element of {self}")

    def __eq__(self, other):
        return isinstance(other, RingDescriptor) and other.variable_names == self.variable_names

    def __hash__(self):
        return hash(self.variable_names)

    def __repr__(self):
        return f"RingDescriptor({list(self.variable_names)!r})"

    def __str__(self):
        return f"Q[{','.join(self.variable_names)}]"


def poly_arith(a: PolyElement, b: PolyElement, op: str) -> PolyElement:
    if a.ring is not b.ring:
        raise RingMismatchError(f"cannot combine elements of {a.ring} and {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise SeqcmError(f"unknown polynomial operation '{op}'")


def is_homogeneous(f: PolyElement) -> bool:
    return len({sum(m) for m in f.keys()}) <= 1


def degree(f: PolyElement) -> Optional[int]:
    """ Total degree of a homogeneous polynomial; None for zero or inhomogeneous input. """
    degrees = {sum(m) for m in f.keys()}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def is_monomial(f: PolyElement) -> bool:
    return len(f) == 1


def substitute_powers(f: PolyElement, assignment: Mapping[int, int]) -> PolyElement:
    """ Substitute x_j -> x_j^k_j for each (j, k_j) in ``assignment``. """
    for j, k in assignment.items():
        if not 0 <= j < f.ring.ngens or k < 1:
            raise SeqcmError(f"bad power assignment x{j} -> x{j}^{k}")
    scale = [assignment.get(j, 1) for j in range(f.ring.ngens)]
    return f.ring.from_dict({tuple(e * s for e, s in zip(m, scale)): c for m, c in f.items()})


def grevlex_tail(m: Monomial) -> Tuple[int, ...]:
    return tuple(-e for e in reversed(m))


@dataclass(frozen=True)
class MonomialOrder:
    """
    A monomial order, extended to module terms.

    ``grevlex`` and ``lex`` are the ring orders; on module terms they compare
    the twisted degree first (grevlex only), then the monomial, then the
    position. ``top``/``pot`` are term-over-position and position-over-term
    with grevlex. ``schreyer`` compares m*e_i through the image term
    m*LT(g_i) in the previous free module, ties broken by position.
    """
    kind: str = "top"
    previous: Optional["MonomialOrder"] = None
    previous_degrees: Tuple[int, ...] = ()
    leading_terms: Tuple[Term, ...] = field(default=())

    KINDS = ("grevlex", "lex", "top", "pot", "schreyer")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise SeqcmError(f"unknown monomial order '{self.kind}'")
        if self.kind == "schreyer" and self.previous is None:
            raise SeqcmError("a Schreyer order needs the order it is induced from")

    def monomial_key(self, m: Monomial):
        if self.kind == "lex":
            return lex(m)
        return grevlex(m)

    def term_key(self, degrees: Sequence[int]) -> Callable[[Term], tuple]:
        """ Sort key on terms (component, exponents) of a free module with the given degrees. """
        kind = self.kind
        if kind in ("grevlex", "top"):
            return lambda t: (sum(t[1]) + degrees[t[0]], grevlex_tail(t[1]), -t[0])
        if kind == "pot":
            return lambda t: (-t[0], sum(t[1]) + degrees[t[0]], grevlex_tail(t[1]))
        if kind == "lex":
            return lambda t: (t[1], -t[0])
        base = self.previous.term_key(self.previous_degrees)
        images = self.leading_terms

        def schreyer_key(t):
            comp, m = images[t[0]]
            return (base((comp, monomial_mul(m, t[1]))), -t[0])
        return schreyer_key

    @classmethod
    def schreyer(cls, previous: "MonomialOrder", previous_degrees: Sequence[int],
                 leading_terms: Sequence[Term]) -> "MonomialOrder":
        return cls("schreyer", previous, tuple(previous_degrees), tuple(leading_terms))


TOP = MonomialOrder("top")


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder = TOP) -> int:
    """ Return 1, 0 or -1 as m1 is greater than, equal to or less than m2. """
    if len(m1) != len(m2):
        raise RingMismatchError(f"monomials {m1} and {m2} live in different rings")
    k1, k2 = order.monomial_key(m1), order.monomial_key(m2)
    return (k1 > k2) - (k1 < k2)


@dataclass(frozen=True)
class FreeModule:
    """ The graded free module with basis e_0..e_{r-1}, deg e_i = degrees[i]. """
    ring: RingDescriptor
    degrees: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def dual(self) -> "FreeModule":
        return FreeModule(self.ring, tuple(-a for a in self.degrees))

    def zero(self) -> "FreeElement":
        return FreeElement(self, {})

    def basis(self, i: int) -> "FreeElement":
        return FreeElement(self, {(i, (0,) * self.ring.n): QQ.one})

    def element(self, coordinates: Sequence[Union[PolyElement, int]]) -> "FreeElement":
        return FreeElement.from_coordinates(self, coordinates)

    def check(self, *elements: "FreeElement") -> None:
        for v in elements:
            if v.free != self:
                raise AmbientMismatchError(f"{v} does not live in a free module of degrees {self.degrees}")


def ideal_free_module(ring: RingDescriptor) -> FreeModule:
    return FreeModule(ring, (0,))


class FreeElement:
    """ An element of a graded free module, stored as a sparse term map. """
    __slots__ = ("free", "terms", "_hash")

    def __init__(self, free: FreeModule, terms: TermMap):
        self.free = free
        self.terms = {t: c for t, c in terms.items() if c}
        self._hash = None

    @classmethod
    def from_coordinates(cls, free: FreeModule, coordinates: Sequence[Union[PolyElement, int]]) -> "FreeElement":
        if len(coordinates) != free.rank:
            raise AmbientMismatchError(f"expected {free.rank} coordinates, got {len(coordinates)}")
        terms = {}
        for comp, f in enumerate(coordinates):
            if not isinstance(f, PolyElement):
                f = free.ring.poly_ring(f)
            free.ring.check(f)
            for m, c in f.items():
                terms[(comp, m)] = c
        return cls(free, terms)

    @property
    def rank(self) -> int:
        return self.free.rank

    @property
    def twists(self) -> Tuple[int, ...]:
        return self.free.degrees

    @property
    def coordinates(self) -> Tuple[PolyElement, ...]:
        parts = [{} for _ in range(self.free.rank)]
        for (comp, m), c in self.terms.items():
            parts[comp][m] = c
        return tuple(self.free.ring.from_terms(p) for p in parts)

    def coordinate(self, i: int) -> PolyElement:
        return self.free.ring.from_terms({m: c for (comp, m), c in self.terms.items() if comp == i})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> Optional[int]:
        """ Twisted degree if homogeneous and nonzero, else None. """
        degrees = {sum(m) + self.free.degrees[comp] for comp, m in self.terms}
        if len(degrees) != 1:
            return None
        return degrees.pop()

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(m) + self.free.degrees[comp] for comp, m in self.terms}) <= 1

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self.free.check(other)
        terms = dict(self.terms)
        add_scaled(terms, other.terms, QQ.one)
        return FreeElement(self.free, terms)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        self.free.check(other)
        terms = dict(self.terms)
        add_scaled(terms, other.terms, -QQ.one)
        return FreeElement(self.free, terms)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.free, {t: -c for t, c in self.terms.items()})

    def scale(self, f: PolyElement) -> "FreeElement":
        """ Multiply by a polynomial. """
        self.free.ring.check(f)
        terms = {}
        for m, c in f.items():
            add_scaled(terms, self.terms, c, m)
        return FreeElement(self.free, terms)

    def __eq__(self, other):
        return isinstance(other, FreeElement) and self.free == other.free and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.free, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"FreeElement({[format_polynomial(f) for f in self.coordinates]})"


def add_scaled(target: TermMap, source: TermMap, coeff, shift: Optional[Monomial] = None) -> None:
    """ target += coeff * x^shift * source, in place, dropping cancelled terms. """
    for (comp, m), c in source.items():
        key = (comp, monomial_mul(m, shift) if shift is not None else m)
        value = target.get(key, 0) + coeff * c
        if value:
            target[key] = value
        else:
            target.pop(key, None)


def vector_from_polys(free: FreeModule, pairs: Iterable[Tuple[int, PolyElement]]) -> FreeElement:
    """ Sum of f * e_comp over the given (comp, f) pairs. """
    terms = {}
    for comp, f in pairs:
        add_scaled(terms, {(comp, m): c for m, c in f.items()}, QQ.one)
    return FreeElement(free, terms)


def format_coefficient(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def format_monomial(names: Sequence[str], m: Monomial) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_polynomial(f: PolyElement) -> str:
    """ Canonical text: terms in descending grevlex order, coefficients in lowest terms. """
    if not f:
        return "0"
    names = [str(s) for s in f.ring.symbols]
    parts = []
    for m, c in f.terms(grevlex):
        negative = c < 0
        magnitude = -c if negative else c
        mono = format_monomial(names, m)
        if not mono:
            body = format_coefficient(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_coefficient(magnitude)}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)
