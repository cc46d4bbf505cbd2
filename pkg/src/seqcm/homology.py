"""
Free resolutions, Ext against the ring and the deficiency modules
K^i(M) = Ext^{n-i}(M, S) with the homological dim/depth/CM readings.
"""
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.monomials import monomial_div, monomial_lcm

from seqcm.exceptions import IndexOutOfRangeError, InvariantViolation, ZeroModuleError
from seqcm.groebner import (ModuleMap, PresentedModule, Submodule, kernel_of_map, kernel_with_basis,
                            minimal_presentation, minimalize, subquotient)
from seqcm.kernel import FreeElement, FreeModule, Monomial, RingDescriptor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """ 0 <- M <- F_0 <- F_1 <- ... <- F_L, with maps[k] = phi_{k+1}: F_{k+1} -> F_k. """
    module: PresentedModule
    maps: Tuple[ModuleMap, ...]
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def free_modules(self) -> Tuple[FreeModule, ...]:
        return (self.module.free,) + tuple(phi.source for phi in self.maps)

    @property
    def betti_numbers(self) -> Tuple[int, ...]:
        return tuple(f.rank for f in self.free_modules)

    def graded_betti_numbers(self) -> Dict[Tuple[int, int], int]:
        table = {}
        for k, free in enumerate(self.free_modules):
            for deg, count in Counter(free.degrees).items():
                table[(k, deg)] = count
        return table

    def is_complex(self) -> bool:
        return all(self.maps[k].compose(self.maps[k + 1]).is_zero for k in range(self.length - 1))

    def is_exact(self) -> bool:
        """ ker phi_k is generated by the columns of phi_{k+1}, checked by two-sided membership. """
        for k, phi in enumerate(self.maps):
            kernel = kernel_of_map(phi)
            following = self.maps[k + 1].columns if k + 1 < self.length else ()
            image = Submodule(phi.source, following)
            if not (image.contains_submodule(kernel) and kernel.contains_submodule(image)):
                return False
        return True


def free_resolution(m: PresentedModule, minimal: bool = True) -> FreeResolution:
    """
    A graded free resolution of M. With ``minimal`` the presentation is pruned
    first, so every map has entries in the maximal ideal; otherwise the given
    presentation is kept and only later kernels are minimally generated.
    """
    def compute():
        start = minimal_presentation(m) if minimal else m
        n = m.ring.n
        maps = []
        if start.relations:
            phi = start.presentation
            maps.append(phi)
            kernel, gb = kernel_with_basis(phi)
            while kernel.nonzero_generators:
                source = FreeModule(m.ring, tuple(g.degree for g in kernel.generators))
                phi = ModuleMap(source, phi.source, kernel.generators)
                maps.append(phi)
                if len(maps) > n:
                    raise InvariantViolation(f"resolution longer than the {n} variables allow")
                kernel, gb = kernel_with_basis(phi, gb)
        res = FreeResolution(start, tuple(maps), minimal)
        logger.debug(f"resolution betti numbers {list(res.betti_numbers)}")
        return res
    return m.memo(f"resolution:{minimal}", compute)


def taylor_resolution(ring: RingDescriptor, monomials: Sequence[Monomial]) -> FreeResolution:
    """ The Taylor resolution of S/J for a monomial ideal J; not minimal in general. """
    gens = minimalize(monomials)
    module = PresentedModule.cyclic(ring, [ring.monomial(g) for g in gens])
    zero = (0,) * ring.n

    def lcm_of(subset):
        result = zero
        for j in subset:
            result = monomial_lcm(result, gens[j])
        return result

    faces = [[()]]
    for k in range(1, len(gens) + 1):
        faces.append(list(itertools.combinations(range(len(gens)), k)))
    maps = []
    target = FreeModule(ring, (0,))
    for k in range(1, len(gens) + 1):
        index = {face: pos for pos, face in enumerate(faces[k - 1])}
        source = FreeModule(ring, tuple(sum(lcm_of(t)) for t in faces[k]))
        columns = []
        for t in faces[k]:
            terms = {}
            lcm_t = lcm_of(t)
            for pos, j in enumerate(t):
                face = t[:pos] + t[pos + 1:]
                sign = QQ.one if pos % 2 == 0 else -QQ.one
                terms[(index[face], monomial_div(lcm_t, lcm_of(face)))] = sign
            columns.append(FreeElement(target, terms))
        maps.append(ModuleMap(source, target, tuple(columns)))
        target = source
    return FreeResolution(module, tuple(maps), minimal=False)


def ext_module(resolution: FreeResolution, j: int) -> PresentedModule:
    """ Ext^j(M, S) = ker(phi_{j+1}^T) / im(phi_j^T) on the dualized resolution. """
    ring = resolution.module.ring
    frees = resolution.free_modules
    if j < 0 or j >= len(frees):
        return PresentedModule(FreeModule(ring, ()), ())
    dual = frees[j].dual()
    if j < resolution.length:
        cycles = kernel_of_map(resolution.maps[j].transpose()).generators
    else:
        cycles = tuple(dual.basis(i) for i in range(dual.rank))
    boundaries = resolution.maps[j - 1].transpose().columns if j > 0 else ()
    return subquotient(cycles, Submodule(dual, boundaries))


@dataclass(frozen=True, eq=False)
class DeficiencyBattery:
    """ K^0(M), ..., K^d(M) with d = dim M. """
    n: int
    dimension: int
    modules: Tuple[PresentedModule, ...]

    def __getitem__(self, i: int) -> PresentedModule:
        if not 0 <= i <= self.dimension:
            raise IndexOutOfRangeError(f"deficiency index {i} outside 0..{self.dimension}")
        return self.modules[i]

    def __len__(self):
        return len(self.modules)

    @property
    def dimensions(self) -> Tuple[int, ...]:
        return tuple(k.dimension for k in self.modules)

    @property
    def nonzero_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.modules) if not k.is_zero)


def ext_battery(m: PresentedModule) -> DeficiencyBattery:
    if m.is_zero:
        raise ZeroModuleError("the deficiency modules of the zero module are not defined")

    def compute():
        res = free_resolution(m)
        n, d = m.ring.n, m.dimension
        modules = tuple(ext_module(res, n - i) for i in range(d + 1))
        battery = DeficiencyBattery(n, d, modules)
        for i, dim_k in enumerate(battery.dimensions):
            if dim_k > i:
                raise InvariantViolation(f"K^{i} has dimension {dim_k} > {i}")
        if modules[d].is_zero:
            raise InvariantViolation(f"top deficiency module K^{d} vanishes")
        logger.debug(f"battery dims {list(battery.dimensions)}")
        return battery
    return m.memo("battery", compute)


def deficiency_module(m: PresentedModule, i: int) -> PresentedModule:
    return ext_battery(m)[i]


def hom_dim_depth(m: PresentedModule) -> Tuple[int, int]:
    """ (dim, depth) read off the nonvanishing deficiency modules. """
    if m.is_zero:
        raise ZeroModuleError("dim and depth of the zero module are conventions, not readings")
    nonzero = ext_battery(m).nonzero_indices
    dim, dep = max(nonzero), min(nonzero)
    if dim != m.dimension:
        raise InvariantViolation(f"homological dimension {dim} differs from Hilbert dimension {m.dimension}")
    return dim, dep


def depth(m: PresentedModule):
    """ Depth, with math.inf for the zero module. """
    if m.is_zero:
        return math.inf
    return hom_dim_depth(m)[1]


def is_cohen_macaulay(m: PresentedModule) -> bool:
    if m.is_zero:
        return True
    return len(ext_battery(m).nonzero_indices) == 1


def is_generalized_cm(m: PresentedModule) -> bool:
    if m.is_zero:
        return True
    battery = ext_battery(m)
    return all(battery[i].dimension <= 0 for i in range(battery.dimension))
