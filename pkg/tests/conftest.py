import pytest

from seqcm.kernel import RingDescriptor
from seqcm.monomial import MonomialIdeal, monomial_intersect


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: sampled harness runs and randomized sweeps")


def make_ring(names):
    ring = RingDescriptor(list(names))
    return ring, ring.gens


def monomial_ideal(ring, polys):
    return MonomialIdeal.from_polys(ring, polys)


@pytest.fixture(scope="session")
def ideal_c():
    """ (x,y) and (z,t) intersected in Q[x,y,z,t,w]. """
    ring, (x, y, z, t, w) = make_ring("xyztw")
    return monomial_intersect([monomial_ideal(ring, [x, y]), monomial_ideal(ring, [z, t])])


@pytest.fixture(scope="session")
def ideal_d():
    """ (x) and (y,z) and (x^2,y^2,z) intersected in Q[x,y,z]. """
    ring, (x, y, z) = make_ring("xyz")
    return monomial_intersect([monomial_ideal(ring, [x]), monomial_ideal(ring, [y, z]),
                               monomial_ideal(ring, [x ** 2, y ** 2, z])])


@pytest.fixture(scope="session")
def ideal_e():
    """ (x^2y, xy^2) in Q[x,y,z,t]. """
    ring, (x, y, z, t) = make_ring("xyzt")
    return monomial_ideal(ring, [x ** 2 * y, x * y ** 2])


@pytest.fixture(scope="session")
def ideal_g():
    """ Two skew lines (xz,xt,yz,yt) in Q[x,y,z,t]. """
    ring, (x, y, z, t) = make_ring("xyzt")
    return monomial_ideal(ring, [x * z, x * t, y * z, y * t])


@pytest.fixture(scope="session")
def all_ideals(ideal_c, ideal_d, ideal_e, ideal_g):
    return {"c": ideal_c, "d": ideal_d, "e": ideal_e, "g": ideal_g}
