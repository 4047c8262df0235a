import pytest
from hypothesis import HealthCheck, settings

from uag.algebras import (
    GROUP_SIG,
    RING_SIG,
    SEMILATTICE_SIG,
    chain_semilattice,
    cyclic_group,
    klein_four,
    mod_ring,
    symmetric_group_3,
    vee_semilattice,
)
from uag.terms import VarContext

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2)


@pytest.fixture(scope="session")
def z3():
    return cyclic_group(3)


@pytest.fixture(scope="session")
def z4():
    return cyclic_group(4)


@pytest.fixture(scope="session")
def z6():
    return cyclic_group(6)


@pytest.fixture(scope="session")
def klein():
    return klein_four()


@pytest.fixture(scope="session")
def s3():
    return symmetric_group_3()


@pytest.fixture(scope="session")
def chain2():
    return chain_semilattice(2)


@pytest.fixture(scope="session")
def chain3():
    return chain_semilattice(3)


@pytest.fixture(scope="session")
def vee():
    return vee_semilattice()


@pytest.fixture(scope="session")
def r5():
    return mod_ring(5)


@pytest.fixture(scope="session")
def gctx1():
    return VarContext(GROUP_SIG, [("x", "g")])


@pytest.fixture(scope="session")
def gctx2():
    return VarContext(GROUP_SIG, [("x", "g"), ("y", "g")])


@pytest.fixture(scope="session")
def gctx3():
    return VarContext(GROUP_SIG, [("x", "g"), ("y", "g"), ("z", "g")])


@pytest.fixture(scope="session")
def sctx2():
    return VarContext(SEMILATTICE_SIG, [("x", "s"), ("y", "s")])


@pytest.fixture(scope="session")
def rctx2():
    return VarContext(RING_SIG, [("x", "r"), ("y", "r")])
