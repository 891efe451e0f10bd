import random

import pytest

from liekdv import conslaw, hierarchy, liealg, refdata


@pytest.fixture(scope="session")
def base_ctx():
    return refdata.BASE


@pytest.fixture(scope="session")
def equation():
    return hierarchy.new_kdv_equation()


@pytest.fixture(scope="session")
def adjoint(equation):
    return conslaw.adjoint_equation(equation)


@pytest.fixture(scope="session")
def printed_gens():
    return refdata.printed_generators()


@pytest.fixture(scope="session")
def basis():
    return liealg.canonical_basis()


@pytest.fixture()
def rng():
    return random.Random(20240811)
