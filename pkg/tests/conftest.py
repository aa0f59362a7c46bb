import pytest

from cubebound.catalog import NAMES, builtin


@pytest.fixture(scope="session")
def hexagon():
    return builtin("hexagon")


@pytest.fixture(scope="session")
def ck():
    return builtin("croke-kleiner")


@pytest.fixture(scope="session")
def k33():
    return builtin("k33")


@pytest.fixture(scope="session", params=NAMES)
def any_builtin(request):
    return builtin(request.param)
