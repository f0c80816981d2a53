import pytest

from mwkt import make_field


@pytest.fixture
def gf2():
    return make_field("GF(2)")


@pytest.fixture
def gf3():
    return make_field("GF(3)")


@pytest.fixture
def gf4():
    return make_field("GF(4)")


@pytest.fixture
def gf5():
    return make_field("GF(5)")


@pytest.fixture
def gf7():
    return make_field("GF(7)")


@pytest.fixture
def gf9():
    return make_field("GF(9)")


@pytest.fixture
def f2t():
    return make_field("GF(2)(t)")


@pytest.fixture
def f4t():
    return make_field("GF(4)(t)")


@pytest.fixture
def f2tu():
    return make_field("GF(2)(t,u)")
