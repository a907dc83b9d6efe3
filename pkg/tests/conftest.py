import pytest

from esakia.poset import antichain, chain, make_poset


@pytest.fixture
def Pt():
    return make_poset(["pt"], [])


@pytest.fixture
def C2():
    return make_poset(["a", "b"], [("a", "b")])


@pytest.fixture
def C3():
    return make_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture
def A2():
    return make_poset(["a", "b"], [])


@pytest.fixture
def V():
    # r below both s and t, s and t incomparable
    return make_poset(["r", "s", "t"], [("r", "s"), ("r", "t")])
