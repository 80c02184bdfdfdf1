import pytest

from mvaut.autgroup import lift_graph_automorphism, positive_real_group, projective_closure
from mvaut.graphauto import automorphism_group
from mvaut.pipeline import build_arrangement, delta_graph


@pytest.fixture(scope="session")
def arrangement():
    return build_arrangement()


@pytest.fixture(scope="session")
def flats(arrangement):
    return arrangement[0]


@pytest.fixture(scope="session")
def lines(arrangement):
    return arrangement[1]


@pytest.fixture(scope="session")
def delta(arrangement):
    return arrangement[2]


@pytest.fixture(scope="session")
def aut_delta(delta):
    return automorphism_group(delta_graph(delta))


@pytest.fixture(scope="session")
def lifted(aut_delta, flats, lines):
    return [lift_graph_automorphism(g, flats, lines) for g in aut_delta.generators]


@pytest.fixture(scope="session")
def paut(lifted):
    return projective_closure(lifted)


@pytest.fixture(scope="session")
def ppos(paut):
    return positive_real_group(paut)
