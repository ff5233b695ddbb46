import pytest

from opmpc import Instance, Poi, Query, TravelGraph

# Four-POI example network: p1..p4 are POI ids 0..3 on nodes 1..4.
S, D = 100, 101
P1, P2, P3, P4 = 0, 1, 2, 3
K1, K2 = 0, 1

EXAMPLE_EDGES = ((S, 1, 4), (S, 2, 2), (1, D, 6), (2, 3, 2), (3, D, 3), (3, 4, 2), (4, D, 1))


def example_instance() -> Instance:
    pois = (
        Poi(P1, 1, K1, 0.9, 1),
        Poi(P2, 2, K2, 0.5, 1),
        Poi(P3, 3, K1, 0.9, 1),
        Poi(P4, 4, K2, 0.5, 1),
    )
    return Instance(TravelGraph((1, 2, 3, 4, S, D), EXAMPLE_EDGES), pois, 2)


@pytest.fixture
def example_net():
    return example_instance()


@pytest.fixture
def example_query():
    return Query(S, D, 10, (1, 1))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
