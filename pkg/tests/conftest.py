import random

import pytest

from scoperoute.netgen import LevelProfile, gen_random, inject_changes
from scoperoute.network import INF, DynamicOverlay, RoadNetwork, ScopeMap


def d1(nu1=5, extra_edge=False):
    """0->1 (2, inf), 1->3 (1, lvl 1), 3->2 (1, lvl 1) [, 1->2 (4, inf)]."""
    net = RoadNetwork(4)
    levels = []
    for tail, head, w, lvl in [(0, 1, 2, INF), (1, 3, 1, 1), (3, 2, 1, 1)]:
        net.add_edge(tail, head, w)
        levels.append(lvl)
    if extra_edge:
        net.add_edge(1, 2, 4)
        levels.append(INF)
    return net, ScopeMap((0, 1, INF), (0, nu1, INF), tuple(levels))


def d2(changed_weight=INF):
    net = RoadNetwork(4)
    levels = []
    for tail, head, w, lvl in [(0, 1, 2, INF), (1, 2, 3, INF), (1, 3, 1, 1), (3, 2, 1, 1)]:
        net.add_edge(tail, head, w)
        levels.append(lvl)
    return net, ScopeMap((0, 1, INF), (0, 1, INF), tuple(levels)), DynamicOverlay({1: changed_weight})


@pytest.fixture
def inst_d1():
    return d1


@pytest.fixture
def inst_d2():
    return d2


def random_instance(seed, n_max=10, m_max=20, c_range=(0, 0), levels4=False):
    """Small random (network, scope, overlay, source), fully determined by ``seed``."""
    rr = random.Random(seed)
    n = rr.randint(3, n_max)
    m = rr.randint(n, m_max)
    if levels4 and rr.random() < 0.5:
        prof = LevelProfile(levels=(0, 1, 2, INF), nu=(0, rr.randint(1, 8), rr.randint(9, 20), INF),
                            frequencies={0: 0.15, 1: 0.3, 2: 0.25, INF: 0.3})
    else:
        prof = LevelProfile(nu=(0, rr.randint(1, 20), INF))
    net, scope = gen_random(n, m, seed, prof)
    c = rr.randint(c_range[0], min(c_range[1], m))
    overlay = inject_changes(net, c, rr.choice(["mild", "closure", "mixed"]), seed)
    return net, scope, overlay, rr.randrange(n)


# one-line verdicts from the acceptance suite, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
