"""Hypothesis properties for every module's invariants.

Each property counts the cases it actually executes in ``CASES`` so the
acceptance suite can report the total.
"""
import random
from collections import Counter

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from scoperoute.admissibility import (
    add_debt,
    borrow,
    check_walk_admissible,
    debt_repayable,
    extend_by_edge,
    is_admissible,
    sigma_extend,
    sigma_merge,
)
from scoperoute.dynamic import dynamic_s_dijkstra
from scoperoute.netgen import LevelProfile, all_top, gen_grid, gen_random, inject_changes
from scoperoute.network import (
    INF,
    DynamicOverlay,
    RoadNetwork,
    ScopeMap,
    Walk,
    dump_network,
    dynamic_weights,
    load_network,
)
from scoperoute.oracle import oracle_prefix_optimal
from scoperoute.static import extract_walk, s_dijkstra

CASES = Counter()
CHEAP = settings(max_examples=700, deadline=None, derandomize=True,
                 suppress_health_check=list(HealthCheck))
GRAPH = settings(max_examples=1200, deadline=None, derandomize=True,
                 suppress_health_check=list(HealthCheck))


@st.composite
def scopes(draw):
    k = draw(st.integers(2, 4))
    levels = (0,) + tuple(range(1, k - 1)) + (INF,)
    steps = draw(st.lists(st.integers(1, 12), min_size=k - 2, max_size=k - 2))
    nu = [0]
    for s in steps:
        nu.append(nu[-1] + s)
    return ScopeMap(levels, tuple(nu) + (INF,), ())


@st.composite
def sigmas(draw, scope):
    body = sorted(draw(st.lists(st.integers(0, 40), min_size=scope.size - 1,
                                max_size=scope.size - 1)), reverse=True)
    return tuple(body) + (0,)


@st.composite
def scope_and_sigmas(draw, count=1):
    scope = draw(scopes())
    return (scope,) + tuple(draw(sigmas(scope)) for _ in range(count))


def _with_edge(scope, level):
    return ScopeMap(scope.levels, scope.nu, (level,))


@CHEAP
@given(scope_and_sigmas(), st.data(), st.integers(0, 30))
def prop_extend_monotone(case, data, weight):
    CASES["extend_monotone"] += 1
    scope, sig = case
    level = data.draw(st.sampled_from(scope.levels))
    out = sigma_extend(sig, level, weight, scope)
    assert all(b >= a for a, b in zip(sig, out))
    assert all(out[i] >= out[i + 1] for i in range(len(out) - 1))
    assert out[-1] == 0


@CHEAP
@given(scope_and_sigmas(), st.data())
def prop_extend_zero_identity(case, data):
    CASES["extend_zero"] += 1
    scope, sig = case
    assert sigma_extend(sig, data.draw(st.sampled_from(scope.levels)), 0, scope) == sig


@CHEAP
@given(scope_and_sigmas(3))
def prop_merge_lattice(case):
    CASES["merge_lattice"] += 1
    _, a, b, c = case
    assert sigma_merge(a, b) == sigma_merge(b, a)
    assert sigma_merge(sigma_merge(a, b), c) == sigma_merge(a, sigma_merge(b, c))
    assert sigma_merge(a, a) == a
    m = sigma_merge(a, b)
    assert all(x <= y and x <= z for x, y, z in zip(m, a, b))


@settings(CHEAP, max_examples=400)
@given(scope_and_sigmas(), st.data())
def prop_borrow_levels_and_cap(case, data):
    CASES["borrow_cap"] += 1
    scope, _ = case
    reset = data.draw(st.sampled_from(scope.levels))
    debt = scope.zero()
    for _ in range(data.draw(st.integers(1, 6))):
        level = data.draw(st.sampled_from(scope.levels))
        sig = data.draw(sigmas(scope))
        ok, delta = borrow(sig, 0, _with_edge(scope, level), reset, debt)
        r = scope.rank(level)
        if not ok:
            assert sig[r] > scope.nu[r]
            continue
        assert delta[-1] == 0
        assert all(d == 0 for i, d in enumerate(delta) if i > scope.rank(reset) or i != r)
        debt = add_debt(debt, delta)
        assert all(d <= nu for d, nu in zip(debt, scope.nu))
        assert ok == (sig[r] <= scope.nu[r] or (0 < scope.nu[r] < INF and r <= scope.rank(reset)
                                                 and sig[r] - scope.nu[r] <= scope.nu[r]))


@CHEAP
@given(scope_and_sigmas(2))
def prop_debt_repayable(case):
    CASES["debt_repayable"] += 1
    scope, debt_src, since = case
    debt = tuple(min(d, nu) if 0 < nu < INF else 0 for d, nu in zip(debt_src, scope.nu))
    assert debt_repayable(scope.zero(), since, scope)
    if debt_repayable(debt, since, scope):
        smaller = tuple(s // 2 for s in since)
        assert debt_repayable(debt, smaller, scope)


@settings(CHEAP, max_examples=300)
@given(st.integers(1, 8), st.data())
def prop_file_round_trip(n, data):
    CASES["round_trip"] += 1
    scope = data.draw(scopes())
    net = RoadNetwork(n)
    levels = []
    for _ in range(data.draw(st.integers(0, 12))):
        w = data.draw(st.one_of(st.integers(0, 50),
                                st.floats(0, 50, allow_nan=False).map(lambda x: round(x, 3))))
        net.add_edge(data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)), w)
        levels.append(data.draw(st.sampled_from(scope.levels)))
    scope = ScopeMap(scope.levels, scope.nu, tuple(levels))
    net2, scope2 = load_network(dump_network(net, scope))
    assert net2.edges == net.edges and scope2 == scope


@CHEAP
@given(st.integers(0, 10**6), st.integers(0, 6))
def prop_effective_weight(seed, count):
    CASES["effective_weight"] += 1
    net, _ = gen_random(6, 10, seed)
    ov = inject_changes(net, count, "mixed", seed)
    for eid, w in enumerate(dynamic_weights(net, ov)):
        assert w >= net.edges[eid].weight and (w == net.edges[eid].weight) == (eid not in ov.changes)


def _instance(seed, profile_nu=None):
    rr = random.Random(seed)
    n = rr.randint(2, 10)
    m = rr.randint(1, 24)
    nu1 = profile_nu if profile_nu is not None else rr.randint(1, 20)
    net, scope = gen_random(n, m, seed, LevelProfile(nu=(0, nu1, INF)))
    return net, scope, rr.randrange(n)


@GRAPH
@given(st.integers(0, 10**6), st.integers(1, 18), st.integers(1, 10))
def prop_nu_monotone(seed, nu1, bump):
    CASES["nu_monotone"] += 1
    net, scope, s = _instance(seed, nu1)
    low = s_dijkstra(net, net.weights(), scope, s).dist
    raised = scope.with_nu((0, nu1 + bump, INF))
    high = s_dijkstra(net, net.weights(), raised, s).dist
    assert all(h <= l for h, l in zip(high, low))


@GRAPH
@given(st.integers(0, 10**6))
def prop_static_sound_and_exact(seed):
    CASES["static_exact"] += 1
    net, scope, s = _instance(seed)
    w = net.weights()
    res = s_dijkstra(net, w, scope, s)
    assert res.dist == oracle_prefix_optimal(net, w, scope, s)
    for v in range(net.vertex_count):
        walk = extract_walk(res, v)
        if walk is not None:
            assert check_walk_admissible(walk, net, scope, w) and walk.weight(w) == res.dist[v]


@GRAPH
@given(st.integers(0, 10**6), st.integers(1, 15))
def prop_top_level_walks_admissible(seed, steps):
    CASES["top_level_walks"] += 1
    net, scope = gen_random(6, 14, seed, all_top((0, 1, INF), (0, 3, INF)))
    rng = random.Random(seed)
    at, edges = rng.randrange(6), []
    start = at
    for _ in range(steps):
        out = net.out_adjacency[at]
        if not out:
            break
        e = rng.choice(out)
        edges.append(e)
        at = net.edges[e].head
    assert check_walk_admissible(Walk(start, tuple(edges)), net, scope, net.weights())


@GRAPH
@given(st.integers(0, 10**6), st.integers(0, 3))
def prop_dynamic_deterministic_and_bounded(seed, c):
    CASES["dynamic_deterministic"] += 1
    net, scope, s = _instance(seed)
    ov = inject_changes(net, min(c, net.edge_count), "mixed", seed)
    a = dynamic_s_dijkstra(net, ov, scope, s)
    b = dynamic_s_dijkstra(net, ov, scope, s)
    assert a.dist == b.dist and a.witness == b.witness and a.stats == b.stats
    assert a.stats["labels_used"] <= 2 ** len(ov.changes)
    if not ov.changes:
        assert a.dist == s_dijkstra(net, net.weights(), scope, s).dist


@GRAPH
@given(st.integers(0, 10**6))
def prop_generators_deterministic(seed):
    CASES["gen_deterministic"] += 1
    assert dump_network(*gen_random(7, 15, seed)) == dump_network(*gen_random(7, 15, seed))
    assert dump_network(*gen_grid(3, 3, seed)) == dump_network(*gen_grid(3, 3, seed))


PROPERTIES = [v for k, v in sorted(globals().items()) if k.startswith("prop_")]
