"""Dynamic S-Dijkstra: live / dead / detour branches around weight-increased edges.

All branches share one priority queue keyed ``(cost, branch, vertex, seq)``.
Every branch holds Pareto labels, each with its own dominance rule:

* live   - ``(cost, sigma)``; sigma past nu collapses to "exhausted".
* dead   - ``(sigma, sigma_since_v)`` only. A dead label never becomes part
  of a returned walk. It only marks where a detour may rejoin, so its cost
  does not matter.
* detour - ``(cost, sigma, debt)``; on borrowing levels sigma stays exact up
  to ``2 * nu`` because borrowing is still possible below that.

A rejoin pairs an accepted detour label with an accepted dead label at the
same vertex. It needs the debt to be repayable and yields a live label with
the detour's cost and the component-wise minimum of both sigmas. A rejoin
can land below the current queue minimum. Accepting a popped label only
checks it against the labels already accepted, so the search stays exact
in that case.

Spawn policy: only the live branch spawns. A live label relaxing an
admissible changed edge ``e`` seeds the ``{e}``-labelled dead and detour
branches, creating them on first use. Dead and detour branches cross other
changed edges at their increased weight and never spawn.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .admissibility import (
    add_debt,
    borrow,
    borrowing_ranks,
    debt_repayable,
    dominates,
    exhaust_key,
    extend_by_edge,
    is_admissible,
    sigma_merge,
)
from .network import INF, DynamicOverlay, RoadNetwork, ScopeMap, Walk, dynamic_weights
from .static import s_dijkstra

LIVE, DEAD, DETOUR = "live", "dead", "detour"


@dataclass
class SearchBranch:
    kind: str
    label: frozenset
    index: int
    bypassed_edge: int | None = None
    anchor: int | None = None
    sibling: int | None = None
    # vertex -> [(cost, key, label id)] of accepted labels
    accepted: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class Bypass:
    """One detour around a changed edge, as replayed by the checker.

    The detour starts at walk position ``seed_pos``, which is vertex ``x``.
    ``access`` holds the original route's edges from ``x`` to the changed
    edge's tail ``u``. The detour rejoins at ``rejoin_pos``. The dead branch
    reached the rejoin vertex along ``dead_walk``, starting from its own
    access witness ``dead_access`` (a walk to ``u``) and then crossing the
    edge as if unchanged.
    """

    edge: int
    seed_pos: int
    rejoin_pos: int
    access: tuple
    dead_access: "Witness"
    dead_walk: tuple


@dataclass(frozen=True)
class Witness:
    source: int
    edges: tuple
    bypasses: tuple = ()

    @property
    def walk(self) -> Walk:
        return Walk(self.source, self.edges)


@dataclass
class DynamicResult:
    source: int
    dist: list
    witness: list
    optimality: list
    stats: dict
    branches: list = field(repr=False, default_factory=list)
    # live-only optimum under w*, per vertex
    live_only: list = field(repr=False, default_factory=list)

    def walk(self, target: int) -> Walk | None:
        wit = self.witness[target]
        return None if wit is None else wit.walk

    @property
    def settled_total(self) -> int:
        return sum(self.stats["settled"].values())


def reset_sigma(sigma: tuple, scope: ScopeMap, reset_level) -> tuple:
    """Zero every level up to ``reset_level``; higher levels keep their value."""
    top = scope.rank(reset_level)
    return (0,) * (top + 1) + sigma[top + 1:]


def detour_key(sigma: tuple, scope: ScopeMap, lend: tuple) -> tuple:
    out = []
    for r, (s, nu) in enumerate(zip(sigma, scope.nu)):
        cap = 2 * nu if r in lend else nu
        out.append(INF if s > cap else s)
    return tuple(out)


def since_v_key(sv: tuple, scope: ScopeMap, lend: tuple) -> tuple:
    return tuple(
        (INF if s > scope.nu[r] else s) if r in lend else 0 for r, s in enumerate(sv)
    )


def backfill_detour_seeds(chain: list, u_sigma: tuple, bypassed: int, scope: ScopeMap) -> list:
    """Detour seeds found by walking the access route back from ``u``.

    ``chain`` lists ``(sigma_at_x, edge_into_next, weight)`` entries from the
    vertex just before ``u`` back towards the source. Each ``edge_into_next``
    is the edge leaving ``x`` on the route. Returns ``(steps_back, sigma)``
    pairs, where ``steps_back = 0`` is ``u`` itself with the reset vector. A
    vertex ``x`` qualifies while the route from ``x`` to ``u`` stays within
    nu on every finite positive level at or below the changed edge's level.
    """
    level = scope.edge_level[bypassed]
    top = scope.rank(level)
    lend = borrowing_ranks(scope, level)
    seeds = [(0, reset_sigma(u_sigma, scope, level))]
    if not lend:
        return seeds
    seg = scope.zero()
    for back, (x_sigma, eid, w) in enumerate(chain, start=1):
        seg = extend_by_edge(seg, eid, w, scope)
        if any(seg[r] > scope.nu[r] for r in lend):
            break
        seeds.append((back, seg[: top + 1] + x_sigma[top + 1:]))
    return seeds


def label_transition(label: frozenset, completed_edge: int) -> frozenset:
    """Label of the search a finished detour of ``completed_edge`` merges into."""
    if completed_edge not in label:
        raise ValueError(f"edge {completed_edge} not in label {sorted(label)}")
    return label - {completed_edge}


class _Engine:
    def __init__(self, network: RoadNetwork, overlay: DynamicOverlay, scope: ScopeMap, source: int):
        self.net = network
        self.scope = scope
        self.overlay = overlay
        self.source = source
        self.base = network.weights()
        self.wstar = dynamic_weights(network, overlay)
        self.labels: list = []  # (vertex, cost, branch, sigma, extra, step)
        self.branches = [SearchBranch(LIVE, frozenset(), 0)]
        self.by_edge: dict = {}
        self.heap: list = []
        self.seq = 0
        self.settled = {LIVE: 0, DEAD: 0, DETOUR: 0}
        self.live_order: list = []
        n = network.vertex_count
        # live labels without any rejoin in their history; their best cost
        # per vertex is the live-only optimum under w*
        self.pure: list = [[] for _ in range(n)]
        self.d0 = [INF] * n
        self.routes: dict = {}
        self.in_adj = [[] for _ in range(n)]
        for eid, edge in enumerate(network.edges):
            self.in_adj[edge.head].append(eid)
        self.change_ids = sorted(e for e in overlay.changes if not network.edges[e].is_loop)

    # --- label bookkeeping -------------------------------------------------

    def key_of(self, branch: SearchBranch, sigma, extra):
        scope = self.scope
        if branch.kind == LIVE:
            return exhaust_key(sigma, scope)
        lend = self._lend(branch)
        if branch.kind == DEAD:
            return exhaust_key(sigma, scope) + since_v_key(extra, scope, lend)
        return detour_key(sigma, scope, lend) + extra

    def _lend(self, branch):
        return borrowing_ranks(self.scope, self.scope.edge_level[branch.bypassed_edge])

    def dominated(self, branch: SearchBranch, v: int, cost, key, pure: bool = False) -> bool:
        for c, k, _ in self.pure[v] if branch.kind == LIVE else ():
            if c <= cost and dominates(k, key):
                return True
        if pure:
            return False
        for c, k, _ in branch.accepted.get(v, ()):
            if c <= cost and dominates(k, key):
                return True
        return False

    def push(self, v, cost, b: int, sigma, extra, step):
        if cost == INF:
            return
        branch = self.branches[b]
        if branch.kind != LIVE and not (cost < self.d0[v] or step[0] == "seed"):
            return
        if self.dominated(branch, v, cost, self.key_of(branch, sigma, extra), extra is True):
            return
        self.labels.append((v, cost, b, sigma, extra, step))
        heapq.heappush(self.heap, (cost, b, v, self.seq, len(self.labels) - 1))
        self.seq += 1

    # --- branch creation -----------------------------------------------------

    def spawn_detour(self, e: int) -> tuple:
        """Dead and detour branches for changed edge ``e`` (reused if present)."""
        if e in self.by_edge:
            return self.by_edge[e]
        edge = self.net.edges[e]
        label = frozenset({e})
        dead = SearchBranch(DEAD, label, len(self.branches), e, edge.head)
        detour = SearchBranch(DETOUR, label, len(self.branches) + 1, e, edge.tail)
        dead.sibling, detour.sibling = detour.index, dead.index
        self.branches += [dead, detour]
        self.by_edge[e] = (dead.index, detour.index)
        return self.by_edge[e]

    def seed_routes(self, e: int) -> dict:
        """Backfill routes for changed edge ``e``, found by searching back from its tail.

        Maps ``x`` to ``(need, seg, access)`` entries. ``access`` is a route
        from ``x`` to ``u`` whose weight above each borrowing level stays
        within nu there. A live label at ``x`` can take the route and still
        admit ``e`` iff ``sigma_x + need <= nu`` slot-wise. ``seg`` is the
        route's own sigma, which becomes the seed sigma at or below the
        edge's level.
        """
        if e in self.routes:
            return self.routes[e]
        scope, edges, nu = self.scope, self.net.edges, self.scope.nu
        level = scope.edge_level[e]
        top = scope.rank(level)
        lend = borrowing_ranks(scope, level)
        u = edges[e].tail
        rank_e = scope.edge_rank(e)
        need0 = tuple(0 if q == rank_e and nu[q] < INF else -INF for q in range(scope.size))
        table = {u: [(need0, scope.zero(), (), need0 + scope.zero()[: top + 1])]}
        self.routes[e] = table
        if not lend:
            return table
        todo = deque([(u, need0, scope.zero(), ())])
        while todo:
            x, need, seg, access = todo.popleft()
            for f in self.in_adj[x]:
                fe = edges[f]
                w = self.wstar[f]
                if fe.is_loop or w == INF:
                    continue
                nseg = extend_by_edge(seg, f, w, scope)
                if any(nseg[q] > nu[q] for q in lend):
                    continue
                r = scope.edge_rank(f)
                nneed = list(extend_by_edge(need, f, w, scope))
                if nu[r] < INF:
                    nneed[r] = max(nneed[r], 0)
                nneed = tuple(nneed)
                if any(a > b for a, b in zip(nneed, nu)):
                    continue
                key = nneed + detour_key(nseg[: top + 1], scope, lend)
                entries = table.setdefault(fe.tail, [])
                if any(dominates(k, key) for _, _, _, k in entries):
                    continue
                entries[:] = [en for en in entries if not dominates(key, en[3])]
                entries.append((nneed, nseg, (f,) + access, key))
                todo.append((fe.tail, nneed, nseg, (f,) + access))
        return table

    def seed_detours(self, lid: int):
        """Detour seeds of every changed edge reachable back from live label ``lid``."""
        x, cost, _, sigma, _, _ = self.labels[lid]
        nu = self.scope.nu
        zero = self.scope.zero()
        for e in self.change_ids:
            entries = self.seed_routes(e).get(x)
            if not entries:
                continue
            top = self.scope.rank(self.scope.edge_level[e])
            for need, seg, access, _ in entries:
                if all(s + d <= cap for s, d, cap in zip(sigma, need, nu)):
                    _, det_b = self.spawn_detour(e)
                    self.push(x, cost, det_b, seg[: top + 1] + sigma[top + 1:], zero,
                              ("seed", lid, e, access))

    def on_changed_edge(self, lid: int, e: int):
        v, cost, _, sigma, _, _ = self.labels[lid]
        edge = self.net.edges[e]
        dead_b, _ = self.spawn_detour(e)
        w = self.base[e]
        dsig = extend_by_edge(sigma, e, w, self.scope)
        self.push(edge.head, cost + w, dead_b, dsig, self.scope.zero(), ("dseed", lid, e))

    # --- reconciliation ------------------------------------------------------

    def reconcile(self, lid: int):
        """Live-or-dead rules for a freshly accepted dead or detour label at ``y``.

        A detour meeting the dead branch (or the other way round) below the
        live-only cost transfers into the live branch at the detour's cost,
        provided the scope debt is repaid from the dead side.
        """
        y, cost, b, sigma, extra, _ = self.labels[lid]
        branch = self.branches[b]
        sib = self.branches[branch.sibling]
        for _, _, other in sib.accepted.get(y, ()):
            if branch.kind == DETOUR:
                det, dead = lid, other
            else:
                det, dead = other, lid
            _, dcost, _, dsig, debt, _ = self.labels[det]
            _, _, _, vsig, since_v, _ = self.labels[dead]
            if dcost < self.d0[y] and debt_repayable(debt, since_v, self.scope):
                self.push(y, dcost, 0, sigma_merge(dsig, vsig), False, ("rejoin", det, dead))

    # --- main loop ---------------------------------------------------------

    def run(self):
        scope = self.scope
        self.labels.append((self.source, 0, 0, scope.zero(), True, ("start",)))
        heapq.heappush(self.heap, (0, 0, self.source, self.seq, 0))
        self.seq += 1
        while self.heap:
            cost, b, v, _, lid = heapq.heappop(self.heap)
            branch = self.branches[b]
            _, _, _, sigma, extra, step = self.labels[lid]
            if branch.kind != LIVE and not (cost < self.d0[v] or step[0] == "seed"):
                continue
            key = self.key_of(branch, sigma, extra)
            if self.dominated(branch, v, cost, key, extra is True):
                continue
            self.settled[branch.kind] += 1
            if branch.kind == LIVE:
                if extra is True:
                    self.pure[v].append((cost, key, lid))
                    if cost < self.d0[v]:
                        self.d0[v] = cost
                else:
                    branch.accepted.setdefault(v, []).append((cost, key, lid))
                self.live_order.append(lid)
                self.seed_detours(lid)
                self.expand_live(lid)
            else:
                branch.accepted.setdefault(v, []).append((cost, key, lid))
                self.reconcile(lid)
                self.expand_aux(lid, branch)

    def expand_live(self, lid):
        v, cost, _, sigma, pure, _ = self.labels[lid]
        scope, net = self.scope, self.net
        for eid in net.out_adjacency[v]:
            edge = net.edges[eid]
            if edge.head == v or not is_admissible(sigma, eid, scope):
                continue
            w = self.wstar[eid]
            if eid in self.overlay.changes:
                self.on_changed_edge(lid, eid)
            if w == INF:
                continue
            self.push(edge.head, cost + w, 0, extend_by_edge(sigma, eid, w, scope), pure,
                      ("relax", lid, eid))

    def expand_aux(self, lid, branch: SearchBranch):
        v, cost, b, sigma, extra, _ = self.labels[lid]
        scope, net = self.scope, self.net
        e = branch.bypassed_edge
        reset_level = scope.edge_level[e]
        for eid in net.out_adjacency[v]:
            edge = net.edges[eid]
            if edge.head == v:
                continue
            if branch.kind == DEAD:
                w = self.base[eid] if eid == e else self.wstar[eid]
                if w == INF or not is_admissible(sigma, eid, scope):
                    continue
                nextra = extend_by_edge(extra, eid, w, scope)
            else:
                w = self.wstar[eid]
                if w == INF:
                    continue
                ok, delta = borrow(sigma, eid, scope, reset_level, extra)
                if not ok:
                    continue
                nextra = add_debt(extra, delta)
            self.push(edge.head, cost + w, b, extend_by_edge(sigma, eid, w, scope), nextra,
                      ("relax", lid, eid))

    # --- witnesses -----------------------------------------------------------

    def walk_of(self, lid: int) -> list:
        """Real edge sequence of a live or detour label."""
        out = []
        labels = self.labels
        while True:
            step = labels[lid][5]
            kind = step[0]
            if kind == "start":
                break
            if kind == "relax":
                out.append(step[2])
                lid = step[1]
            elif kind == "rejoin":
                lid = step[1]
            elif kind == "seed":
                lid = step[1]
            else:
                raise AssertionError(f"unexpected step {kind}")
        out.reverse()
        return out

    def dead_walk_of(self, lid: int) -> tuple:
        out = []
        labels = self.labels
        while labels[lid][5][0] == "relax":
            out.append(labels[lid][5][2])
            lid = labels[lid][5][1]
        step = labels[lid][5]
        assert step[0] == "dseed"
        out.reverse()
        return step[1], tuple(out)

    def witness_of(self, lid: int) -> Witness:
        edges = self.walk_of(lid)
        bypasses = []
        self._collect_bypasses(lid, bypasses)
        bypasses.sort(key=lambda bp: bp.seed_pos)
        return Witness(self.source, tuple(edges), tuple(bypasses))

    def _collect_bypasses(self, lid, out):
        labels = self.labels
        while True:
            step = labels[lid][5]
            kind = step[0]
            if kind == "start":
                return
            if kind == "relax":
                lid = step[1]
            elif kind == "seed":
                lid = step[1]
            elif kind == "rejoin":
                det, dead = step[1], step[2]
                seed_lid = det
                while labels[seed_lid][5][0] == "relax":
                    seed_lid = labels[seed_lid][5][1]
                _, x_lid, e, access = labels[seed_lid][5]
                x_len = len(self.walk_of(x_lid))
                du_lid, dwalk = self.dead_walk_of(dead)
                out.append(Bypass(e, x_len, len(self.walk_of(det)), access,
                                  self.witness_of(du_lid), dwalk))
                lid = x_lid


def dynamic_s_dijkstra(network: RoadNetwork, overlay: DynamicOverlay | None, scope: ScopeMap,
                       source: int) -> DynamicResult:
    overlay = overlay or DynamicOverlay({})
    if not 0 <= source < network.vertex_count:
        raise IndexError(f"source {source} out of range")
    eng = _Engine(network, overlay, scope, source)
    eng.run()
    n = network.vertex_count
    best = [-1] * n
    dist = [INF] * n
    for lid in eng.live_order:
        v, cost = eng.labels[lid][0], eng.labels[lid][1]
        if cost < dist[v]:
            dist[v], best[v] = cost, lid
    witness = [eng.witness_of(b) if b >= 0 else None for b in best]
    live_only = eng.d0
    optimality = [
        None if d == INF else ("w*" if d == live_only[v] else "w") for v, d in enumerate(dist)
    ]
    labels_used = {br.label for br in eng.branches}
    stats = {
        "settled": dict(eng.settled),
        "branches_spawned": len(eng.branches) - 1,
        "labels_used": len(labels_used),
        "settled_order": [eng.labels[l][0] for l in eng.live_order],
    }
    return DynamicResult(source, dist, witness, optimality, stats, eng.branches, live_only)


# --- operational dynamic admissibility -------------------------------------


class WitnessError(ValueError):
    pass


def replay_witness(wit: Witness, network: RoadNetwork, overlay: DynamicOverlay,
                   scope: ScopeMap, live_only: list | None = None) -> tuple:
    """Re-check a witness from scratch; return ``(end vertex, live sigma, cost)``.

    ``live_only`` is the live-only optimum under w* per vertex (computed
    when omitted). Dead and detour runs must stay strictly below it after
    their starting vertex, and both sides must be below it where they meet.

    Outside bypasses every edge must be admissible for the live sigma under
    w*. Each bypass is checked in four steps. First the access route to the
    changed edge's tail. Then the seed rule. Then the dead branch's run to
    the rejoin vertex. Then the detour segment with borrowing and final
    repayment.
    """
    base = network.weights()
    wstar = dynamic_weights(network, overlay)
    edges = network.edges
    if live_only is None:
        live_only = s_dijkstra(network, wstar, scope, wit.source).dist

    def live_step(at, sigma, eid):
        edge = edges[eid]
        if edge.tail != at:
            raise WitnessError(f"edge {eid} does not leave vertex {at}")
        if edge.is_loop:
            raise WitnessError(f"self-loop {eid} in walk")
        if wstar[eid] == INF:
            raise WitnessError(f"closed edge {eid} in walk")
        if not is_admissible(sigma, eid, scope):
            raise WitnessError(f"edge {eid} inadmissible at sigma {sigma}")
        return edge.head, extend_by_edge(sigma, eid, wstar[eid], scope)

    at, sigma, cost = wit.source, scope.zero(), 0
    pos = 0
    for bp in wit.bypasses:
        if bp.seed_pos < pos or bp.rejoin_pos < bp.seed_pos:
            raise WitnessError("overlapping bypasses")
        for eid in wit.edges[pos:bp.seed_pos]:
            at, sigma = live_step(at, sigma, eid)
            cost += wstar[eid]
        x, x_sigma = at, sigma
        e = bp.edge
        if e not in overlay.changes:
            raise WitnessError(f"bypassed edge {e} is not changed")
        u, u_sigma = x, x_sigma
        chain = []
        for eid in bp.access:
            chain.append((u_sigma, eid, wstar[eid]))
            u, u_sigma = live_step(u, u_sigma, eid)
        if edges[e].tail != u or not is_admissible(u_sigma, e, scope):
            raise WitnessError(f"changed edge {e} not admissibly reached")
        chain.reverse()
        seeds = dict(backfill_detour_seeds(chain, u_sigma, e, scope))
        if len(bp.access) not in seeds:
            raise WitnessError(f"vertex {x} is not a detour seed for edge {e}")
        t_sigma = seeds[len(bp.access)]

        # dead branch: its own access, e at base weight, then its run
        du, du_sigma, d_cost = replay_witness(bp.dead_access, network, overlay, scope, live_only)
        if du != edges[e].tail or not is_admissible(du_sigma, e, scope):
            raise WitnessError("dead access does not admit the changed edge")
        d_at = edges[e].head
        d_sigma = extend_by_edge(du_sigma, e, base[e], scope)
        d_cost += base[e]
        if not d_cost < live_only[d_at]:
            raise WitnessError("dead branch starts at or above the live-only cost")
        since_v = scope.zero()
        for eid in bp.dead_walk:
            edge = edges[eid]
            w = base[eid] if eid == e else wstar[eid]
            if edge.tail != d_at or edge.is_loop or w == INF or not is_admissible(d_sigma, eid, scope):
                raise WitnessError(f"dead walk breaks at edge {eid}")
            d_sigma = extend_by_edge(d_sigma, eid, w, scope)
            since_v = extend_by_edge(since_v, eid, w, scope)
            d_at = edge.head
            d_cost += w
            if not d_cost < live_only[d_at]:
                raise WitnessError(f"dead branch not below live-only cost at {d_at}")

        debt = scope.zero()
        t_at = x
        for eid in wit.edges[bp.seed_pos:bp.rejoin_pos]:
            edge = edges[eid]
            if edge.tail != t_at or edge.is_loop or wstar[eid] == INF:
                raise WitnessError(f"detour breaks at edge {eid}")
            ok, delta = borrow(t_sigma, eid, scope, scope.edge_level[e], debt)
            if not ok:
                raise WitnessError(f"detour edge {eid} exceeds its borrowing cap")
            debt = add_debt(debt, delta)
            t_sigma = extend_by_edge(t_sigma, eid, wstar[eid], scope)
            t_at = edge.head
            cost += wstar[eid]
            if not cost < live_only[t_at]:
                raise WitnessError(f"detour not below live-only cost at {t_at}")
        if t_at != d_at:
            raise WitnessError(f"detour ends at {t_at}, dead branch at {d_at}")
        if not cost < live_only[t_at]:
            raise WitnessError(f"rejoin at {t_at} not below live-only cost")
        if not debt_repayable(debt, since_v, scope):
            raise WitnessError(f"debt {debt} not repaid")
        at, sigma = t_at, sigma_merge(t_sigma, d_sigma)
        pos = bp.rejoin_pos
    for eid in wit.edges[pos:]:
        at, sigma = live_step(at, sigma, eid)
        cost += wstar[eid]
    return at, sigma, cost


def check_dynamic_witness(wit: Witness, network: RoadNetwork, overlay: DynamicOverlay,
                          scope: ScopeMap, target: int | None = None,
                          live_only: list | None = None) -> bool:
    try:
        end, _, _ = replay_witness(wit, network, overlay, scope, live_only)
    except WitnessError:
        return False
    return target is None or end == target
