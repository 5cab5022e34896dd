"""Brute-force reference semantics for desk-scale verification.

None of these share code paths with the searches they check beyond the
sigma arithmetic in :mod:`admissibility`.
"""
from __future__ import annotations

import heapq
import os
from collections import deque

from .admissibility import dominates, extend_by_edge, is_admissible
from .network import INF, RoadNetwork, ScopeMap

DEFAULT_BUDGET = 10**7


class OracleBudgetExceeded(RuntimeError):
    pass


def state_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get("ROUTE_ORACLE_BUDGET", DEFAULT_BUDGET))


def oracle_prefix_optimal(network: RoadNetwork, weighting, scope: ScopeMap, source: int,
                          budget: int | None = None) -> list:
    """Exact prefix-admissible optimum per vertex.

    FIFO label-correcting over (cost, raw sigma) states with Pareto
    pruning; no priority order, no settling.
    """
    budget = state_budget(budget)
    n = network.vertex_count
    front: list[list] = [[] for _ in range(n)]
    front[source].append((0, scope.zero()))
    queue = deque([(source, 0, scope.zero())])
    created = 1
    while queue:
        v, cost, sig = queue.popleft()
        if (cost, sig) not in front[v]:
            continue  # evicted by a dominating state
        for eid in network.out_adjacency[v]:
            w = weighting[eid]
            if w == INF or not is_admissible(sig, eid, scope):
                continue
            head = network.edges[eid].head
            ncost, nsig = cost + w, extend_by_edge(sig, eid, w, scope)
            states = front[head]
            if any(c <= ncost and dominates(s, nsig) for c, s in states):
                continue
            states[:] = [(c, s) for c, s in states if not (ncost <= c and dominates(nsig, s))]
            states.append((ncost, nsig))
            queue.append((head, ncost, nsig))
            created += 1
            if created > budget:
                raise OracleBudgetExceeded(f"prefix oracle exceeded {budget} states")
    return [min((c for c, _ in states), default=INF) for states in front]


def prefix_admissible_edges(network: RoadNetwork, weighting, scope: ScopeMap, source: int,
                            budget: int | None = None) -> set:
    """Edges admissible on at least one prefix-admissible walk from ``source``."""
    budget = state_budget(budget)
    n = network.vertex_count
    seen = [set() for _ in range(n)]
    seen[source].add(scope.zero())
    stack = [(source, scope.zero())]
    out = set()
    while stack:
        v, sig = stack.pop()
        for eid in network.out_adjacency[v]:
            w = weighting[eid]
            if w == INF or not is_admissible(sig, eid, scope):
                continue
            out.add(eid)
            head = network.edges[eid].head
            nsig = extend_by_edge(sig, eid, w, scope)
            # sigma slots beyond nu behave identically; clamp to keep this finite
            nsig = tuple(min(s, nu + 1) if nu != INF else s for s, nu in zip(nsig, scope.nu))
            if nsig not in seen[head]:
                seen[head].add(nsig)
                if sum(len(s) for s in seen) > budget:
                    raise OracleBudgetExceeded("edge enumeration exceeded budget")
                stack.append((head, nsig))
    return out


def oracle_def2_admissible_edges(network: RoadNetwork, weighting, scope: ScopeMap, source: int,
                                 budget: int | None = None, max_vertices: int = 10) -> set:
    """Edges admissible under the recursive edge-deleted-subgraph definition.

    ``e = (u, v)`` is admissible in ``G - D`` iff some walk to ``u`` in
    ``G - D - e`` that is optimal among walks built from edges admissible
    in ``G - D - e`` keeps the higher-scope weight at or below nu of e's
    level. Memoized on the deleted set ``D``; exponential by nature.
    """
    budget = state_budget(budget)
    if network.vertex_count > max_vertices:
        raise OracleBudgetExceeded(f"def2 oracle limited to n <= {max_vertices}")
    edges = network.edges
    memo: dict[frozenset, frozenset] = {}

    def reachable(deleted: frozenset) -> list:
        seen = [False] * network.vertex_count
        seen[source] = True
        todo = [source]
        while todo:
            x = todo.pop()
            for eid in network.out_adjacency[x]:
                if eid in deleted or weighting[eid] == INF:
                    continue
                h = edges[eid].head
                if not seen[h]:
                    seen[h] = True
                    todo.append(h)
        return seen

    def lex_best(allowed: frozenset, target: int, rank: int):
        # min (cost, higher-scope weight) over walks using only `allowed` edges
        best = {source: (0, 0)}
        heap = [(0, 0, source)]
        while heap:
            c, s, x = heapq.heappop(heap)
            if best.get(x, (INF, INF)) < (c, s):
                continue
            if x == target:
                return c, s
            for eid in network.out_adjacency[x]:
                if eid not in allowed:
                    continue
                w = weighting[eid]
                cand = (c + w, s + (w if scope.edge_rank(eid) > rank else 0))
                h = edges[eid].head
                if cand < best.get(h, (INF, INF)):
                    best[h] = cand
                    heapq.heappush(heap, (cand[0], cand[1], h))
        return None

    def admissible(deleted: frozenset) -> frozenset:
        if deleted in memo:
            return memo[deleted]
        if len(memo) >= budget:
            raise OracleBudgetExceeded(f"def2 oracle exceeded {budget} subgraphs")
        seen = reachable(deleted)
        out = set()
        for eid, e in enumerate(edges):
            if eid in deleted or weighting[eid] == INF:
                continue
            if e.tail == source:
                out.add(eid)  # empty walk, zero sigma
                continue
            smaller = deleted | {eid}
            if not seen[e.tail] or not reachable(smaller)[e.tail]:
                continue
            rank = scope.edge_rank(eid)
            hit = lex_best(admissible(smaller), e.tail, rank)
            if hit is not None and hit[1] <= scope.nu[rank]:
                out.add(eid)
        memo[deleted] = result = frozenset(out)
        return result

    return set(admissible(frozenset()))


# --- dynamic semantics ------------------------------------------------------


def _lend_ranks(scope: ScopeMap, level) -> tuple:
    top = scope.levels.index(level)
    return tuple(r for r in range(top + 1) if 0 < scope.nu[r] < INF)


def _clamp(sig: tuple, caps: tuple) -> tuple:
    return tuple(s if s <= cap else INF for s, cap in zip(sig, caps))


def _cheaper(table: dict, key, cost) -> bool:
    """Record ``cost`` under ``key``; False if an equal or cheaper one was seen."""
    if table.get(key, INF) <= cost:
        return False
    table[key] = cost
    return True


def oracle_dynamic(network: RoadNetwork, overlay, scope: ScopeMap, source: int,
                   budget: int | None = None) -> list:
    """Exact optimum under the operational dynamic admissibility rules.

    Label-correcting over exact (clamped) states, with no priority order
    and no cross-state dominance. A walk runs live, then may leave the live
    route at a backfill seed of any admissible changed edge: a vertex
    ``x`` whose live continuation reaches the edge's tail without the
    segment exceeding nu on the borrowing ranks. From there it runs as a
    detour with sigma reset at or below the edge's level and capped
    borrowing. It returns to live where a dead run reaches the same vertex
    with the debt repaid. A dead run is seeded after the changed edge, at
    base weight, by any live walk that admits the edge. Dead runs and
    detours must stay strictly below the live-only optimum. Dead witnesses
    feed back into live walks, so everything repeats to a fixpoint.
    """
    budget = state_budget(budget)
    n = network.vertex_count
    changes = dict(overlay.changes) if overlay is not None else {}
    edges = network.edges
    base = [e.weight for e in edges]
    wstar = [changes.get(i, base[i]) for i in range(len(edges))]
    d0 = oracle_prefix_optimal(network, wstar, scope, source, budget)
    if not changes:
        return d0
    nu = scope.nu
    k = scope.size
    zero = (0,) * k
    live_caps = tuple(nu)
    lend = {e: _lend_ranks(scope, scope.edge_level[e]) for e in changes}
    top = {e: scope.levels.index(scope.edge_level[e]) for e in changes}
    det_caps = {e: tuple(2 * nu[r] if r in lend[e] else nu[r] for r in range(k)) for e in changes}
    sv_caps = {e: tuple(nu[r] if r in lend[e] else -1 for r in range(k)) for e in changes}
    seg_caps = tuple(nu[r] if any(r in lend[e] for e in changes) else -1 for r in range(k))
    counter = [0]

    def tick():
        counter[0] += 1
        if counter[0] > budget:
            raise OracleBudgetExceeded(f"dynamic oracle exceeded {budget} states")

    def add(sig, eid, w):
        r = scope.edge_rank(eid)
        return tuple(s + w for s in sig[:r]) + sig[r:]

    def admits(sig, eid):
        r = scope.edge_rank(eid)
        return sig[r] <= nu[r]

    def plain_steps(y, sig):
        for eid in network.out_adjacency[y]:
            edge = edges[eid]
            if edge.tail != edge.head and wstar[eid] < INF and admits(sig, eid):
                yield eid, edge.head

    ghost_memo: dict = {}

    def ghost(x, sig):
        """(edge, seed sigma) pairs for detours that may start at ``x``."""
        key = (x, sig)
        if key in ghost_memo:
            return ghost_memo[key]
        out = set()
        seen = set()
        stack = [(x, sig, zero)]
        while stack:
            y, ysig, seg = stack.pop()
            state = (y, _clamp(ysig, live_caps), _clamp(seg, seg_caps))
            if state in seen:
                continue
            seen.add(state)
            tick()
            first = y == x and seg == zero
            for eid in network.out_adjacency[y]:
                edge = edges[eid]
                if eid not in changes or edge.tail == edge.head or not admits(ysig, eid):
                    continue
                if first or (lend[eid] and all(seg[r] <= nu[r] for r in lend[eid])):
                    t = top[eid]
                    out.add((eid, seg[: t + 1] + sig[t + 1:]))
            for eid, head in plain_steps(y, ysig):
                w = wstar[eid]
                nseg = add(seg, eid, w)
                if any(all(nseg[r] <= nu[r] for r in lend[e]) for e in changes if lend[e]):
                    stack.append((head, add(ysig, eid, w), nseg))
        ghost_memo[key] = out
        return out

    def dead_witnesses(seeds: set) -> dict:
        found: dict = {}
        seen: dict = {}
        stack = [(e, v, b, sig, zero) for e, v, b, sig in seeds]
        while stack:
            e, y, b, sig, sv = stack.pop()
            if not b < d0[y]:
                continue
            if not _cheaper(seen, (e, y, _clamp(sig, live_caps), _clamp(sv, sv_caps[e])), b):
                continue
            tick()
            found.setdefault((e, y), set()).add((_clamp(sig, live_caps), _clamp(sv, sv_caps[e])))
            for eid in network.out_adjacency[y]:
                edge = edges[eid]
                w = base[eid] if eid == e else wstar[eid]
                if edge.tail == edge.head or w == INF or not admits(sig, eid):
                    continue
                stack.append((e, edge.head, b + w, add(sig, eid, w), add(sv, eid, w)))
        return found

    def explore(witness: dict):
        best = [INF] * n
        new_seeds = set()
        seen: dict = {}
        stack = [("L", source, 0, zero)]
        while stack:
            st = stack.pop()
            if st[0] == "L":
                _, y, cost, sig = st
                sig = _clamp(sig, live_caps)
                if not _cheaper(seen, ("L", y, sig), cost):
                    continue
                tick()
                best[y] = min(best[y], cost)
                for eid in network.out_adjacency[y]:
                    edge = edges[eid]
                    if eid in changes and edge.tail != edge.head and admits(sig, eid):
                        new_seeds.add((eid, edge.head, cost + base[eid], add(sig, eid, base[eid])))
                for e, ssig in ghost(y, sig):
                    stack.append(("T", e, y, cost, ssig, zero, True))
                for eid, head in plain_steps(y, sig):
                    stack.append(("L", head, cost + wstar[eid], add(sig, eid, wstar[eid])))
                continue
            _, e, y, cost, sig, debt, seeded = st
            if not (seeded or cost < d0[y]):
                continue
            sig = _clamp(sig, det_caps[e])
            if not _cheaper(seen, ("T", e, y, sig, debt, seeded), cost):
                continue
            tick()
            if cost < d0[y]:
                for vsig, sv in witness.get((e, y), ()):
                    if all(d == 0 or d + s <= nu[r] for r, (d, s) in enumerate(zip(debt, sv))):
                        stack.append(("L", y, cost, tuple(min(a, b) for a, b in zip(sig, vsig))))
            for eid in network.out_adjacency[y]:
                edge = edges[eid]
                w = wstar[eid]
                if edge.tail == edge.head or w == INF:
                    continue
                r = scope.edge_rank(eid)
                ndebt = debt
                if sig[r] > nu[r]:
                    short = sig[r] - nu[r]
                    if r not in lend[e] or short > nu[r]:
                        continue
                    if short > debt[r]:
                        ndebt = debt[:r] + (short,) + debt[r + 1:]
                stack.append(("T", e, edge.head, cost + w, add(sig, eid, w), ndebt, False))
        return best, new_seeds

    seeds: set = set()
    while True:
        best, found = explore(dead_witnesses(seeds))
        if found <= seeds:
            return best
        seeds |= found
