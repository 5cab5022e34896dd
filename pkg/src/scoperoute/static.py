"""Uni-directional static S-Dijkstra.

The search is label-setting over (vertex, sigma) labels: a vertex may hold
several labels as long as none dominates another (lower-or-equal cost and
a component-wise lower-or-equal sigma key). A single sigma per vertex is
not enough for exact prefix optimality: a costlier arrival with a smaller
sigma can unlock a low-level edge the cheaper arrival cannot use.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .admissibility import dominates, exhaust_key, extend_by_edge, is_admissible, sigma_merge
from .network import INF, RoadNetwork, ScopeMap, Walk


@dataclass
class SearchResult:
    source: int
    dist: list
    sigma: list
    parent: list
    settled: list
    relaxations: int = 0
    # label store: (vertex, cost, sigma, pred_label, edge)
    labels: list = field(default_factory=list, repr=False)
    best_label: list = field(default_factory=list, repr=False)
    relaxed_edges: set = field(default_factory=set, repr=False)

    @property
    def settled_count(self) -> int:
        return len(self.settled)


def _accept(accepted: list, cost, key) -> bool:
    for c, k in accepted:
        if c <= cost and dominates(k, key):
            return False
    accepted.append((cost, key))
    return True


def s_dijkstra(network: RoadNetwork, weighting, scope: ScopeMap, source: int) -> SearchResult:
    n = network.vertex_count
    if not 0 <= source < n:
        raise IndexError(f"source {source} out of range")
    edges = network.edges
    adj = network.out_adjacency
    labels = [(source, 0, scope.zero(), -1, -1)]
    accepted = [[] for _ in range(n)]
    dist = [INF] * n
    sigma = [None] * n
    best = [-1] * n
    settled = []
    relaxations = 0
    relaxed = set()
    heap = [(0, source, 0)]
    while heap:
        cost, v, lid = heapq.heappop(heap)
        sig = labels[lid][2]
        if not _accept(accepted[v], cost, exhaust_key(sig, scope)):
            continue
        settled.append(v)
        if cost < dist[v]:
            dist[v], sigma[v], best[v] = cost, sig, lid
        elif cost == dist[v]:
            sigma[v] = sigma_merge(sigma[v], sig)
        for eid in adj[v]:
            edge = edges[eid]
            if edge.head == v:
                continue
            w = weighting[eid]
            if w == INF or not is_admissible(sig, eid, scope):
                continue
            relaxations += 1
            relaxed.add(eid)
            nsig = extend_by_edge(sig, eid, w, scope)
            ncost = cost + w
            head_acc = accepted[edge.head]
            if head_acc and not _could_accept(head_acc, ncost, exhaust_key(nsig, scope)):
                continue
            labels.append((edge.head, ncost, nsig, lid, eid))
            heapq.heappush(heap, (ncost, edge.head, len(labels) - 1))
    parent = [labels[b][4] if b > 0 else None for b in best]
    return SearchResult(source, dist, sigma, parent, settled, relaxations, labels, best, relaxed)


def _could_accept(accepted, cost, key) -> bool:
    return not any(c <= cost and dominates(k, key) for c, k in accepted)


def label_walk(labels: list, lid: int) -> tuple:
    out = []
    while labels[lid][3] >= 0:
        out.append(labels[lid][4])
        lid = labels[lid][3]
    out.reverse()
    return tuple(out)


def extract_walk(result: SearchResult, target: int) -> Walk | None:
    if result.dist[target] == INF:
        return None
    return Walk(result.source, label_walk(result.labels, result.best_label[target]))


def dijkstra(network: RoadNetwork, weighting, source: int) -> list:
    """Plain textbook Dijkstra distances, kept as an independent reference."""
    dist = [INF] * network.vertex_count
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for eid in network.out_adjacency[v]:
            e = network.edges[eid]
            nd = d + weighting[eid]
            if nd < dist[e.head]:
                dist[e.head] = nd
                heapq.heappush(heap, (nd, e.head))
    return dist
