"""Deterministic synthetic instances: grids, random multigraphs, negative changes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .network import INF, DynamicOverlay, RoadNetwork, ScopeMap, ValidationError
from .static import dijkstra


@dataclass(frozen=True)
class LevelProfile:
    """Level set, nu values, and how levels/weights are drawn.

    ``frequencies`` drives random graphs; grids promote every
    ``arterial_every``-th row/column to the top level and every
    ``collector_every``-th to the next level down, the rest get
    ``local_level``.
    """

    levels: tuple = (0, 1, INF)
    nu: tuple = (0, 10, INF)
    frequencies: dict = field(default_factory=lambda: {0: 0.2, 1: 0.4, INF: 0.4})
    weight_range: dict = field(default_factory=lambda: {0: (1, 10), 1: (1, 10), INF: (1, 10)})
    arterial_every: int = 5
    collector_every: int = 0
    local_level: int | float = 1

    def validate(self) -> None:
        if 0 not in self.levels or INF not in self.levels:
            raise ValidationError("profile level set must contain 0 and inf")
        ScopeMap(tuple(self.levels), tuple(self.nu), ())

    def weight(self, rng: random.Random, level) -> int:
        lo, hi = self.weight_range.get(level, (1, 10))
        return rng.randint(lo, hi)


def all_top(levels=(0, INF), nu=(0, INF), **kw) -> LevelProfile:
    """Every edge at level inf: S-Dijkstra degenerates to Dijkstra."""
    return LevelProfile(levels=levels, nu=nu, frequencies={INF: 1.0}, arterial_every=1, **kw)


def gen_grid(rows: int, cols: int, seed: int, profile: LevelProfile | None = None):
    if rows < 2 or cols < 2:
        raise ValueError("grid needs rows, cols >= 2")
    profile = profile or LevelProfile()
    profile.validate()
    rng = random.Random(seed)
    ranked = sorted(profile.levels)
    top = ranked[-1]
    below_top = ranked[-2] if len(ranked) > 2 else top

    def line_level(index: int):
        if profile.arterial_every and index % profile.arterial_every == 0:
            return top
        if profile.collector_every and index % profile.collector_every == 0:
            return below_top
        return profile.local_level

    net = RoadNetwork(rows * cols)
    levels = []

    def link(a, b, level):
        w = profile.weight(rng, level)
        net.add_edge(a, b, w)
        net.add_edge(b, a, w)
        levels.extend((level, level))

    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                link(v, v + 1, line_level(r))
            if r + 1 < rows:
                link(v, v + cols, line_level(c))
    return net, ScopeMap(tuple(profile.levels), tuple(profile.nu), tuple(levels))


def gen_random(n: int, m: int, seed: int, profile: LevelProfile | None = None):
    if n < 2 or m < 1:
        raise ValueError("random graph needs n >= 2, m >= 1")
    profile = profile or LevelProfile()
    profile.validate()
    rng = random.Random(seed)
    choices = list(profile.frequencies)
    probs = [profile.frequencies[k] for k in choices]
    net = RoadNetwork(n)
    levels = []
    for _ in range(m):
        tail = rng.randrange(n)
        head = rng.randrange(n)
        while head == tail:
            head = rng.randrange(n)
        net.add_edge(tail, head, rng.randint(1, 10))
        levels.append(rng.choices(choices, probs)[0])
    return net, ScopeMap(tuple(profile.levels), tuple(profile.nu), tuple(levels))


def inject_changes(network: RoadNetwork, count: int, severity: str, seed: int) -> DynamicOverlay:
    """Pick ``count`` distinct edges, preferring a shortest-path tree from a random source.

    ``severity`` is ``mild`` (x2..x10), ``closure`` (inf) or ``mixed``
    (a fair coin per edge).
    """
    if count > network.edge_count:
        raise ValueError("more changes than edges")
    if severity not in ("mild", "closure", "mixed"):
        raise ValueError(f"unknown severity {severity!r}")
    rng = random.Random(seed)
    if count == 0:
        return DynamicOverlay({})
    weights = network.weights()
    root = rng.randrange(network.vertex_count)
    dist = dijkstra(network, weights, root)
    tree = [
        eid for eid, e in enumerate(network.edges)
        if not e.is_loop and dist[e.tail] + e.weight == dist[e.head] < INF
    ]
    rest = [eid for eid in range(network.edge_count) if eid not in set(tree)]
    rng.shuffle(tree)
    rng.shuffle(rest)
    picked = (tree + rest)[:count]
    changes = {}
    for eid in sorted(picked):
        kind = severity if severity != "mixed" else rng.choice(("mild", "closure"))
        if kind == "closure":
            changes[eid] = INF
        else:
            w = weights[eid]
            changes[eid] = max(w * rng.randint(2, 10), w + 1)
    return DynamicOverlay(changes)
