"""Road network, scope map and dynamic overlay, plus the ``.gsn`` text formats.

Weights are kept as ``int`` when the file gives an integral literal and as
``float`` otherwise; ``math.inf`` is the infinity sentinel throughout (it adds
saturating and orders above every finite value).
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

INF = math.inf


class FormatError(ValueError):
    """Malformed input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(ValueError):
    """Input parsed but violates a structural invariant."""


def parse_number(token: str, *, allow_inf: bool = True):
    if token == "inf":
        if not allow_inf:
            raise ValueError("inf not allowed here")
        return INF
    try:
        return int(token)
    except ValueError:
        value = float(token)
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"bad number {token!r}")
        return value


def format_number(value) -> str:
    if value == INF:
        return "inf"
    if isinstance(value, float) and value.is_integer():
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    weight: float

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass
class RoadNetwork:
    """Directed multigraph; edge ids are positions in ``edges``."""

    vertex_count: int
    edges: list[Edge] = field(default_factory=list)
    out_adjacency: list[list[int]] = field(init=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValidationError("negative vertex count")
        self.out_adjacency = [[] for _ in range(self.vertex_count)]
        edges, self.edges = self.edges, []
        for e in edges:
            self.add_edge(e.tail, e.head, e.weight)

    def add_edge(self, tail: int, head: int, weight) -> int:
        n = self.vertex_count
        if not (0 <= tail < n and 0 <= head < n):
            raise ValidationError(f"edge endpoint out of range: {tail}->{head} (n={n})")
        if not (weight >= 0) or weight == INF:
            raise ValidationError(f"base weight must be finite and non-negative, got {weight}")
        eid = len(self.edges)
        self.edges.append(Edge(tail, head, weight))
        self.out_adjacency[tail].append(eid)
        return eid

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def self_loops(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.is_loop]

    def weights(self) -> list:
        return [e.weight for e in self.edges]


@dataclass(frozen=True)
class ScopeMap:
    """Scope levels (sorted, ``inf`` last), their nu values, and per-edge levels.

    Sigma vectors elsewhere are tuples indexed by level *position*, so
    ``rank`` is the usual way in.
    """

    levels: tuple
    nu: tuple
    edge_level: tuple

    def __post_init__(self):
        levels, nu = self.levels, self.nu
        if len(levels) != len(nu):
            raise ValidationError("levels and nu differ in length")
        if list(levels) != sorted(levels) or len(set(levels)) != len(levels):
            raise ValidationError("levels not strictly increasing")
        if 0 not in levels:
            raise ValidationError("missing level 0")
        if INF not in levels:
            raise ValidationError("missing level inf")
        for lvl in levels:
            if lvl != INF and (lvl < 0 or int(lvl) != lvl):
                raise ValidationError(f"bad scope level {lvl}")
        if nu[0] != 0:
            raise ValidationError("nu(0) must be 0")
        if nu[-1] != INF:
            raise ValidationError("nu(inf) must be inf")
        for a, b in zip(nu, nu[1:]):
            if not a < b:
                raise ValidationError("nu not strictly increasing")
        index = {lvl: i for i, lvl in enumerate(levels)}
        for eid, lvl in enumerate(self.edge_level):
            if lvl not in index:
                raise ValidationError(f"undeclared scope level {lvl} on edge {eid}")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_edge_rank", tuple(index[l] for l in self.edge_level))

    @property
    def size(self) -> int:
        return len(self.levels)

    def rank(self, level) -> int:
        return self._index[level]

    def edge_rank(self, eid: int) -> int:
        return self._edge_rank[eid]

    def nu_of_edge(self, eid: int):
        return self.nu[self._edge_rank[eid]]

    def zero(self) -> tuple:
        return (0,) * len(self.levels)

    def with_edge_levels(self, edge_level: Iterable) -> "ScopeMap":
        return ScopeMap(self.levels, self.nu, tuple(edge_level))

    def with_nu(self, nu: Iterable) -> "ScopeMap":
        return ScopeMap(self.levels, tuple(nu), self.edge_level)


@dataclass(frozen=True)
class DynamicOverlay:
    """Sparse edge id -> increased weight (``inf`` means closed)."""

    changes: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.changes)

    def __contains__(self, eid):
        return eid in self.changes

    def validate(self, network: RoadNetwork) -> None:
        for eid, new in self.changes.items():
            if not (0 <= eid < network.edge_count):
                raise ValidationError(f"unknown edge id {eid}")
            if not new > network.edges[eid].weight:
                raise ValidationError(
                    f"edge {eid}: not a negative change ({new} <= {network.edges[eid].weight})"
                )


def effective_weight(network: RoadNetwork, overlay: DynamicOverlay | None, eid: int):
    if overlay is not None and eid in overlay.changes:
        return overlay.changes[eid]
    return network.edges[eid].weight


def dynamic_weights(network: RoadNetwork, overlay: DynamicOverlay | None) -> list:
    return [effective_weight(network, overlay, i) for i in range(network.edge_count)]


@dataclass(frozen=True)
class Walk:
    source: int
    edges: tuple = ()

    def vertices(self, network: RoadNetwork) -> list[int]:
        out = [self.source]
        for eid in self.edges:
            e = network.edges[eid]
            if e.tail != out[-1]:
                raise ValidationError(f"walk not chain-consistent at edge {eid}")
            out.append(e.head)
        return out

    @property
    def target_is_source(self) -> bool:
        return not self.edges

    def weight(self, weighting) -> float:
        return sum((weighting[e] for e in self.edges), 0)


# --- text formats ---------------------------------------------------------


def _content_lines(stream: TextIO):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def load_network(stream: TextIO | str) -> tuple[RoadNetwork, ScopeMap]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    header = None
    level_rows: list[tuple] = []
    arcs: list[tuple] = []
    for lineno, tok in _content_lines(stream):
        kind = tok[0]
        try:
            if header is None:
                if kind != "p" or len(tok) != 5 or tok[1] != "gsn":
                    raise FormatError("expected header 'p gsn <n> <m> <levels>'", lineno)
                header = tuple(int(t) for t in tok[2:])
                if min(header) < 0:
                    raise FormatError("negative count in header", lineno)
            elif kind == "l":
                if len(tok) != 3:
                    raise FormatError("expected 'l <level> <nu>'", lineno)
                level = parse_number(tok[1])
                if level != INF and not isinstance(level, int):
                    raise FormatError(f"scope level must be an integer or inf: {tok[1]}", lineno)
                nu = parse_number(tok[2])
                if nu < 0:
                    raise FormatError("nu must be non-negative", lineno)
                level_rows.append((level, nu))
            elif kind == "a":
                if len(tok) != 5:
                    raise FormatError("expected 'a <tail> <head> <weight> <level>'", lineno)
                weight = parse_number(tok[3], allow_inf=False)
                level = parse_number(tok[4])
                arcs.append((int(tok[1]), int(tok[2]), weight, level, lineno))
            elif kind == "p":
                raise FormatError("duplicate header", lineno)
            else:
                raise FormatError(f"unknown line type {kind!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc), lineno) from None
    if header is None:
        raise FormatError("missing header")
    n, m, k = header
    if len(level_rows) != k:
        raise ValidationError(f"header declares {k} levels, found {len(level_rows)}")
    if len(arcs) != m:
        raise ValidationError(f"header declares {m} edges, found {len(arcs)}")
    level_rows.sort(key=lambda r: r[0])
    levels = tuple(r[0] for r in level_rows)
    declared = set(levels)
    net = RoadNetwork(n)
    edge_level = []
    for tail, head, weight, level, lineno in arcs:
        if level not in declared:
            raise ValidationError(f"line {lineno}: undeclared scope level {format_number(level)}")
        try:
            net.add_edge(tail, head, weight)
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        edge_level.append(level)
    scope = ScopeMap(levels, tuple(r[1] for r in level_rows), tuple(edge_level))
    return net, scope


def dump_network(network: RoadNetwork, scope: ScopeMap) -> str:
    out = [f"p gsn {network.vertex_count} {network.edge_count} {scope.size}"]
    for lvl, nu in zip(scope.levels, scope.nu):
        out.append(f"l {format_number(lvl)} {format_number(nu)}")
    for e, lvl in zip(network.edges, scope.edge_level):
        out.append(f"a {e.tail} {e.head} {format_number(e.weight)} {format_number(lvl)}")
    return "\n".join(out) + "\n"


def load_overlay(stream: TextIO | str, network: RoadNetwork) -> DynamicOverlay:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    changes = {}
    for lineno, tok in _content_lines(stream):
        if tok[0] != "c" or len(tok) != 3:
            raise FormatError("expected 'c <edge_id> <weight|inf>'", lineno)
        try:
            eid = int(tok[1])
            new = parse_number(tok[2])
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if not (0 <= eid < network.edge_count):
            raise ValidationError(f"line {lineno}: unknown edge id {eid}")
        if eid in changes:
            raise ValidationError(f"line {lineno}: duplicate change for edge {eid}")
        if not new > network.edges[eid].weight:
            raise ValidationError(f"line {lineno}: edge {eid} is not a negative change")
        changes[eid] = new
    return DynamicOverlay(changes)


def dump_overlay(overlay: DynamicOverlay) -> str:
    return "".join(f"c {eid} {format_number(w)}\n" for eid, w in sorted(overlay.changes.items()))
