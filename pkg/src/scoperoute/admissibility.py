"""Sigma-vector arithmetic, the scope admissibility test, and detour debt.

A sigma vector is a tuple with one slot per scope level (by level rank).
Slot ``r`` holds the weight travelled so far on edges whose level is
strictly above level ``r``; an edge of rank ``r`` may be taken while
``sigma[r] <= nu[r]``.
"""
from __future__ import annotations

from .network import INF, RoadNetwork, ScopeMap, Walk


def sigma_extend(sigma: tuple, edge_level, weight, scope: ScopeMap) -> tuple:
    """Account for travelling ``weight`` on an edge of level ``edge_level``."""
    r = scope.rank(edge_level)
    if weight == 0 or r == 0:
        return sigma
    return tuple(s + weight for s in sigma[:r]) + sigma[r:]


def extend_by_edge(sigma: tuple, eid: int, weight, scope: ScopeMap) -> tuple:
    r = scope.edge_rank(eid)
    if weight == 0 or r == 0:
        return sigma
    return tuple(s + weight for s in sigma[:r]) + sigma[r:]


def is_admissible(sigma: tuple, eid: int, scope: ScopeMap) -> bool:
    r = scope.edge_rank(eid)
    return sigma[r] <= scope.nu[r]


def sigma_merge(a: tuple, b: tuple) -> tuple:
    return tuple(x if x <= y else y for x, y in zip(a, b))


def dominates(a: tuple, b: tuple) -> bool:
    """Component-wise ``a <= b``."""
    return all(x <= y for x, y in zip(a, b))


def exhaust_key(sigma: tuple, scope: ScopeMap) -> tuple:
    """Sigma with every slot past its allowance collapsed to ``inf``.

    Two vectors with the same key admit exactly the same future edges.
    """
    return tuple(INF if s > nu else s for s, nu in zip(sigma, scope.nu))


def check_walk_admissible(walk: Walk, network: RoadNetwork, scope: ScopeMap, weighting) -> bool:
    """Prefix semantics: every edge is admissible w.r.t. the walk's own prefix."""
    sigma = scope.zero()
    at = walk.source
    for eid in walk.edges:
        edge = network.edges[eid]
        if edge.tail != at:
            return False
        if not is_admissible(sigma, eid, scope):
            return False
        sigma = extend_by_edge(sigma, eid, weighting[eid], scope)
        at = edge.head
    return True


# --- detour debt ----------------------------------------------------------


def borrowing_ranks(scope: ScopeMap, reset_level) -> tuple:
    """Ranks on which a detour bypassing an edge of ``reset_level`` may borrow.

    Only finite positive allowances can lend anything (nu(0) = 0 caps the
    debt at zero, nu(inf) never runs out).
    """
    top = scope.rank(reset_level)
    return tuple(r for r in range(top + 1) if 0 < scope.nu[r] < INF)


def borrow(sigma: tuple, eid: int, scope: ScopeMap, reset_level, debt: tuple | None = None):
    """Try to take edge ``eid`` inside a detour, borrowing allowance if needed.

    Returns ``(ok, delta)`` where ``delta`` is the debt increase per rank.
    Debt on a rank is the largest shortfall ``sigma - nu`` seen so far and
    may never exceed ``nu`` itself.
    """
    k = scope.size
    if debt is None:
        debt = (0,) * k
    r = scope.edge_rank(eid)
    zero = (0,) * k
    nu = scope.nu[r]
    if sigma[r] <= nu:
        return True, zero
    if r > scope.rank(reset_level) or not (0 < nu < INF):
        return False, zero
    shortfall = sigma[r] - nu
    if shortfall > nu:
        return False, zero
    delta = [0] * k
    if shortfall > debt[r]:
        delta[r] = shortfall - debt[r]
    return True, tuple(delta)


def add_debt(debt: tuple, delta: tuple) -> tuple:
    return tuple(a + b for a, b in zip(debt, delta))


def debt_repayable(debt: tuple, sigma_since_v: tuple, scope: ScopeMap) -> bool:
    """Debt is repaid in full iff it still fits in nu after the dead branch's run from v."""
    for d, s, nu in zip(debt, sigma_since_v, scope.nu):
        if d > 0 and d + s > nu:
            return False
    return True
