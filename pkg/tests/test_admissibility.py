from scoperoute.admissibility import (
    add_debt,
    borrow,
    borrowing_ranks,
    check_walk_admissible,
    debt_repayable,
    dominates,
    exhaust_key,
    is_admissible,
    sigma_extend,
    sigma_merge,
)
from scoperoute.network import INF, ScopeMap, Walk

from conftest import d1

SCOPE = ScopeMap((0, 1, INF), (0, 5, INF), (0, 1, INF))  # edge i has level (0, 1, inf)[i]


def test_extend_examples():
    assert sigma_extend((0, 0, 0), INF, 5, SCOPE) == (5, 5, 0)
    assert sigma_extend((5, 5, 0), 0, 3, SCOPE) == (5, 5, 0)
    assert sigma_extend((0, 0, 0), 1, 4, SCOPE) == (4, 0, 0)


def test_admissible_examples():
    assert is_admissible((0, 0, 0), 0, SCOPE)
    assert not is_admissible((7, 6, 0), 1, SCOPE)
    assert is_admissible((7, 6, 0), 2, SCOPE)
    assert is_admissible((99, 99, 0), 2, SCOPE)


def test_merge_examples():
    assert sigma_merge((5, 2, 0), (3, 4, 0)) == (3, 2, 0)
    assert sigma_merge((5, 2, 0), (5, 2, 0)) == (5, 2, 0)
    assert sigma_merge((INF, INF, 0), (1, 0, 0)) == (1, 0, 0)


def test_dominates_and_exhaust_key():
    assert dominates((1, 2, 0), (1, 3, 0)) and not dominates((1, 3, 0), (1, 2, 0))
    assert exhaust_key((7, 6, 0), SCOPE) == (INF, INF, 0)
    assert exhaust_key((0, 5, 0), SCOPE) == (0, 5, 0)


def test_walk_admissibility_d1():
    net, scope = d1(5)
    assert check_walk_admissible(Walk(0, (0, 1, 2)), net, scope, net.weights())
    net, scope = d1(1)
    assert not check_walk_admissible(Walk(0, (0, 1, 2)), net, scope, net.weights())
    assert check_walk_admissible(Walk(0, ()), net, scope, net.weights())
    assert check_walk_admissible(Walk(0, (0,)), net, scope, net.weights())


def test_walk_with_broken_chain_is_rejected():
    net, scope = d1(5)
    assert not check_walk_admissible(Walk(0, (1,)), net, scope, net.weights())


def test_borrow_examples():
    # level-1 edge, detour around a level-inf change
    assert borrow((0, 5, 0), 1, SCOPE, INF) == (True, (0, 0, 0))
    assert borrow((0, 8, 0), 1, SCOPE, INF) == (True, (0, 3, 0))
    assert borrow((0, 11, 0), 1, SCOPE, INF)[0] is False


def test_borrow_keeps_largest_shortfall():
    ok, delta = borrow((0, 7, 0), 1, SCOPE, INF, debt=(0, 3, 0))
    assert ok and delta == (0, 0, 0)
    ok, delta = borrow((0, 9, 0), 1, SCOPE, INF, debt=(0, 3, 0))
    assert ok and add_debt((0, 3, 0), delta) == (0, 4, 0)


def test_borrow_not_above_reset_level_nor_on_level_zero():
    # level-1 edge in a detour around a level-0 change: rank 1 is above the reset level
    assert borrow((0, 6, 0), 1, SCOPE, 0)[0] is False
    # level-0 edge: nu(0) = 0 leaves nothing to lend
    assert borrow((1, 0, 0), 0, SCOPE, INF)[0] is False


def test_borrowing_ranks():
    assert borrowing_ranks(SCOPE, INF) == (1,)
    assert borrowing_ranks(SCOPE, 1) == (1,)
    assert borrowing_ranks(SCOPE, 0) == ()


def test_debt_repayable_examples():
    assert debt_repayable((0, 0, 0), (9, 9, 0), SCOPE)
    assert debt_repayable((0, 3, 0), (0, 2, 0), SCOPE)
    assert not debt_repayable((0, 3, 0), (0, 4, 0), SCOPE)
