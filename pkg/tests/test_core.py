"""Groupoids, combinatorics and linear algebra over F_q, each against a
second computation that shares no code with the package."""

import json
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from decompkit.combinat import (
    all_perms, big_omega, compositions, divisors, integer_partitions, multinomial, perm_inverse, perm_then,
    set_partitions, stirling2, surjections, weak_compositions,
)
from decompkit.fq import general_linear, mat_inverse, mat_mul, identity_matrix, rref, span, subspaces
from decompkit.groupoid import (
    DiscreteGroupoid, GroupActionGroupoid, GroupoidError, GroupoidFunctor, TableGroupoid, disjoint_union,
    groupoid_from_json, groupoid_to_json, homotopy_fiber, homotopy_pullback, is_equivalence, is_monomorphism,
    product as groupoid_product, skeleton, terminal_groupoid,
)
from decompkit.series import gl_order


def symmetric_action(n, objects):
    """S_n acting on tuples by permuting positions."""
    group = all_perms(n)
    return GroupActionGroupoid(
        objects, group=lambda _x: group, gens=lambda _x: group,
        act=lambda g, x: tuple(x[g.index(i)] for i in range(n)),
        mul=perm_then, inv=perm_inverse, unit=lambda _x: tuple(range(n)))


def z2_table():
    """One object with Z/2 as automorphisms."""
    return TableGroupoid(["*"], {"e": ("*", "*"), "t": ("*", "*")},
                         {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "e"}, {"*": "e"})


# -- groupoids -------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_action_groupoid_cardinality_is_orbit_count_over_group(n):
    objects = list(product((0, 1), repeat=n))
    g = symmetric_action(n, objects)
    assert g.cardinality() == Fraction(len(objects), factorial(n))
    orbits = {tuple(sorted(x)) for x in objects}
    assert len(g.components()) == len(orbits)


def test_automorphism_orders_are_stabilisers():
    objects = list(product((0, 1, 2), repeat=3))
    g = symmetric_action(3, objects)
    for x in objects:
        stab = sum(1 for p in permutations(range(3)) if tuple(x[p[i]] for i in range(3)) == x)
        assert g.aut_order(x) == stab


def test_table_groupoid_detects_bad_composition():
    with pytest.raises(GroupoidError):
        TableGroupoid(["*"], {"e": ("*", "*"), "t": ("*", "*")},
                      {("e", "e"): "e", ("e", "t"): "t", ("t", "e"): "t", ("t", "t"): "t"}, {"*": "e"})


def test_json_round_trip():
    g = z2_table()
    h = groupoid_from_json(groupoid_to_json(g))
    assert h.cardinality() == Fraction(1, 2)
    assert len(h.morphisms()) == 2


def test_json_errors_carry_line_numbers():
    text = json.dumps({"objects": ["a"], "morphisms": [{"id": "e", "src": "a", "tgt": "b"}],
                       "compose": [], "identities": {"a": "e"}}, indent=1)
    with pytest.raises(GroupoidError, match=r"line \d+"):
        groupoid_from_json(text)
    with pytest.raises(GroupoidError, match="invalid JSON"):
        groupoid_from_json("{")


def test_discrete_and_terminal():
    assert DiscreteGroupoid(range(5)).cardinality() == 5
    assert terminal_groupoid().cardinality() == 1


def test_products_and_sums_multiply_and_add():
    g, h = z2_table(), symmetric_action(2, [(0, 1), (1, 0), (0, 0)])
    assert groupoid_product(g, h).cardinality() == g.cardinality() * h.cardinality()
    assert disjoint_union([g, h]).cardinality() == g.cardinality() + h.cardinality()


def test_homotopy_fiber_of_bz2_to_point():
    g = z2_table()
    pt = terminal_groupoid()
    p = GroupoidFunctor(g, pt, lambda _x: "*", lambda _m: ("id", "*"))
    fib = homotopy_fiber(p, "*")
    # fibre of BZ/2 -> 1 is BZ/2 itself
    assert fib.cardinality() == Fraction(1, 2)
    assert not is_monomorphism(p)


def test_homotopy_pullback_cardinality_formula():
    # point -> BZ/2 pulled back along itself is Z/2 as a discrete set
    g, pt = z2_table(), terminal_groupoid()
    name = GroupoidFunctor(pt, g, lambda _x: "*", lambda _m: "e")
    P, _p1, _p2 = homotopy_pullback(name, name)
    assert P.cardinality() == 2
    assert is_monomorphism(GroupoidFunctor(pt, pt, lambda x: x, lambda m: m))


def test_skeleton_is_an_equivalence():
    g = symmetric_action(3, list(product((0, 1), repeat=3)))
    sk, inc = skeleton(g)
    assert len(sk.objects) == 4
    assert is_equivalence(inc)


def test_functor_violations_found():
    g = z2_table()
    bad = GroupoidFunctor(g, g, lambda x: x, lambda _m: "t")
    assert bad.violations()


# -- combinatorics ------------------------------------------------------------------


@pytest.mark.parametrize("n", range(7))
def test_set_partitions_are_bell_numbers(n):
    bell = [1, 1, 2, 5, 15, 52, 203]
    parts = list(set_partitions(range(n)))
    assert len(parts) == bell[n] == len(set(frozenset(map(frozenset, p)) for p in parts))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7))
def test_counts(n, k):
    assert sum(1 for _ in compositions(n, k)) == sum(1 for t in product(range(1, n + 1), repeat=k) if sum(t) == n)
    assert sum(1 for _ in weak_compositions(n, k)) == sum(1 for t in product(range(n + 1), repeat=k) if sum(t) == n)
    if n <= 6 and k <= 5:
        assert stirling2(n, k) * factorial(k) == sum(1 for _ in surjections(n, k))


def test_integer_partitions_and_multinomials():
    assert [sum(1 for _ in integer_partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert multinomial((2, 1, 1)) == 12
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert big_omega(360) == 6


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(5)), st.permutations(range(5)))
def test_permutation_algebra(p, q):
    p, q = tuple(p), tuple(q)
    assert perm_then(p, perm_inverse(p)) == tuple(range(5))
    # perm_then is "p then q" on positions
    assert perm_then(p, q) == tuple(q[p[i]] for i in range(5))


# -- F_q ------------------------------------------------------------------------------


def brute_subspace_count(n, q):
    """Distinct spans of all tuples of at most n vectors."""
    vectors = list(product(range(q), repeat=n))
    seen = set()
    for r in range(n + 1):
        for gens in product(vectors, repeat=r):
            seen.add(span(gens, q) if gens else frozenset({(0,) * n}))
    return len(seen)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (2, 3)])
def test_subspace_enumeration(n, q):
    assert len(subspaces(n, q)) == brute_subspace_count(n, q)


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_gl_order_matches_enumeration(n, q):
    assert len(general_linear(n, q)) == gl_order(n)(q)


def test_inverse_matrices():
    for m in general_linear(2, 3):
        assert mat_mul(m, mat_inverse(m, 3), 3) == identity_matrix(2)


def test_rref_is_canonical():
    assert rref([(1, 1, 0), (0, 1, 1)], 2) == rref([(1, 0, 1), (1, 1, 0)], 2)
    assert rref([(2, 4)], 3) == ((1, 2),)
