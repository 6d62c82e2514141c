"""Comultiplication, convolution and Mobius inversion against brute force."""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from decompkit.gallery import build
from decompkit.incidence import (
    IncidenceError, IncidenceFunction, MobiusConditionError, check_coassociativity, check_mobius_inversion,
    comultiplication_row, comultiply, comultiply_terms, convolve, counit, delta_function, epsilon, length,
    mobius, mobius_function, mobius_via_interpolation, numeric_zeta_inverse, phi, section_coefficient,
    section_coefficient_segal, zeta, zeta_polynomial, zeta_polynomial_expansion,
)


@pytest.fixture(scope="module")
def nat():
    return build("nat-plus", max_degree=8).oracle


@pytest.fixture(scope="module")
def sets():
    return build("b-species", max_size=5).oracle


# -- brute-force references -------------------------------------------------


def brute_mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def graph_canon(m, edges):
    best = None
    for g in permutations(range(m)):
        form = tuple(sorted(tuple(sorted((g[i], g[j]))) for i, j in edges))
        best = form if best is None or form < best else best
    return f"V={m};E=" + ",".join(f"{i}-{j}" for i, j in best)


def parse_graph(key):
    head, tail = key.split(";")
    m = int(head[2:])
    edges = [tuple(int(v) for v in e.split("-")) for e in tail[2:].split(",") if e]
    return m, edges


def induced(edges, subset):
    pos = {v: i for i, v in enumerate(sorted(subset))}
    return [(pos[i], pos[j]) for i, j in edges if i in pos and j in pos]


def f2_subspaces(n):
    """All subspaces of F_2^n as frozensets of vectors: subsets closed under xor."""
    vectors = list(product((0, 1), repeat=n))
    zero = vectors[0]
    out = set()
    # every subspace is spanned by at most n vectors
    for r in range(n + 1):
        for gens in combinations(vectors[1:], r):
            span = {zero}
            for g in gens:
                span |= {tuple((a + b) % 2 for a, b in zip(v, g)) for v in span}
            out.add(frozenset(span))
    return out


def dim_of(space):
    return len(space).bit_length() - 1


# -- comultiplication ----------------------------------------------------------


def test_nat_plus_splits_every_way(nat):
    for n in range(9):
        row = comultiplication_row(nat, str(n))
        assert row == {(str(a), str(n - a)): 1 for a in range(n + 1)}


def test_finite_sets_binomials(sets):
    for n in range(6):
        row = comultiplication_row(sets, str(n))
        expected = {(str(a), str(n - a)): sum(1 for _ in combinations(range(n), a)) for a in range(n + 1)}
        assert row == expected


def test_graph_coefficients_count_vertex_subsets():
    o = build("schmitt-graphs", max_vertices=4).oracle
    for key in o.keys():
        m, edges = parse_graph(key)
        expected = {}
        for r in range(m + 1):
            for u in combinations(range(m), r):
                rest = [v for v in range(m) if v not in u]
                ab = (graph_canon(len(u), induced(edges, u)), graph_canon(len(rest), induced(edges, rest)))
                expected[ab] = expected.get(ab, 0) + 1
        assert comultiplication_row(o, key) == expected, key


def test_divisibility_splits_into_divisor_pairs():
    o = build("divisibility", max_n=60).oracle
    for n in range(1, 61):
        expected = {(str(d), str(n // d)): 1 for d in range(1, n + 1) if n % d == 0}
        assert comultiplication_row(o, str(n)) == expected


def test_flag_coefficients_are_subspace_counts():
    o = build("vect-waldhausen", max_dim=3, q=2).oracle
    subs = f2_subspaces(3)
    for n in range(4):
        # subspaces of F_2^n sit inside F_2^3 as those supported on the first n coordinates
        ambient = [s for s in subs if all(v[n:] == (0,) * (3 - n) for v in s)]
        for k in range(n + 1):
            count = sum(1 for s in ambient if dim_of(s) == k)
            assert section_coefficient(o, f"dim={n}", f"dim={k}", f"dim={n - k}") == count


def test_direct_sum_coefficients_count_complementary_pairs():
    o = build("vect-directsum", max_dim=3, q=2).oracle
    subs = list(f2_subspaces(3))
    for k in range(4):
        pairs = sum(1 for u in subs for w in subs
                    if dim_of(u) == k and dim_of(w) == 3 - k and len(u & w) == 1)
        assert section_coefficient(o, "dim=3", f"dim={k}", f"dim={3 - k}") == pairs


def test_segal_closed_form_matches_fiber(sets):
    for n in range(5):
        for a in range(n + 1):
            f, x, y = str(n), str(a), str(n - a)
            assert section_coefficient_segal(sets, x, y, f) == section_coefficient(sets, f, x, y)


def test_terms_refine_the_aggregated_row():
    o = build("bck-forests", max_nodes=3).oracle
    for key in o.keys():
        total = {}
        for a, b, w in comultiply_terms(o, key):
            total[(a, b)] = total.get((a, b), 0) + w
        assert total == dict(comultiply(o, key))


def test_comultiply_is_sorted(nat):
    row = comultiply(nat, "4")
    assert [ab for ab, _ in row] == [(str(a), str(4 - a)) for a in range(5)]


def test_unknown_key_rejected(nat):
    with pytest.raises(Exception):
        comultiply(nat, "banana")


# -- counit and coassociativity -------------------------------------------------


def test_counit_values(nat):
    assert counit(nat, "0") == 1
    assert all(counit(nat, str(n)) == 0 for n in range(1, 9))


def test_counit_on_a_point_base_is_aut_order():
    o = build("bg-negative").oracle
    unit = next(k for k in o.keys() if o.is_degenerate(k))
    assert counit(o, unit) == o.aut_order(unit)


@pytest.mark.parametrize("name", ["nat-plus", "b-species", "divisibility", "schmitt-graphs", "fdb-surjections"])
def test_coassociative(name):
    assert check_coassociativity(build(name).oracle).passed


# -- convolution -----------------------------------------------------------------


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=30, deadline=None)
@given(st.lists(fractions, min_size=27, max_size=27))
def test_convolution_associative_and_unital(values):
    o = build("nat-plus", max_degree=8).oracle
    w = [str(n) for n in range(9)]
    f, g, h = (IncidenceFunction(o, w, dict(zip(w, values[9 * i:9 * i + 9]))) for i in range(3))
    assert convolve(o, convolve(o, f, g), h) == convolve(o, f, convolve(o, g, h))
    assert convolve(o, epsilon(o, w), f) == f == convolve(o, f, epsilon(o, w))


def test_convolution_on_nat_is_cauchy_product(nat):
    w = [str(n) for n in range(9)]
    f = IncidenceFunction(nat, w, lambda k: int(k) + 1)
    g = IncidenceFunction(nat, w, lambda k: 2 ** int(k))
    h = convolve(nat, f, g)
    for n in range(9):
        assert h(str(n)) == sum((a + 1) * 2 ** (n - a) for a in range(n + 1))


def test_window_must_be_closed(nat):
    w = ["0", "2"]
    with pytest.raises(IncidenceError):
        convolve(nat, zeta(nat, w), zeta(nat, w))


def test_delta_function_is_dual_basis(nat):
    d = delta_function(nat, "3")
    assert [d(str(n)) for n in range(9)] == [0, 0, 0, 1, 0, 0, 0, 0, 0]


# -- Mobius ----------------------------------------------------------------------


def test_mobius_on_nat(nat):
    assert [mobius(nat, str(n)) for n in range(9)] == [1, -1] + [0] * 7


def test_mobius_on_finite_sets(sets):
    assert [mobius(sets, str(n)) for n in range(6)] == [(-1) ** n for n in range(6)]


def test_mobius_on_divisibility_is_classical():
    o = build("divisibility", max_n=120).oracle
    assert all(mobius(o, str(n)) == brute_mobius(n) for n in range(1, 121))


def test_mobius_on_flags_q2():
    o = build("vect-waldhausen", max_dim=4, q=2).oracle
    assert [mobius(o, f"dim={n}") for n in range(5)] == [(-1) ** n * 2 ** comb(n, 2) for n in range(5)]


@pytest.mark.parametrize("name", ["nat-plus", "b-species", "divisibility", "posets", "bck-forests"])
def test_mobius_inverts_zeta(name):
    assert check_mobius_inversion(build(name).oracle).passed


def test_three_routes_to_mobius_agree():
    o = build("fdb-surjections", max_size=5).oracle
    numeric = numeric_zeta_inverse(o)
    for key in o.keys():
        assert mobius(o, key) == mobius_via_interpolation(o, key) == numeric(key)


def test_leinster_is_not_mobius():
    o = build("leinster").oracle
    with pytest.raises(MobiusConditionError, match="not locally finite length up to bound 10"):
        mobius_function(o)
    # the inverse still exists
    inv = numeric_zeta_inverse(o)
    assert convolve(o, zeta(o), inv) == epsilon(o)


def test_phi_needs_complete_space():
    o = build("bg-negative").oracle
    with pytest.raises(IncidenceError):
        phi(o, 1, o.keys()[0])


def test_length_on_nat(nat):
    assert [length(nat, str(n)) for n in range(6)] == [0, 1, 2, 3, 4, 5]


# -- zeta polynomials ---------------------------------------------------------------


def test_zeta_polynomial_counts_weak_compositions(nat):
    for n in range(6):
        for r in range(1, 5):
            brute = sum(1 for parts in product(range(n + 1), repeat=r) if sum(parts) == n)
            assert zeta_polynomial(nat, str(n), r) == brute


def test_zeta_polynomial_on_sets_counts_maps(sets):
    # r-simplices over an n-set are maps n -> r
    for n in range(5):
        for r in range(1, 4):
            assert zeta_polynomial(sets, str(n), r) == r ** n


def test_expansion_agrees_at_nonnegative_r(sets):
    for n in range(5):
        for r in range(5):
            assert zeta_polynomial_expansion(sets, str(n), r) == zeta_polynomial(sets, str(n), r)


def test_negative_r_needs_expansion(nat):
    with pytest.raises(IncidenceError):
        zeta_polynomial(nat, "2", -1)


def test_values_are_fractions(sets):
    assert isinstance(mobius(sets, "3"), Fraction)
