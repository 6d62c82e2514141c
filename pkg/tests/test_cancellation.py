"""Parity-changing involutions: worked examples, properties, and domain errors."""

from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from decompkit.cancellation import (
    CancellationError, base_point_dependence, bits_to_composition, composition_to_bits, flip_second_bit,
    format_blocks, order_dependence, ordered_set_partitions, parse_blocks, pointed_subset_parity,
    surjection_parity_involution, verify_all,
)


def test_worked_composition_example():
    assert composition_to_bits((3, 2, 1, 1, 1)) == "10010111"
    assert flip_second_bit((3, 2, 1, 1, 1)) == (1, 2, 2, 1, 1, 1)
    assert flip_second_bit((1, 2, 2, 1, 1, 1)) == (3, 2, 1, 1, 1)


def test_worked_surjection_examples():
    a = parse_blocks("34,1,26,5")
    b = surjection_parity_involution(a)
    assert format_blocks(b) == "(134,26,5)"
    assert surjection_parity_involution(b) == a
    assert surjection_parity_involution(((1, 2),)) == ((2,), (1,))
    assert surjection_parity_involution(((2,), (1,))) == ((1, 2),)


compositions = st.lists(st.integers(1, 5), min_size=1, max_size=6).filter(lambda c: sum(c) >= 2)


@settings(max_examples=60, deadline=None)
@given(compositions)
def test_flip_is_parity_changing_involution(c):
    c = tuple(c)
    assert bits_to_composition(composition_to_bits(c)) == c
    d = flip_second_bit(c)
    assert sum(d) == sum(c)
    assert flip_second_bit(d) == c
    assert abs(len(d) - len(c)) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.permutations(range(1, n + 1)),
                                                     st.lists(st.integers(0, n - 1), min_size=n, max_size=n))))
def test_block_involution_on_random_surjections(data):
    n, order, labels = data
    used = sorted(set(labels))
    blocks = tuple(tuple(e for e, lab in zip(range(1, n + 1), labels) if lab == u) for u in used)
    identity = tuple((e,) for e in order)
    if blocks == identity:
        with pytest.raises(CancellationError):
            surjection_parity_involution(blocks, order)
        return
    out = surjection_parity_involution(blocks, order)
    assert abs(len(out) - len(blocks)) == 1
    normal = lambda bs: tuple(tuple(sorted(b)) for b in bs)
    assert normal(surjection_parity_involution(out, order)) == normal(blocks)


def test_subset_toggle():
    f = pointed_subset_parity({1, 2, 3}, 2)
    assert f({1}) == {1, 2}
    assert f(f({1, 3})) == {1, 3}
    with pytest.raises(CancellationError):
        pointed_subset_parity({1, 2}, 5)
    with pytest.raises(CancellationError):
        f({4})


def test_domain_errors():
    with pytest.raises(CancellationError):
        flip_second_bit((1,))
    with pytest.raises(CancellationError):
        composition_to_bits((2, 0))
    with pytest.raises(CancellationError):
        bits_to_composition("0110")
    with pytest.raises(CancellationError):
        parse_blocks("12,2")


def test_ordered_set_partitions_count_surjections():
    # ordered Bell numbers
    assert [sum(1 for _ in ordered_set_partitions(range(n))) for n in range(6)] == [1, 1, 3, 13, 75, 541]


def test_choices_matter():
    assert base_point_dependence(2)
    assert order_dependence(2)
    # the fixed point moves with the order
    for order in permutations((1, 2, 3)):
        identity = ((1,), (2,), (3,))
        if order == (1, 2, 3):
            with pytest.raises(CancellationError):
                surjection_parity_involution(identity, order)
        else:
            assert len(surjection_parity_involution(identity, order)) != 3


def test_exhaustive_verification():
    report = verify_all(8, 6, 5)
    assert report.passed, report.failures()[:2]
