"""Sign-reversing involutions that cancel the alternating sums behind three
Mobius functions: compositions (N, +), ordered set partitions (finite sets)
and subsets of a pointed set.

Each involution changes the parity of the number of parts and is defined
on everything except the terms that survive the cancellation.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial

from .combinat import compositions, set_partitions, stirling2
from .simplicial import CheckResult, Report


class CancellationError(ValueError):
    """The argument lies outside the domain of the involution."""


# ---------------------------------------------------------------------------
# compositions as bit strings


def composition_to_bits(parts) -> str:
    """Each part x becomes "1" followed by x-1 zeros."""
    if any(p < 1 for p in parts):
        raise CancellationError(f"parts must be positive: {tuple(parts)}")
    return "".join("1" + "0" * (p - 1) for p in parts)


def bits_to_composition(bits: str) -> tuple:
    if bits and (bits[0] != "1" or set(bits) - {"0", "1"}):
        raise CancellationError(f"not a composition code: {bits!r}")
    starts = [i for i, b in enumerate(bits) if b == "1"] + [len(bits)]
    return tuple(starts[i + 1] - starts[i] for i in range(len(starts) - 1))


def flip_second_bit(parts) -> tuple:
    """(3,2,1,1,1) <-> (1,2,2,1,1,1): toggle whether a part starts at position 2."""
    bits = composition_to_bits(parts)
    if len(bits) < 2:
        raise CancellationError(f"flip_second_bit needs a composition of n >= 2, got {tuple(parts)}")
    return bits_to_composition(bits[0] + ("0" if bits[1] == "1" else "1") + bits[2:])


# ---------------------------------------------------------------------------
# ordered set partitions (surjections n -> k)


def parse_blocks(text: str) -> tuple:
    """"34,1,26,5" -> ((3, 4), (1,), (2, 6), (5,)); single-digit elements only."""
    blocks = tuple(tuple(sorted(int(c) for c in part)) for part in text.split(","))
    _check_blocks(blocks)
    return blocks


def format_blocks(blocks) -> str:
    return "(" + ",".join("".join(map(str, b)) for b in blocks) + ")"


def _check_blocks(blocks):
    seen = set()
    for b in blocks:
        if not b:
            raise CancellationError("blocks must be nonempty")
        if seen & set(b):
            raise CancellationError("blocks must be disjoint")
        seen |= set(b)
    return seen


def surjection_parity_involution(blocks, order=None) -> tuple:
    """Change the number of blocks by one, following the least element
    (in ``order``) that is not alone in the block carrying its own number.

    That element is split off into a new block right after its own, or, if
    it already sits alone, its block is joined to the previous one.  The
    identity surjection (every element alone in its own block) is the one
    fixed configuration and is rejected.
    """
    blocks = [tuple(b) for b in blocks]
    elements = _check_blocks(blocks)
    order = sorted(elements) if order is None else list(order)
    if set(order) != elements or len(order) != len(elements):
        raise CancellationError("order must list each element exactly once")
    rank = {e: i for i, e in enumerate(order)}
    for j, e in enumerate(order):
        if j < len(blocks) and blocks[j] == (e,):
            continue
        b = next(i for i, blk in enumerate(blocks) if e in blk)
        if blocks[b] == (e,):
            merged = tuple(sorted(blocks[b - 1] + (e,), key=rank.__getitem__))
            out = blocks[:b - 1] + [merged] + blocks[b + 1:]
        else:
            rest = tuple(x for x in blocks[b] if x != e)
            out = blocks[:b] + [rest, (e,)] + blocks[b + 1:]
        return tuple(out)
    raise CancellationError("the identity surjection is the fixed point of the involution")


def ordered_set_partitions(elements):
    """All surjections from ``elements`` onto some k, as ordered block tuples."""
    for part in set_partitions(elements):
        for arrangement in permutations(part):
            yield tuple(arrangement)


# ---------------------------------------------------------------------------
# subsets of a pointed set


def pointed_subset_parity(S, s):
    """The involution U -> U xor {s} on subsets of S."""
    S = frozenset(S)
    if s not in S:
        raise CancellationError(f"base point {s!r} is not in the set")

    def involution(U):
        U = frozenset(U)
        if not U <= S:
            raise CancellationError(f"{set(U)} is not a subset of {set(S)}")
        return U ^ {s}
    return involution


def subsets(S):
    S = sorted(S)
    for r in range(len(S) + 1):
        for c in combinations(S, r):
            yield frozenset(c)


# ---------------------------------------------------------------------------
# exhaustive verification


def _line(check, n, label, ok, witness=""):
    return CheckResult(check, n, label, "pass" if ok else "fail", "" if ok else witness)


def _involution_lines(check, n, domain, f, parity):
    """Involution, parity change and equal parity classes on a finite domain."""
    rep = Report()
    bad_inv = next((x for x in domain if f(f(x)) != x), None)
    rep.append(_line(check, n, "involution", bad_inv is None, f"f(f({bad_inv!r})) != itself"))
    bad_par = next((x for x in domain if parity(f(x)) == parity(x)), None)
    rep.append(_line(check, n, "parity flip", bad_par is None, f"{bad_par!r} keeps its parity"))
    even = sum(1 for x in domain if parity(x) == 0)
    odd = len(domain) - even
    rep.append(_line(check, n, "even = odd", even == odd, f"{even} even, {odd} odd"))
    return rep


def verify_compositions(max_n: int = 10) -> Report:
    """flip_second_bit on all compositions of n = 2..max_n, plus the
    alternating count: sum_k (-1)^k #compositions(n, k) is 1, -1, 0, 0, ...
    """
    rep = Report()
    for n in range(2, max_n + 1):
        domain = [c for k in range(1, n + 1) for c in compositions(n, k)]
        rep.extend(_involution_lines("compositions", n, domain, flip_second_bit, lambda c: len(c) % 2))
    for n in range(max_n + 1):
        total = sum((-1) ** k * sum(1 for _ in compositions(n, k)) for k in range(n + 1))
        expected = {0: 1, 1: -1}.get(n, 0)
        rep.append(_line("compositions", n, "alternating count", total == expected, f"{total} != {expected}"))
    return rep


def verify_surjections(max_n: int = 7) -> Report:
    """The block involution on all non-identity surjections of n = 1..max_n,
    plus sum_r (-1)^r r! S(n, r) = (-1)^n."""
    rep = Report()
    for n in range(1, max_n + 1):
        identity = tuple((e,) for e in range(1, n + 1))
        domain = [p for p in ordered_set_partitions(range(1, n + 1)) if p != identity]
        rep.extend(_involution_lines("surjections", n, domain, surjection_parity_involution,
                                     lambda p: len(p) % 2))
    for n in range(max_n + 1):
        total = sum((-1) ** r * factorial(r) * stirling2(n, r) for r in range(n + 1))
        rep.append(_line("surjections", n, "alternating count", total == (-1) ** n, f"{total} != {(-1) ** n}"))
    return rep


def verify_subsets(max_size: int = 6) -> Report:
    """Subset toggling for every base point of S = {1..m}, m = 1..max_size,
    plus the fiber counts #even(S) = #odd(S) + [S empty]."""
    rep = Report()
    for m in range(1, max_size + 1):
        S = range(1, m + 1)
        domain = list(subsets(S))
        for s in S:
            rep.extend(_involution_lines("subsets", m, domain, pointed_subset_parity(S, s),
                                         lambda U: len(U) % 2))
    for m in range(max_size + 1):
        domain = list(subsets(range(1, m + 1)))
        even = sum(1 for U in domain if len(U) % 2 == 0)
        odd = len(domain) - even
        rep.append(_line("subsets", m, "zeta*even = zeta*odd + epsilon", even == odd + (m == 0),
                         f"{even} != {odd} + {int(m == 0)}"))
    return rep


def base_point_dependence(size: int = 2) -> list:
    """Subsets U of {1..size} on which the toggles at two base points disagree.

    A natural choice would commute with relabelling; the disagreement shows
    the bijection depends on the chosen point.
    """
    if size < 2:
        raise CancellationError("need at least two points to compare base points")
    S = range(1, size + 1)
    f, g = pointed_subset_parity(S, 1), pointed_subset_parity(S, 2)
    return [(U, f(U), g(U)) for U in subsets(S) if f(U) != g(U)]


def order_dependence(n: int = 2) -> list:
    """Surjections of {1..n} on which the block involution for the standard
    order and for the reversed order disagree."""
    elements = list(range(1, n + 1))
    identity = tuple((e,) for e in elements)
    reverse = tuple((e,) for e in reversed(elements))
    out = []
    for p in ordered_set_partitions(elements):
        if p in (identity, reverse):
            continue
        a = surjection_parity_involution(p)
        b = surjection_parity_involution(p, order=list(reversed(elements)))
        if _normal(a) != _normal(b):
            out.append((p, a, b))
    return out


def _normal(blocks):
    return tuple(tuple(sorted(b)) for b in blocks)


def verify_all(max_composition: int = 10, max_surjection: int = 7, max_subset: int = 6) -> Report:
    rep = Report()
    rep.extend(verify_compositions(max_composition))
    rep.extend(verify_surjections(max_surjection))
    rep.extend(verify_subsets(max_subset))
    witnesses = base_point_dependence(2)
    rep.append(_line("subsets", 2, "base point dependence", bool(witnesses),
                     "toggles at different base points agree everywhere"))
    return rep


__all__ = [
    "CancellationError", "base_point_dependence", "bits_to_composition", "composition_to_bits",
    "flip_second_bit", "format_blocks", "order_dependence", "ordered_set_partitions", "parse_blocks",
    "pointed_subset_parity", "subsets", "surjection_parity_involution", "verify_all",
    "verify_compositions", "verify_subsets", "verify_surjections",
]
