"""Enumeration helpers: permutations, set partitions, compositions."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial


def perm_then(p, q):
    """The permutation "p followed by q" on tuples (i -> q[p[i]])."""
    return tuple(q[i] for i in p)


def perm_inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@lru_cache(maxsize=None)
def all_perms(m: int) -> tuple:
    return tuple(permutations(range(m)))


@lru_cache(maxsize=None)
def perm_generators(m: int) -> tuple:
    """A transposition and an m-cycle; together they generate S_m."""
    if m < 2:
        return ()
    swap = (1, 0) + tuple(range(2, m))
    cycle = tuple(range(1, m)) + (0,)
    return (swap, cycle) if m > 2 else (swap,)


def set_partitions(items):
    """All set partitions of a sequence, as tuples of tuples."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield ((first,),) + part
        for i in range(len(part)):
            yield part[:i] + ((first,) + part[i],) + part[i + 1:]


def compositions(n: int, k: int):
    """Compositions of n into k positive parts."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if n < k:
        return
    for cuts in combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(k))


def weak_compositions(n: int, k: int):
    """Compositions of n into k non-negative parts."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in weak_compositions(n - first, k - 1):
            yield (first,) + rest


def surjections(n: int, k: int):
    """Surjections [n] -> [k] as value tuples."""
    for f in product(range(k), repeat=n):
        if len(set(f)) == k:
            yield f


def stirling2(n: int, k: int) -> int:
    return sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1)) // factorial(k)


def multinomial(parts) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def integer_partitions(n: int, largest: int | None = None):
    """Partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_factorization(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def big_omega(n: int) -> int:
    return sum(prime_factorization(n).values())
