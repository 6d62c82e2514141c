"""Spaces coming from monoids: (N,+), its powers and symmetric quotient,
the multiplicative monoid of positive integers, posets of intervals, finite
sets under disjoint union, and the one-object groupoid BZ/2.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from ..combinat import (all_perms, big_omega, divisors, perm_generators, perm_inverse,
                        perm_then)
from ..groupoid import GroupActionGroupoid, GroupoidFunctor
from ..nerves import (FiniteCategory, MonoidalGroupoidPresentation, discrete_monoid,
                      monoidal_nerve)
from ..oracle import CategoryNerveOracle, FiberOracle, OracleError, SimplicialOracle, discrete_fiber
from ..simplicial import SimplicialMap, TruncatedSimplicialGroupoid


def vector_key(v) -> str:
    return "(" + ",".join(str(a) for a in v) + ")"


def parse_vector(key: str, rank: int) -> tuple:
    if not (key.startswith("(") and key.endswith(")")):
        raise ValueError(f"not a vector key: {key!r}")
    parts = tuple(int(a) for a in key[1:-1].split(","))
    if len(parts) != rank or any(a < 0 for a in parts) or vector_key(parts) != key:
        raise ValueError(f"not a vector of rank {rank}: {key!r}")
    return parts


def _weak_splits(n, r):
    """All r-tuples of naturals summing to n."""
    if r == 0:
        return [()] if n == 0 else []
    if r == 1:
        return [(n,)]
    return [(a,) + rest for a in range(n + 1) for rest in _weak_splits(n - a, r - 1)]


class AdditiveMonoidOracle(FiberOracle):
    """Strict nerve of (N^rank, +); rank 1 uses plain integer keys."""

    graded = True
    segal = True
    monoidal = True
    base_is_point = True

    def __init__(self, rank: int = 1, max_degree: int = 8, name: str = ""):
        super().__init__()
        if rank < 1:
            raise OracleError("rank must be at least 1")
        self.rank, self.default_bound = rank, max_degree
        self.name = name or ("nat-plus" if rank == 1 else "nat-power")
        self.unit_key = self.key((0,) * rank)

    def key(self, v) -> str:
        return str(v[0]) if self.rank == 1 else vector_key(v)

    def vector(self, key) -> tuple:
        if self.rank == 1:
            n = int(key)
            if n < 0 or str(n) != key:
                raise ValueError(key)
            return (n,)
        return parse_vector(key, self.rank)

    def _keys(self, bound):
        return [self.key(v) for v in product(range(bound + 1), repeat=self.rank) if sum(v) <= bound]

    def _validate(self, key):
        self.vector(key)
        return True

    def sort_key(self, key):
        v = self.vector(key)
        return (sum(v), v)

    def degree(self, key):
        return sum(self.vector(key))

    def aut_order(self, key):
        self.check_key(key)
        return 1

    def is_degenerate(self, key):
        return self.degree(key) == 0

    def _fiber(self, n, key):
        v = self.vector(key)
        if n == 0:
            return discrete_fiber([()] if sum(v) == 0 else [], lambda _c: ())
        per_coord = [_weak_splits(a, n) for a in v]
        items = [tuple(zip(*choice)) for choice in product(*per_coord)]
        return discrete_fiber(items, lambda parts: tuple(self.key(p) for p in parts))

    def segal_gluings(self, a, b):
        va, vb = self.vector(a), self.vector(b)
        return [self.key(tuple(x + y for x, y in zip(va, vb)))]

    def tensor(self, a, b):
        return self.segal_gluings(a, b)[0]

    def materialize(self, bound, levels):
        bound = self.default_bound if bound is None else bound
        elements = [v for v in product(range(bound + 1), repeat=self.rank) if sum(v) <= bound]
        m = discrete_monoid(elements, lambda x, y: tuple(a + b for a, b in zip(x, y)),
                            (0,) * self.rank, key_of=self.key)
        x = monoidal_nerve(m, levels, weight=sum, bound=bound)
        x.name = self.name
        return x


def nat_leq(max_degree: int = 8) -> CategoryNerveOracle:
    """Nerve of the poset (N, <=) on 0..max_degree; keys "(a,b)" for a <= b."""
    cat = FiniteCategory.from_poset(range(max_degree + 1), lambda a, b: a <= b)
    cat.names = {ab: vector_key(ab) for ab in cat.arrows}
    oracle = CategoryNerveOracle(cat, "nat-leq", degree=lambda ab: ab[1] - ab[0])
    oracle.default_bound = max_degree
    return oracle


# ---------------------------------------------------------------------------
# (N^2, +) modulo the swap


def _swap_orbit_key(v) -> str:
    return vector_key(min(v, v[::-1]))


def _swap(g, v):
    return v if g == (0, 1) else v[::-1]


def symmetric_quotient_groupoid(bound: int, levels: int) -> TruncatedSimplicialGroupoid:
    """Homotopy quotient of the nerve of (N^2, +) by S_2 acting diagonally.

    Level n is the action groupoid on n-tuples of pairs with total degree
    <= bound; faces and degeneracies are those of the nerve.
    """
    def objects(n):
        return [xs for xs in product(_pairs(bound), repeat=n)
                if sum(sum(v) for v in xs) <= bound]

    def act(g, xs):
        return tuple(_swap(g, v) for v in xs)

    groupoids = [GroupActionGroupoid(objects(n), lambda _x: all_perms(2), lambda _x: perm_generators(2),
                                     act, perm_then, perm_inverse, lambda _x: (0, 1))
                 for n in range(levels + 1)]

    def add(u, v):
        return (u[0] + v[0], u[1] + v[1])

    def face(n, i):
        if i == 0:
            return lambda xs: xs[1:]
        if i == n:
            return lambda xs: xs[:-1]
        return lambda xs: xs[:i - 1] + (add(xs[i - 1], xs[i]),) + xs[i + 1:]

    faces, degens = {}, {}
    for n in range(1, levels + 1):
        for i in range(n + 1):
            f = face(n, i)
            faces[(n, i)] = GroupoidFunctor(groupoids[n], groupoids[n - 1], f,
                                            lambda m, f=f: (f(m[0]), m[1]), f"d{i}")
    for n in range(levels):
        for i in range(n + 1):
            s = (lambda xs, i=i: xs[:i] + ((0, 0),) + xs[i:])
            degens[(n, i)] = GroupoidFunctor(groupoids[n], groupoids[n + 1], s,
                                             lambda m, s=s: (s(m[0]), m[1]), f"s{i}")
    return TruncatedSimplicialGroupoid(groupoids, faces, degens,
                                       weight=lambda _n, xs: sum(sum(v) for v in xs),
                                       weight_bound=bound, name="sym-quotient",
                                       key_of=lambda xs: _swap_orbit_key(xs[0]))


def _pairs(bound):
    return [(a, b) for a in range(bound + 1) for b in range(bound + 1 - a)]


def symmetric_quotient(max_degree: int = 4, levels: int | None = None) -> SimplicialOracle:
    """Oracle on the materialized quotient; by default enough levels for
    every simplex of the window (a degree-d element has length at most d)."""
    levels = max(max_degree, 3) if levels is None else levels
    x = symmetric_quotient_groupoid(max_degree, levels)

    def gluings(a, b):
        va, vb = parse_vector(a, 2), parse_vector(b, 2)
        return [_swap_orbit_key((va[0] + w[0], va[1] + w[1])) for w in (vb, vb[::-1])]

    degree = lambda k: sum(parse_vector(k, 2))
    oracle = SimplicialOracle(x, gluings=gluings, name="sym-quotient", length_bound=degree, unit_key="(0,0)")
    oracle.default_bound = max_degree
    return oracle


def quotient_map(bound: int, levels: int):
    """The CULF map from the nerve of (N^2, +) to its symmetric quotient."""
    source = AdditiveMonoidOracle(2, bound).materialize(bound, levels)
    target = symmetric_quotient_groupoid(bound, levels)
    functors = [GroupoidFunctor(source.level(n), target.level(n), lambda xs: xs,
                                lambda m: (tuple(e[1] for e in m), (0, 1)), f"q{n}")
                for n in range(levels + 1)]
    return SimplicialMap(source, target, functors, "quotient")


# ---------------------------------------------------------------------------
# multiplicative monoid and divisibility


def _ordered_factorizations(n, r):
    if r == 0:
        return [()] if n == 1 else []
    if r == 1:
        return [(n,)]
    return [(d,) + rest for d in divisors(n) for rest in _ordered_factorizations(n // d, r - 1)]


def multiplicative_merge(wx, wy, wc):
    return Fraction(wx * wy, wc)


class DivisibilityOracle(FiberOracle):
    """Strict nerve of the multiplicative monoid of positive integers."""

    graded = True
    segal = True
    monoidal = False
    base_is_point = True

    def __init__(self, max_n: int = 60):
        super().__init__()
        self.name, self.default_bound = "divisibility", max_n

    def _keys(self, bound):
        return [str(n) for n in range(1, bound + 1)]

    def _validate(self, key):
        n = int(key)
        return n >= 1 and str(n) == key

    def sort_key(self, key):
        return (int(key),)

    def degree(self, key):
        return big_omega(int(key))

    def aut_order(self, key):
        self.check_key(key)
        return 1

    def is_degenerate(self, key):
        self.check_key(key)
        return key == "1"

    def _fiber(self, n, key):
        return discrete_fiber(_ordered_factorizations(int(key), n), lambda fs: tuple(str(d) for d in fs))

    def segal_gluings(self, a, b):
        return [str(int(a) * int(b))]

    def materialize(self, bound, levels):
        bound = 12 if bound is None else bound
        m = discrete_monoid(range(1, bound + 1), lambda x, y: x * y, 1, key_of=str)
        x = monoidal_nerve(m, levels, weight=lambda v: v, bound=bound, merge=multiplicative_merge)
        x.name = self.name
        return x


def divisibility_poset(max_n: int = 60) -> CategoryNerveOracle:
    """Nerve of the divisibility poset on 1..max_n; keys "(d,n)" for d | n."""
    cat = FiniteCategory.from_poset(range(1, max_n + 1), lambda a, b: b % a == 0)
    cat.names = {ab: vector_key(ab) for ab in cat.arrows}
    oracle = CategoryNerveOracle(cat, "divisibility-poset", degree=lambda ab: big_omega(ab[1] // ab[0]))
    oracle.default_bound = max_n
    return oracle


# ---------------------------------------------------------------------------
# monoidal groupoids


def symmetric_groupoid(max_size: int) -> GroupActionGroupoid:
    """Finite sets [0..max_size] and bijections; morphisms (n, permutation)."""
    return GroupActionGroupoid(range(max_size + 1), all_perms, perm_generators, lambda _g, n: n,
                               perm_then, perm_inverse, lambda n: tuple(range(n)))


def block_sum(p, q):
    return tuple(p) + tuple(len(p) + i for i in q)


def finite_sets_under_sum(max_size: int) -> MonoidalGroupoidPresentation:
    return MonoidalGroupoidPresentation(
        symmetric_groupoid(max_size), lambda a, b: a + b,
        lambda m, n: (m[0] + n[0], block_sum(m[1], n[1])), 0, key_of=str)


def finite_sets_nerve(max_size: int, levels: int) -> TruncatedSimplicialGroupoid:
    """Monoidal nerve of finite sets and bijections under disjoint union."""
    x = monoidal_nerve(finite_sets_under_sum(max_size), levels, weight=lambda n: n, bound=max_size)
    x.name = "b-species"
    return x


def cyclic_two_groupoid() -> GroupActionGroupoid:
    return GroupActionGroupoid(["*"], lambda _x: (0, 1), lambda _x: (1,), lambda _g, x: x,
                               lambda g, h: (g + h) % 2, lambda g: g, lambda _x: 0)


def bz2_nerve(levels: int = 4) -> TruncatedSimplicialGroupoid:
    """Monoidal nerve of BZ/2: a decomposition space that is not complete."""
    m = MonoidalGroupoidPresentation(cyclic_two_groupoid(), lambda a, b: "*",
                                     lambda m, n: ("*", (m[1] + n[1]) % 2), "*", key_of=str)
    x = monoidal_nerve(m, levels)
    x.name = "bg-negative"
    return x


def bz2_oracle(levels: int = 4) -> SimplicialOracle:
    return SimplicialOracle(bz2_nerve(levels), name="bg-negative", gluings=lambda a, b: ["*"])




# ---------------------------------------------------------------------------
# arithmetic product of species


def _uniform_tuples(n, factors):
    """Tuples of partitions of [n] (as block labels) realizing [n] = prod [m_i]."""
    strides = []
    acc = 1
    for m in reversed(factors):
        strides.append(acc)
        acc *= m
    strides.reverse()
    found = set()
    for sigma in all_perms(n):
        parts = []
        for m, stride in zip(factors, strides):
            coord = [0] * n
            for t, e in enumerate(sigma):
                coord[e] = (t // stride) % m
            parts.append(_relabel_blocks(coord))
        found.add(tuple(parts))
    return sorted(found)


def _relabel_blocks(coord):
    seen = {}
    return tuple(seen.setdefault(c, len(seen)) for c in coord)


class ArithmeticSpeciesOracle(FiberOracle):
    """Monoidal nerve of finite sets under cartesian product.

    An r-simplex over a set S of size N is an r-tuple of uniform partitions
    of S whose blocks realize S as the product of the block sets.
    """

    graded = True
    segal = True
    monoidal = False
    base_is_point = True

    def __init__(self, max_n: int = 6):
        super().__init__()
        self.name, self.default_bound = "arith-species", max_n

    def _keys(self, bound):
        return [str(n) for n in range(1, bound + 1)]

    def _validate(self, key):
        n = int(key)
        return n >= 1 and str(n) == key

    def sort_key(self, key):
        return (int(key),)

    def degree(self, key):
        return big_omega(int(key))

    def aut_order(self, key):
        self.check_key(key)
        return len(all_perms(int(key)))

    def is_degenerate(self, key):
        self.check_key(key)
        return key == "1"

    def _enumerate(self, r, key, strict):
        n = int(key)
        items = []
        for factors in _ordered_factorizations(n, r):
            if strict and 1 in factors:
                continue
            items.extend(_uniform_tuples(n, factors))
        return discrete_fiber(items, lambda parts: tuple(str(len(set(p))) for p in parts))

    def _fiber(self, r, key):
        return self._enumerate(r, key, False)

    def _nondegenerate_fiber(self, r, key):
        return self._enumerate(r, key, True)

    def segal_gluings(self, a, b):
        return [str(int(a) * int(b))]

    def materialize(self, bound, levels):
        bound = 4 if bound is None else bound
        x = monoidal_nerve(finite_sets_under_product(bound), levels, weight=lambda v: v, bound=bound,
                           merge=multiplicative_merge)
        x.name = self.name
        return x


def product_perm(p, q):
    """The bijection of [m] x [n] = [mn] (lexicographic) induced by p and q."""
    n = len(q)
    return tuple(p[i] * n + q[j] for i in range(len(p)) for j in range(n))


def finite_sets_under_product(max_size: int) -> MonoidalGroupoidPresentation:
    carrier = GroupActionGroupoid(range(1, max_size + 1), all_perms, perm_generators, lambda _g, n: n,
                                  perm_then, perm_inverse, lambda n: tuple(range(n)))
    return MonoidalGroupoidPresentation(carrier, lambda a, b: a * b,
                                        lambda m, n: (m[0] * n[0], product_perm(m[1], n[1])), 1,
                                        key_of=str)


__all__ = [
    "AdditiveMonoidOracle", "DivisibilityOracle", "bz2_nerve", "bz2_oracle", "divisibility_poset",
    "finite_sets_nerve", "finite_sets_under_sum", "multiplicative_merge", "nat_leq", "parse_vector",
    "quotient_map", "symmetric_groupoid", "symmetric_quotient", "symmetric_quotient_groupoid",
    "vector_key", "ArithmeticSpeciesOracle", "finite_sets_under_product",
]
