"""Finite vector spaces over F_q: the Waldhausen construction (flags), the
monoidal nerve of direct sums, and the category of linear injections.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import prod

from ..fq import (check_prime, coordinates_in, general_linear, identity_matrix, image, mat_inverse,
                  mat_mul, mat_vec, pivots, quotient_coordinates, rref, subspace_sets, subspaces)
from ..groupoid import GroupActionGroupoid, GroupoidFunctor
from ..nerves import FiniteCategory, MonoidalGroupoidPresentation, monoidal_nerve
from ..oracle import FiberOracle, OracleError, discrete_fiber
from ..simplicial import TruncatedSimplicialGroupoid


def dim_key(n: int) -> str:
    return f"dim={n}"


def parse_dim(key: str) -> int:
    if not key.startswith("dim="):
        raise ValueError(f"not a dimension key: {key!r}")
    n = int(key[4:])
    if n < 0 or dim_key(n) != key:
        raise ValueError(f"not a dimension key: {key!r}")
    return n


def gl_count(n: int, q: int) -> int:
    """|GL_n(F_q)| as the number of ordered bases."""
    return prod(q ** n - q ** i for i in range(n))


class _VectorSpaceOracle(FiberOracle):
    graded = True
    complete = True
    base_is_point = True

    def __init__(self, q: int, max_dim: int):
        super().__init__()
        check_prime(q)
        self.q, self.default_bound = q, max_dim

    def _keys(self, bound):
        return [dim_key(n) for n in range(bound + 1)]

    def _validate(self, key):
        parse_dim(key)
        return True

    def sort_key(self, key):
        return (parse_dim(key),)

    def degree(self, key):
        return parse_dim(key)

    def aut_order(self, key):
        return gl_count(parse_dim(key), self.q)

    def is_degenerate(self, key):
        return parse_dim(key) == 0

    def _fiber(self, r, key):
        return self._enumerate(r, key, strict=False)

    def _nondegenerate_fiber(self, r, key):
        return self._enumerate(r, key, strict=True)


class WaldhausenOracle(_VectorSpaceOracle):
    """Waldhausen construction of vect over F_q.

    An r-simplex over V is a flag 0 <= U_1 <= ... <= U_{r-1} <= V; its
    principal edges are the successive quotients.
    """

    segal = False

    def __init__(self, q: int = 2, max_dim: int = 4):
        super().__init__(q, max_dim)
        self.name = "vect-waldhausen"

    def _enumerate(self, r, key, strict):
        n, q = parse_dim(key), self.q
        if r == 0:
            return discrete_fiber([()] if n == 0 else [], lambda _c: ())
        subs = subspaces(n, q)
        sets = subspace_sets(n, q)
        top = subs[-1]
        flags = []

        def extend(chain):
            last = chain[-1] if chain else ()
            if len(chain) == r - 1:
                if not strict or len(last) < n:
                    flags.append(tuple(chain))
                return
            for w in subs:
                if sets[last] <= sets[w] and not (strict and len(w) == len(last)):
                    if strict and w == top:
                        continue
                    extend(chain + [w])

        if strict and r > n:
            return discrete_fiber([], lambda _c: ())
        extend([])

        def edges(flag):
            dims = [0] + [len(u) for u in flag] + [n]
            return tuple(dim_key(dims[i + 1] - dims[i]) for i in range(r))
        return discrete_fiber(flags, edges)

    def materialize(self, bound, levels):
        bound = min(self.default_bound, 2) if bound is None else bound
        return waldhausen_groupoid(self.q, bound, levels)


class DirectSumOracle(_VectorSpaceOracle):
    """Monoidal nerve of (vect, +): ordered direct-sum decompositions."""

    segal = True
    monoidal = True

    def __init__(self, q: int = 2, max_dim: int = 4):
        super().__init__(q, max_dim)
        self.name = "vect-directsum"
        self.unit_key = dim_key(0)

    def _enumerate(self, r, key, strict):
        n, q = parse_dim(key), self.q
        if r == 0:
            return discrete_fiber([()] if n == 0 else [], lambda _c: ())
        subs = subspaces(n, q)

        @lru_cache(maxsize=None)
        def decompositions(k, partial):
            if k == 1:
                return tuple((w,) for w in subs
                             if len(w) == n - len(partial) and not (strict and not w)
                             and len(rref(partial + w, q)) == n)
            out = []
            for w in subs:
                if strict and not w:
                    continue
                joined = rref(partial + w, q)
                if len(joined) == len(partial) + len(w):
                    out.extend((w,) + rest for rest in decompositions(k - 1, joined))
            return tuple(out)

        return discrete_fiber(decompositions(r, ()), lambda ws: tuple(dim_key(len(w)) for w in ws))

    def segal_gluings(self, a, b):
        return [dim_key(parse_dim(a) + parse_dim(b))]

    def tensor(self, a, b):
        return self.segal_gluings(a, b)[0]

    def materialize(self, bound, levels):
        bound = min(self.default_bound, 2) if bound is None else bound
        return direct_sum_nerve(self.q, bound, levels)


# ---------------------------------------------------------------------------
# materializations


def general_linear_groupoid(q: int, max_dim: int) -> GroupActionGroupoid:
    """Spaces F_q^d (d <= max_dim) and invertible matrices; morphisms (d, g)."""
    return GroupActionGroupoid(range(max_dim + 1), lambda d: general_linear(d, q),
                               lambda d: general_linear(d, q), lambda _g, d: d,
                               lambda g, h: mat_mul(h, g, q), lambda g: mat_inverse(g, q),
                               identity_matrix)


def block_diagonal(a, b) -> tuple:
    m, n = len(a), len(b)
    return (tuple(tuple(row) + (0,) * n for row in a)
            + tuple((0,) * m + tuple(row) for row in b))


def direct_sum_nerve(q: int, max_dim: int, levels: int) -> TruncatedSimplicialGroupoid:
    carrier = general_linear_groupoid(q, max_dim)
    m = MonoidalGroupoidPresentation(carrier, lambda a, b: a + b,
                                     lambda g, h: (g[0] + h[0], block_diagonal(g[1], h[1])), 0,
                                     key_of=dim_key)
    x = monoidal_nerve(m, levels, weight=lambda d: d, bound=max_dim)
    x.name = "vect-directsum"
    return x


def _columns_to_matrix(columns, size):
    return tuple(tuple(col[i] for col in columns) for i in range(size))


def waldhausen_groupoid(q: int, max_dim: int, levels: int) -> TruncatedSimplicialGroupoid:
    """Skeletal Waldhausen construction: level k has objects (m, flag) with
    flag = (U_1 <= ... <= U_{k-1}) in F_q^m and GL_m acting.

    d_0 quotients by U_1 (coordinates on the non-pivot columns), d_k restricts
    to U_{k-1} (pivot coordinates), inner faces forget U_i and degeneracies
    repeat U_i.
    """
    check_prime(q)

    def weak_flags(m, length):
        subs = subspaces(m, q)
        sets = subspace_sets(m, q)
        out = []

        def extend(chain):
            if len(chain) == length:
                out.append(tuple(chain))
                return
            last = chain[-1] if chain else ()
            for w in subs:
                if sets[last] <= sets[w]:
                    extend(chain + [w])
        extend([])
        return out

    def act(g, x):
        m, flag = x
        return (m, tuple(image(g, u, q) for u in flag))

    groupoids = []
    for k in range(levels + 1):
        if k == 0:
            objs = [(0, ())]
        else:
            objs = [(m, flag) for m in range(max_dim + 1) for flag in weak_flags(m, k - 1)]
        groupoids.append(GroupActionGroupoid(
            objs, lambda x: general_linear(x[0], q), lambda x: general_linear(x[0], q), act,
            lambda g, h: mat_mul(h, g, q), lambda g: mat_inverse(g, q), lambda x: identity_matrix(x[0])))

    def full(x):
        m, flag = x
        return [()] + list(flag) + [identity_matrix(m)]

    def quotient(w, u):
        return rref([quotient_coordinates(w, row, q) for row in u], q)

    def restrict(w, u):
        return tuple(coordinates_in(w, row) for row in u)

    def first_face(k):
        def on_obj(x):
            us = full(x)
            w = us[1]
            return (x[0] - len(w), tuple(quotient(w, u) for u in us[2:k]))

        def on_mor(mor):
            x, g = mor
            w = full(x)[1]
            gw = image(g, w, q)
            free = [c for c in range(x[0]) if c not in set(pivots(w))]
            cols = []
            for c in free:
                e = tuple(int(i == c) for i in range(x[0]))
                cols.append(quotient_coordinates(gw, mat_vec(g, e, q), q))
            return (on_obj(x), _columns_to_matrix(cols, len(free)))
        return on_obj, on_mor

    def last_face(k):
        def on_obj(x):
            us = full(x)
            w = us[k - 1]
            return (len(w), tuple(restrict(w, u) for u in us[1:k - 1]))

        def on_mor(mor):
            x, g = mor
            w = full(x)[k - 1]
            gw = image(g, w, q)
            cols = [coordinates_in(gw, mat_vec(g, row, q)) for row in w]
            return (on_obj(x), _columns_to_matrix(cols, len(w)))
        return on_obj, on_mor

    def drop(i):
        def on_obj(x):
            us = full(x)
            del us[i]
            return (x[0], tuple(us[1:-1]))
        return on_obj, lambda mor: (on_obj(mor[0]), mor[1])

    def repeat(k, i):
        def on_obj(x):
            us = full(x) if k else [()]
            us.insert(i, us[i])
            return (x[0], tuple(us[1:-1]))
        return on_obj, lambda mor: (on_obj(mor[0]), mor[1])

    faces, degens = {}, {}
    for k in range(1, levels + 1):
        for i in range(k + 1):
            fo, fm = first_face(k) if i == 0 else last_face(k) if i == k else drop(i)
            faces[(k, i)] = GroupoidFunctor(groupoids[k], groupoids[k - 1], fo, fm, f"d{i}")
    for k in range(levels):
        for i in range(k + 1):
            fo, fm = repeat(k, i)
            degens[(k, i)] = GroupoidFunctor(groupoids[k], groupoids[k + 1], fo, fm, f"s{i}")
    return TruncatedSimplicialGroupoid(groupoids, faces, degens, weight=lambda _n, x: x[0],
                                       weight_bound=max_dim, name="vect-waldhausen",
                                       key_of=lambda x: dim_key(x[0]))


# ---------------------------------------------------------------------------
# linear injections


def injective_matrices(a: int, b: int, q: int):
    """All b x a matrices of rank a (injective maps F^a -> F^b)."""
    if a == 0:
        return [tuple(() for _ in range(b))]
    out = []
    for entries in product(range(q), repeat=a * b):
        m = tuple(tuple(entries[i * a:(i + 1) * a]) for i in range(b))
        if len(rref(list(zip(*m)), q)) == a:
            out.append(m)
    return out


def linear_injections(q: int = 2, max_dim: int = 2) -> FiniteCategory:
    """Spaces F_q^d (d <= max_dim) and injective linear maps.

    An arrow is ``(a, b, matrix)``; composition is "first then second".
    """
    check_prime(q)
    objects = list(range(max_dim + 1))
    arrows = {}
    for a in objects:
        for b in objects[a:]:
            for m in injective_matrices(a, b, q):
                arrows[(a, b, m)] = (a, b)
    by_src = {x: [f for f in arrows if f[0] == x] for x in objects}
    comp = {}
    for f in arrows:
        for g in by_src[f[1]]:
            comp[(f, g)] = (f[0], g[1], _compose_columns(g[2], f[2], f[0], q))
    ids = {x: (x, x, identity_matrix(x)) for x in objects}
    names = {f: f"{f[0]}->{f[1]}:{f[2]}" for f in arrows}
    return FiniteCategory(objects, arrows, comp, ids, validate=False, names=names)


def _compose_columns(g, f, width, q):
    """g after f, keeping the column count ``width`` even for empty products."""
    if width == 0:
        return tuple(() for _ in range(len(g)))
    return mat_mul(g, f, q)


def injection_key(arrow) -> str:
    return f"{arrow[0]}->{arrow[1]}"


def _product(a, b, rows, inner, cols, q):
    """rows x inner times inner x cols, with empty shapes allowed."""
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(inner)) % q for j in range(cols))
                 for i in range(rows))


def retracted_injections(q: int = 2, max_dim: int = 1) -> FiniteCategory:
    """Spaces F_q^d and pairs (i, r) with r after i the identity.

    An arrow is ``(a, b, i, r)`` with i a b x a matrix and r an a x b matrix.
    """
    check_prime(q)
    objects = list(range(max_dim + 1))
    arrows = {}
    for a in objects:
        for b in objects[a:]:
            ident = identity_matrix(a)
            retractions = [tuple(tuple(e[k * b:(k + 1) * b]) for k in range(a))
                           for e in product(range(q), repeat=a * b)]
            for i in injective_matrices(a, b, q):
                for r in retractions:
                    if _product(r, i, a, b, a, q) == ident:
                        arrows[(a, b, i, r)] = (a, b)
    by_src = {x: [f for f in arrows if f[0] == x] for x in objects}
    comp = {}
    for f in arrows:
        a, b = f[0], f[1]
        for g in by_src[b]:
            c = g[1]
            comp[(f, g)] = (a, c, _product(g[2], f[2], c, b, a, q), _product(f[3], g[3], a, b, c, q))
    ids = {x: (x, x, identity_matrix(x), identity_matrix(x)) for x in objects}
    return FiniteCategory(objects, arrows, comp, ids, validate=False,
                          names={f: f"{f[0]}->{f[1]}" for f in arrows})


__all__ = [
    "DirectSumOracle", "WaldhausenOracle", "block_diagonal", "dim_key", "direct_sum_nerve",
    "general_linear_groupoid", "gl_count", "injection_key", "injective_matrices",
    "linear_injections", "parse_dim", "retracted_injections", "waldhausen_groupoid",
]
