"""Monoidal products as simplicial maps X x X -> X.

The product space is windowed: a pair of simplices is kept when its
product still lies in the (size-bounded) target.  ``check_tensor_culf``
first checks strict simplicial commutation, then runs the CULF squares.
"""

from __future__ import annotations

from collections import defaultdict

from ..groupoid import GroupoidFunctor, ProductGroupoid
from ..simplicial import CheckResult, Report, SimplicialMap, TruncatedSimplicialGroupoid, check_culf
from .linear import block_diagonal, direct_sum_nerve
from .monoids import block_sum


def _pairs(objs, keep, size=None, bound=None):
    if size is None or bound is None:
        return [(a, b) for a in objs for b in objs if keep(a, b)]
    by_size = defaultdict(list)
    for a in objs:
        by_size[size(a)].append(a)
    out = []
    for sa, As in sorted(by_size.items()):
        for sb, Bs in sorted(by_size.items()):
            if sa + sb <= bound:
                out.extend((a, b) for a in As for b in Bs if keep(a, b))
    return out


def tensor_map(x: TruncatedSimplicialGroupoid, on_obj, on_mor, name: str = "tensor",
               size=None, bound=None) -> SimplicialMap:
    """The map (X x X)_n -> X_n given levelwise by ``on_obj(n, a, b)`` and
    ``on_mor(n, f, g)``, on the pairs whose product stays in X.

    ``size(n, a)`` is an additive size with ``bound`` the largest value in
    X; it only prunes the search for pairs.  The weight of X is used when
    neither is given.
    """
    if size is None and x.weight is not None and x.weight_bound is not None:
        size, bound = x.weight, x.weight_bound
    levels = []
    for n, lv in enumerate(x.levels):
        keep = lambda a, b, n=n, lv=lv: lv.has_object(on_obj(n, a, b))
        sz = None if size is None else (lambda a, n=n: size(n, a))
        levels.append(ProductGroupoid([lv, lv], _pairs(lv.objects, keep, sz, bound)))

    def both(F):
        return (lambda ab: (F.obj(ab[0]), F.obj(ab[1])), lambda fg: (F.mor(fg[0]), F.mor(fg[1])))

    faces = {}
    for (n, i), F in x.faces.items():
        fo, fm = both(F)
        faces[(n, i)] = GroupoidFunctor(levels[n], levels[n - 1], fo, fm, f"d{i}")
    degens = {}
    for (n, i), F in x.degeneracies.items():
        fo, fm = both(F)
        degens[(n, i)] = GroupoidFunctor(levels[n], levels[n + 1], fo, fm, f"s{i}")
    weight = None
    if x.weight is not None:
        weight = lambda n, ab: x.weight(n, on_obj(n, *ab))
    square = TruncatedSimplicialGroupoid(levels, faces, degens, weight, x.weight_bound, x.weight_merge,
                                         name=f"{x.name} x {x.name}")
    functors = [GroupoidFunctor(levels[n], x.level(n), lambda ab, n=n: on_obj(n, *ab),
                                lambda fg, n=n: on_mor(n, *fg), f"{name}_{n}")
                for n in range(len(levels))]
    return SimplicialMap(square, x, functors, name)


# ---------------------------------------------------------------------------
# models


def species_tensor(x: TruncatedSimplicialGroupoid, union) -> SimplicialMap:
    """Disjoint union on a species materialization: objects ``(m, s, parts)``
    and morphisms ``(object, permutation)``."""
    def on_obj(_n, a, b):
        return (a[0] + b[0], union(a[1], b[1]), a[2] + b[2])
    return tensor_map(x, on_obj, lambda n, f, g: (on_obj(n, f[0], g[0]), block_sum(f[1], g[1])),
                      "disjoint union")


def map_sum(f, g):
    """Sum of arrows (a, b, map) between standard finite sets."""
    return (f[0] + g[0], f[1] + g[1], tuple(f[2]) + tuple(f[1] + v for v in g[2]))


def _chain_sum(a, b):
    return (tuple(u + v for u, v in zip(a[0], b[0])), tuple(map_sum(f, g) for f, g in zip(a[1], b[1])))


def _largest_vertex(x):
    return max(c[0][0] for c in x.level(0).objects)


def fat_nerve_sum(x: TruncatedSimplicialGroupoid) -> SimplicialMap:
    """Disjoint union on the fat nerve of finite sets and surjections; the
    isos of a morphism are summed vertex by vertex.  Vertex 0 is the
    largest set of a chain of surjections."""
    return tensor_map(x, lambda _n, a, b: _chain_sum(a, b),
                      lambda _n, f, g: (_chain_sum(f[0], g[0]), tuple(map_sum(u, v) for u, v in zip(f[1], g[1]))),
                      "disjoint union", size=lambda _n, c: c[0][0], bound=_largest_vertex(x))


def nerve_sum(x: TruncatedSimplicialGroupoid) -> SimplicialMap:
    """Ordinal sum on the strict nerve of finite ordinals and monotone surjections."""
    return tensor_map(x, lambda _n, a, b: _chain_sum(a, b),
                      lambda _n, f, g: ("id", _chain_sum(f[1], g[1])), "ordinal sum",
                      size=lambda _n, c: c[0][0], bound=_largest_vertex(x))


def monoidal_nerve_tensor(x: TruncatedSimplicialGroupoid, tensor_obj, tensor_mor, name: str) -> SimplicialMap:
    """Factorwise product on a monoidal nerve.  It is strictly simplicial
    only when the strict monoidal structure is commutative on morphisms."""
    return tensor_map(x, lambda _n, a, b: tuple(tensor_obj(u, v) for u, v in zip(a, b)),
                      lambda _n, f, g: tuple(tensor_mor(u, v) for u, v in zip(f, g)), name)


def vector_sum_nerve_tensor(q: int, max_dim: int, levels: int) -> SimplicialMap:
    x = direct_sum_nerve(q, max_dim, levels)
    return monoidal_nerve_tensor(x, lambda a, b: a + b,
                                 lambda g, h: (g[0] + h[0], block_diagonal(g[1], h[1])), "direct sum")


def additive_nerve_tensor(x: TruncatedSimplicialGroupoid) -> SimplicialMap:
    add = lambda u, v: tuple(s + t for s, t in zip(u, v))
    return monoidal_nerve_tensor(x, add, lambda f, g: ("id", add(f[1], g[1])), "sum")


# ---------------------------------------------------------------------------
# checks


def check_tensor_culf(F: SimplicialMap, up_to: int | None = None) -> Report:
    """Strict simplicial commutation, then the CULF squares.

    When commutation fails the CULF squares are not meaningful and are
    reported as a single failing line.
    """
    rep = Report()
    errs = F.violations()
    rep.append(CheckResult("tensor", F.max_level, f"{F.name} is simplicial", "fail" if errs else "pass",
                           errs[0] if errs else ""))
    if errs:
        rep.append(CheckResult("culf", 0, f"{F.name} is culf", "fail", "not a strict simplicial map"))
        return rep
    rep.extend(check_culf(F, up_to))
    return rep


__all__ = [
    "additive_nerve_tensor", "check_tensor_culf", "fat_nerve_sum", "map_sum", "monoidal_nerve_tensor",
    "nerve_sum", "species_tensor", "tensor_map", "vector_sum_nerve_tensor",
]
