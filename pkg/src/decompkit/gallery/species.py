"""Restriction species as decomposition spaces.

A restriction species is described by callbacks on labelled structures on
[m] = {0..m-1}.  An n-simplex is a structure together with an ordered weak
partition of its underlying set into n parts (a map to {0..n-1}); d_0 and
d_n delete the first and last part, inner faces merge adjacent parts and
degeneracies insert an empty part.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Callable, Iterable

from ..combinat import all_perms, perm_generators, perm_inverse, perm_then
from ..groupoid import GroupActionGroupoid, GroupoidFunctor
from ..oracle import FiberOracle, OracleError, discrete_fiber
from ..simplicial import TruncatedSimplicialGroupoid


@dataclass
class RestrictionSpeciesCallbacks:
    """Callbacks describing a restriction species.

    ``restrict(s, subset)`` takes a sorted tuple of labels and returns the
    induced structure relabelled order-preservingly onto [len(subset)].
    ``relabel(s, g)`` transports s along the bijection i -> g[i].
    ``canonical`` must be invariant under relabelling; ``representative``
    inverts it.  ``admissible(s, parts)`` may forbid some partitions
    (layered forests), and ``union`` gives a disjoint-union monoidal structure.
    """

    name: str
    structures: Callable[[int], Iterable]
    restrict: Callable[[Any, tuple], Any]
    relabel: Callable[[Any, tuple], Any]
    canonical: Callable[[Any], str]
    representative: Callable[[str], Any]
    size: Callable[[Any], int]
    admissible: Callable | None = None
    union: Callable | None = None


class RestrictionSpeciesOracle(FiberOracle):
    """Fibers are the admissible part assignments on a canonical structure."""

    graded = True
    complete = True

    def __init__(self, cb: RestrictionSpeciesCallbacks, max_size: int):
        super().__init__()
        self.cb, self.name = cb, cb.name
        self.default_bound = max_size
        self.max_size = max_size
        self._canon = {}
        self._aut = {}
        self._by_size = {}
        self.monoidal = cb.union is not None
        self.unit_key = self.canonical(next(iter(cb.structures(0))))

    def canonical(self, s) -> str:
        k = self._canon.get(s)
        if k is None:
            k = self._canon[s] = self.cb.canonical(s)
        return k

    def _keys(self, bound):
        if bound > self.max_size:
            raise OracleError(f"{self.name}: bound {bound} exceeds the cap {self.max_size}")
        out = set()
        for m in range(bound + 1):
            if m not in self._by_size:
                self._by_size[m] = {self.canonical(s) for s in self.cb.structures(m)}
            out |= self._by_size[m]
        return out

    def _validate(self, key):
        s = self.cb.representative(key)
        return self.cb.size(s) <= self.max_size and self.canonical(s) == key

    def degree(self, key):
        return self.cb.size(self.cb.representative(key))

    def aut_order(self, key) -> int:
        self.check_key(key)
        if key not in self._aut:
            s = self.cb.representative(key)
            m = self.cb.size(s)
            self._aut[key] = sum(1 for g in all_perms(m) if self.cb.relabel(s, g) == s)
        return self._aut[key]

    def is_degenerate(self, key) -> bool:
        self.check_key(key)
        return self.degree(key) == 0

    def _assignments(self, s, n, surjective):
        m = self.cb.size(s)
        if n == 0:
            return [()] if m == 0 else []
        out = []
        for alpha in product(range(n), repeat=m):
            if surjective and len(set(alpha)) < n:
                continue
            if self.cb.admissible is None or self.cb.admissible(s, alpha):
                out.append(alpha)
        return out

    def _edges(self, s, n):
        def edges(alpha):
            return tuple(self.canonical(self.cb.restrict(s, tuple(e for e, p in enumerate(alpha) if p == j)))
                         for j in range(n))
        return edges

    def _fiber(self, n, key):
        s = self.cb.representative(key)
        return discrete_fiber(self._assignments(s, n, False), self._edges(s, n))

    def _nondegenerate_fiber(self, n, key):
        s = self.cb.representative(key)
        return discrete_fiber(self._assignments(s, n, True), self._edges(s, n))

    def tensor(self, a, b):
        if self.cb.union is None:
            return super().tensor(a, b)
        return self.canonical(self.cb.union(self.cb.representative(a), self.cb.representative(b)))

    def materialize(self, bound, levels):
        bound = self.max_size if bound is None else bound
        return species_simplicial_groupoid(self.cb, bound, levels)


def _parts_action(cb):
    def act(g, x):
        m, s, alpha = x
        ginv = perm_inverse(g)
        return (m, cb.relabel(s, g), tuple(alpha[ginv[i]] for i in range(m)))
    return act


def species_simplicial_groupoid(cb: RestrictionSpeciesCallbacks, bound: int, levels: int,
                                name: str = "") -> TruncatedSimplicialGroupoid:
    """Levels 0..levels restricted to structures of size <= bound.

    Objects are ``(m, structure, parts)``; morphisms are permutations of [m].
    """
    structures = {m: list(cb.structures(m)) for m in range(bound + 1)}
    act = _parts_action(cb)
    groupoids = []
    for k in range(levels + 1):
        objs = []
        for m, ss in structures.items():
            for s in ss:
                for alpha in product(range(k), repeat=m):
                    if cb.admissible is None or cb.admissible(s, alpha):
                        objs.append((m, s, alpha))
        groupoids.append(GroupActionGroupoid(
            objs, lambda x: all_perms(x[0]), lambda x: perm_generators(x[0]), act,
            perm_then, perm_inverse, lambda x: tuple(range(x[0]))))

    def delete(part):
        def on_obj(x):
            m, s, alpha = x
            kept = tuple(e for e in range(m) if alpha[e] != part)
            new_alpha = tuple(alpha[e] - (alpha[e] > part) for e in kept)
            return (len(kept), cb.restrict(s, kept), new_alpha)

        def on_mor(mor):
            x, g = mor
            y = act(g, x)
            kept = [e for e in range(x[0]) if x[2][e] != part]
            pos = {e: j for j, e in enumerate(e for e in range(y[0]) if y[2][e] != part)}
            return (on_obj(x), tuple(pos[g[e]] for e in kept))
        return on_obj, on_mor

    def reassign(fn):
        def on_obj(x):
            m, s, alpha = x
            return (m, s, tuple(fn(a) for a in alpha))
        return on_obj, lambda mor: (on_obj(mor[0]), mor[1])

    faces, degens = {}, {}
    for k in range(1, levels + 1):
        for i in range(k + 1):
            if i == 0:
                fo, fm = delete(0)
            elif i == k:
                fo, fm = delete(k - 1)
            else:
                fo, fm = reassign(lambda a, i=i: a if a < i else a - 1)
            faces[(k, i)] = GroupoidFunctor(groupoids[k], groupoids[k - 1], fo, fm, f"d{i}")
    for k in range(levels):
        for i in range(k + 1):
            fo, fm = reassign(lambda a, i=i: a if a < i else a + 1)
            degens[(k, i)] = GroupoidFunctor(groupoids[k], groupoids[k + 1], fo, fm, f"s{i}")
    return TruncatedSimplicialGroupoid(groupoids, faces, degens, weight=lambda _n, x: x[0],
                                       weight_bound=bound, name=name or cb.name,
                                       key_of=lambda x: cb.canonical(x[1]))


def functoriality_violations(cb: RestrictionSpeciesCallbacks, max_size: int, samples: int = 6) -> list[str]:
    """Spot checks: restriction composes, and commutes with relabelling."""
    errs = []
    for m in range(min(max_size, 4) + 1):
        for s in list(cb.structures(m))[:samples]:
            if cb.size(s) != m:
                errs.append(f"structure {s!r} does not have size {m}")
                continue
            if cb.canonical(cb.representative(cb.canonical(s))) != cb.canonical(s):
                errs.append(f"representative does not invert canonical on {s!r}")
            g = tuple(reversed(range(m)))
            t = cb.relabel(s, g)
            if cb.canonical(t) != cb.canonical(s):
                errs.append(f"canonical key of {s!r} changes under relabelling")
            for r in range(m + 1):
                for sub in combinations(range(m), r):
                    try:
                        errs.extend(_restriction_errors(cb, s, t, g, sub))
                    except (IndexError, KeyError, ValueError, TypeError) as exc:
                        errs.append(f"restricting {s!r} to {sub} raised {exc!r}")
    return errs


def _restriction_errors(cb, s, t, g, sub):
    errs = []
    part = cb.restrict(s, sub)
    image = tuple(sorted(g[e] for e in sub))
    if cb.canonical(cb.restrict(t, image)) != cb.canonical(part):
        errs.append(f"restriction of {s!r} to {sub} is not natural")
    for r2 in range(len(sub) + 1):
        for inner in combinations(range(len(sub)), r2):
            direct = cb.restrict(s, tuple(sub[i] for i in inner))
            if cb.restrict(part, inner) != direct:
                errs.append(f"restricting {s!r} to {sub} then {inner} differs from restricting directly")
                return errs
    return errs


# ---------------------------------------------------------------------------
# instances


def _subset_index(subset):
    return {e: i for i, e in enumerate(subset)}


def finite_sets() -> RestrictionSpeciesCallbacks:
    """The species of finite sets; structures are just their sizes."""
    return RestrictionSpeciesCallbacks(
        name="b-species",
        structures=lambda m: [m],
        restrict=lambda s, sub: len(sub),
        relabel=lambda s, g: s,
        canonical=str,
        representative=lambda k: _natural(k),
        size=lambda s: s,
        union=lambda s, t: s + t,
    )


class FiniteSetsOracle(RestrictionSpeciesOracle):
    """The species of finite sets, which is also Segal: gluing is addition."""

    segal = True
    base_is_point = True

    def __init__(self, max_size: int = 6):
        super().__init__(finite_sets(), max_size)

    def segal_gluings(self, a, b):
        return [str(_natural(a) + _natural(b))]


def _natural(key):
    n = int(key)
    if n < 0 or str(n) != key:
        raise ValueError(f"not a size: {key!r}")
    return n


def linear_orders() -> RestrictionSpeciesCallbacks:
    """Linear orders; a structure lists the elements from least to greatest."""
    def restrict(s, sub):
        idx = _subset_index(sub)
        return tuple(idx[e] for e in s if e in idx)

    return RestrictionSpeciesCallbacks(
        name="shuffles",
        structures=all_perms,
        restrict=restrict,
        relabel=lambda s, g: tuple(g[e] for e in s),
        canonical=lambda s: str(len(s)),
        representative=lambda k: tuple(range(_natural(k))),
        size=len,
        union=lambda s, t: s + tuple(e + len(s) for e in t),
    )


def words(alphabet: str = "ab") -> RestrictionSpeciesCallbacks:
    """Words: a linear order plus a letter on each element."""
    if not alphabet or len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet must be a nonempty string of distinct letters")

    def structures(m):
        for order in all_perms(m):
            for letters in product(alphabet, repeat=m):
                yield (order, letters)

    def restrict(s, sub):
        order, letters = s
        idx = _subset_index(sub)
        return (tuple(idx[e] for e in order if e in idx), tuple(letters[e] for e in sub))

    def relabel(s, g):
        order, letters = s
        new = [None] * len(letters)
        for e, c in enumerate(letters):
            new[g[e]] = c
        return (tuple(g[e] for e in order), tuple(new))

    def canonical(s):
        order, letters = s
        return "word=" + "".join(letters[e] for e in order)

    def representative(key):
        if not key.startswith("word=") or any(c not in alphabet for c in key[5:]):
            raise ValueError(f"not a word over {alphabet!r}: {key!r}")
        w = key[5:]
        return (tuple(range(len(w))), tuple(w))

    def union(s, t):
        m = len(s[1])
        return (s[0] + tuple(e + m for e in t[0]), s[1] + t[1])

    return RestrictionSpeciesCallbacks("words", structures, restrict, relabel, canonical,
                                       representative, lambda s: len(s[1]), union=union)


def _edge_list(s):
    return ",".join(f"{i}-{j}" for i, j in s)


def graphs(max_multiplicity: int = 1, loops: bool = False) -> RestrictionSpeciesCallbacks:
    """Graphs as sorted edge tuples; multigraphs and loops are opt-in."""
    if max_multiplicity < 1:
        raise ValueError("max_multiplicity must be at least 1")

    def structures(m):
        slots = [(i, j) for i in range(m) for j in range(i, m) if i < j or loops]
        for mult in product(range(max_multiplicity + 1), repeat=len(slots)):
            yield tuple(e for e, k in zip(slots, mult) for _ in range(k))

    def restrict(s, sub):
        idx = _subset_index(sub)
        return tuple(sorted((idx[i], idx[j]) for i, j in s if i in idx and j in idx))

    def relabel(s, g):
        return tuple(sorted((min(g[i], g[j]), max(g[i], g[j])) for i, j in s))

    def size(s):
        return s[0]

    def canonical(labelled):
        m, s = labelled
        best = min(relabel(s, g) for g in all_perms(m))
        return f"V={m};E={_edge_list(best)}"

    def representative(key):
        head, _, tail = key.partition(";")
        if not head.startswith("V=") or not tail.startswith("E="):
            raise ValueError(f"not a graph key: {key!r}")
        m = int(head[2:])
        edges = []
        for part in filter(None, tail[2:].split(",")):
            i, j = (int(v) for v in part.split("-"))
            if not (0 <= i <= j < m) or (i == j and not loops):
                raise ValueError(f"bad edge {part!r} in {key!r}")
            edges.append((i, j))
        if any(edges.count(e) > max_multiplicity for e in edges):
            raise ValueError(f"edge multiplicity too high in {key!r}")
        return (m, tuple(sorted(edges)))

    # structures carry their vertex count so that isolated vertices survive
    return RestrictionSpeciesCallbacks(
        name="schmitt-graphs",
        structures=lambda m: [(m, s) for s in structures(m)],
        restrict=lambda s, sub: (len(sub), restrict(s[1], sub)),
        relabel=lambda s, g: (s[0], relabel(s[1], g)),
        canonical=canonical,
        representative=representative,
        size=size,
        union=lambda s, t: (s[0] + t[0], s[1] + tuple((i + s[0], j + s[0]) for i, j in t[1])),
    )


def posets() -> RestrictionSpeciesCallbacks:
    """Finite posets as sets of strict relations i < j."""
    def structures(m):
        pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
        for r in range(len(pairs) + 1):
            for rel in combinations(pairs, r):
                rs = set(rel)
                if any((j, i) in rs for i, j in rs):
                    continue
                if all((i, k) in rs for i, j in rs for j2, k in rs if j == j2):
                    yield (m, tuple(sorted(rs)))

    def restrict(s, sub):
        idx = _subset_index(sub)
        return (len(sub), tuple(sorted((idx[i], idx[j]) for i, j in s[1] if i in idx and j in idx)))

    def relabel(s, g):
        return (s[0], tuple(sorted((g[i], g[j]) for i, j in s[1])))

    def canonical(s):
        best = min(relabel(s, g)[1] for g in all_perms(s[0]))
        return f"P={s[0]};R=" + ",".join(f"{i}<{j}" for i, j in best)

    def representative(key):
        head, _, tail = key.partition(";")
        if not head.startswith("P=") or not tail.startswith("R="):
            raise ValueError(f"not a poset key: {key!r}")
        m = int(head[2:])
        rel = []
        for part in filter(None, tail[2:].split(",")):
            i, j = (int(v) for v in part.split("<"))
            if not (0 <= i < m and 0 <= j < m) or i == j:
                raise ValueError(f"bad relation {part!r} in {key!r}")
            rel.append((i, j))
        return (m, tuple(sorted(rel)))

    return RestrictionSpeciesCallbacks(
        name="posets", structures=structures, restrict=restrict, relabel=relabel,
        canonical=canonical, representative=representative, size=lambda s: s[0],
        union=lambda s, t: (s[0] + t[0], s[1] + tuple((i + s[0], j + s[0]) for i, j in t[1])),
    )


# -- rooted forests ----------------------------------------------------------


def _forest_codes(parent):
    children = {v: [] for v in range(len(parent))}
    roots = []
    for v, p in enumerate(parent):
        (roots if p is None else children[p]).append(v)

    def code(v):
        return "(" + "".join(sorted(code(c) for c in children[v])) + ")"
    return sorted(code(r) for r in roots)


def forest_key(parent) -> str:
    """Sorted nested parentheses; the empty forest is the empty string."""
    return "".join(_forest_codes(parent))


def parse_forest(key: str) -> tuple:
    """Forest with nodes numbered in preorder."""
    parent, stack = [], []
    for ch in key:
        if ch == "(":
            parent.append(stack[-1] if stack else None)
            stack.append(len(parent) - 1)
        elif ch == ")":
            if not stack:
                raise ValueError(f"unbalanced forest key {key!r}")
            stack.pop()
        else:
            raise ValueError(f"forest keys use only parentheses: {key!r}")
    if stack:
        raise ValueError(f"unbalanced forest key {key!r}")
    return tuple(parent)


def _is_forest(parent):
    for v in range(len(parent)):
        seen, p = set(), v
        while p is not None:
            if p in seen:
                return False
            seen.add(p)
            p = parent[p]
    return True


def labelled_forests(m: int):
    for parent in product([None, *range(m)], repeat=m):
        if all(p != v for v, p in enumerate(parent)) and _is_forest(parent):
            yield tuple(parent)


def restrict_forest(parent, sub):
    """Induced forest: each kept node hangs from its nearest kept ancestor."""
    idx = _subset_index(sub)
    out = []
    for v in sub:
        p = parent[v]
        while p is not None and p not in idx:
            p = parent[p]
        out.append(None if p is None else idx[p])
    return tuple(out)


def relabel_forest(parent, g):
    out = [None] * len(parent)
    for v, p in enumerate(parent):
        out[g[v]] = None if p is None else g[p]
    return tuple(out)


def forests() -> RestrictionSpeciesCallbacks:
    """Rooted forests; a partition is admissible when every layer is closed
    under descendants of the earlier layers (layer 0 is the crown)."""
    return RestrictionSpeciesCallbacks(
        name="bck-forests",
        structures=labelled_forests,
        restrict=restrict_forest,
        relabel=relabel_forest,
        canonical=forest_key,
        representative=parse_forest,
        size=len,
        admissible=lambda s, alpha: all(p is None or alpha[v] <= alpha[p] for v, p in enumerate(s)),
        union=lambda s, t: s + tuple(None if p is None else p + len(s) for p in t),
    )


def restriction_species_oracle(cb: RestrictionSpeciesCallbacks, max_size: int) -> RestrictionSpeciesOracle:
    """Validate the callbacks by spot checks, then wrap them as an oracle."""
    errs = functoriality_violations(cb, max_size)
    if errs:
        raise OracleError(f"{cb.name}: restriction is not functorial: {errs[0]}")
    return RestrictionSpeciesOracle(cb, max_size)
