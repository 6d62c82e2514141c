"""Fiber oracles: decomposition spaces presented one 1-simplex at a time.

An oracle names the iso-classes of 1-simplices by canonical key strings and,
for a key f, produces the homotopy fiber of the long edge X_n -> X_1 over f
together with the keys of the n principal edges of every object.  All
incidence computations only need these fibers, so infinite spaces can be
handled one graded piece at a time.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .groupoid import (DiscreteGroupoid, FiniteGroupoid, FullSubgroupoid,
                       GroupoidFunctor, homotopy_fiber)
from .nerves import CoreGroupoid, FatNerveLevel, FiniteCategory, fat_nerve, nerve
from .simplicial import TruncatedSimplicialGroupoid, check_complete


class OracleError(ValueError):
    """Unknown keys, windows that are not closed, or unsupported requests."""


@dataclass
class Fiber:
    """A fiber groupoid with the principal-edge keys of each object."""

    groupoid: FiniteGroupoid
    edges: Callable
    _weights: dict | None = field(default=None, repr=False)

    def cardinality(self) -> Fraction:
        return self.groupoid.cardinality()

    def weights(self) -> dict:
        """Cardinality of the full subgroupoid on each tuple of edge keys."""
        if self._weights is None:
            out = defaultdict(Fraction)
            for c in self.groupoid.components():
                out[tuple(self.edges(c.representative))] += Fraction(1, c.aut_order)
            self._weights = dict(out)
        return self._weights

    def restrict(self, keep: Callable) -> "Fiber":
        """Full subgroupoid on the objects whose edge tuple satisfies ``keep``."""
        sub = FullSubgroupoid(self.groupoid, lambda x: keep(tuple(self.edges(x))))
        return Fiber(sub, self.edges)


def discrete_fiber(items, edges: Callable) -> Fiber:
    return Fiber(DiscreteGroupoid(items), edges)


class FiberOracle:
    """Base class.  Subclasses implement ``_keys``, ``aut_order``,
    ``is_degenerate`` and ``_fiber``; graded ones also ``degree``.
    """

    name = "oracle"
    graded = True
    complete = True
    segal = False
    monoidal = False
    base_is_point = False
    unit_key = None
    default_bound = None

    def __init__(self):
        self._fibers = {}
        self._nondegenerate = {}
        self._known = None

    # -- keys --------------------------------------------------------------
    def _keys(self, bound) -> list:
        raise NotImplementedError

    def keys(self, bound=None) -> list:
        """The window of keys up to ``bound`` in canonical order."""
        if bound is None:
            bound = self.default_bound
        return sorted(self._keys(bound), key=self.sort_key)

    def sort_key(self, key):
        d = self.degree(key) if self.graded else 0
        return (d, len(key), key)

    def degree(self, key):
        return None

    def length_bound(self, key):
        """An upper bound for the length of key, or None if unknown."""
        return self.degree(key) if self.graded else None

    def check_key(self, key) -> None:
        if not self.is_key(key):
            raise OracleError(f"unknown key {key!r} for {self.name}")

    def is_key(self, key) -> bool:
        if self._known is None:
            self._known = set(self.keys())
        if key in self._known:
            return True
        try:
            return self._validate(key)
        except (ValueError, KeyError, IndexError):
            return False

    def _validate(self, key) -> bool:
        return False

    def aut_order(self, key) -> int:
        raise NotImplementedError

    def is_degenerate(self, key) -> bool:
        raise NotImplementedError

    # -- fibers --------------------------------------------------------------
    def _fiber(self, n: int, key) -> Fiber:
        raise NotImplementedError

    def fiber(self, n: int, key) -> Fiber:
        """Homotopy fiber of the long edge X_n -> X_1 over key."""
        if n < 0:
            raise OracleError("fiber level must be non-negative")
        self.check_key(key)
        cached = self._fibers.get((n, key))
        if cached is None:
            cached = self._fiber(n, key)
            self._fibers[(n, key)] = cached
        return cached

    def nondegenerate_fiber(self, n: int, key) -> Fiber:
        """Objects of fiber(n, key) all of whose principal edges are nondegenerate."""
        if not self.complete:
            raise OracleError("nondegeneracy undefined: the space is not complete")
        cached = self._nondegenerate.get((n, key))
        if cached is None:
            cached = self._nondegenerate_fiber(n, key)
            self._nondegenerate[(n, key)] = cached
        return cached

    def _nondegenerate_fiber(self, n: int, key) -> Fiber:
        if n == 0:
            return self.fiber(0, key)
        return self.fiber(n, key).restrict(lambda es: not any(self.is_degenerate(e) for e in es))

    # -- optional structure ------------------------------------------------------
    def segal_gluings(self, a, b) -> list:
        """Composite keys a;phi;b, one per phi in Iso(d0 a, d1 b)."""
        raise OracleError(f"{self.name} does not describe its Segal gluings")

    def tensor(self, a, b):
        raise OracleError(f"{self.name} is not monoidal")

    def materialize(self, bound, levels: int) -> TruncatedSimplicialGroupoid:
        raise OracleError(f"{self.name} has no materialization")


# ---------------------------------------------------------------------------
# oracles derived from explicit simplicial groupoids


class SimplicialOracle(FiberOracle):
    """Oracle reading fibers off a materialized simplicial groupoid."""

    def __init__(self, x: TruncatedSimplicialGroupoid, key_of: Callable | None = None,
                 gluings: Callable | None = None, name: str = "", tensor: Callable | None = None,
                 unit_key=None, length_bound: Callable | None = None):
        super().__init__()
        self.x = x
        self.name = name or x.name
        self._key_of = key_of or x.key_of or repr
        X0, X1 = x.level(0), x.level(1)
        self._rep, self._comp_key = {}, {}
        for idx, c in enumerate(X1.components()):
            k = self._key_of(c.representative)
            if k in self._rep:
                raise OracleError(f"key {k!r} names two components of X_1")
            self._rep[k] = c.representative
            self._comp_key[idx] = k
        s0 = x.degeneracy(0, 0)
        self._degenerate = {self.edge_key(s0.obj(c.representative)) for c in X0.components()}
        self.graded = x.weight is not None
        self.complete = check_complete(x)
        comps0 = X0.components()
        self.base_is_point = len(comps0) == 1 and comps0[0].aut_order == 1
        self._gluings = gluings
        self._tensor = tensor
        self.monoidal = tensor is not None
        self.unit_key = unit_key
        self.segal = gluings is not None
        self._edge_functors = {}
        self._length_bound = length_bound

    def _keys(self, bound):
        return list(self._rep)

    def sort_key(self, key):
        d = self.degree(key) if self.graded else 0
        return (d, str(key))

    def degree(self, key):
        if self.x.weight is None:
            return None
        return self.x.weight(1, self._rep[key])

    def length_bound(self, key):
        return None if self._length_bound is None else self._length_bound(key)

    def representative(self, key):
        self.check_key(key)
        return self._rep[key]

    def edge_key(self, y):
        X1 = self.x.level(1)
        return self._comp_key[X1.component_index(y)]

    def aut_order(self, key) -> int:
        return self.x.level(1).aut_order(self.representative(key))

    def is_degenerate(self, key) -> bool:
        self.check_key(key)
        return key in self._degenerate

    def _principal(self, n):
        if n not in self._edge_functors:
            self._edge_functors[n] = [self.x.principal_edge(n, i) for i in range(1, n + 1)]
        return self._edge_functors[n]

    def _fiber(self, n, key):
        if n > self.x.max_level:
            raise OracleError(f"level {n} is not materialized (max {self.x.max_level})")
        fib = homotopy_fiber(self.x.long_edge(n), self._rep[key])
        edges = self._principal(n)
        return Fiber(fib, lambda t: tuple(self.edge_key(e.obj(t[0])) for e in edges))

    def segal_gluings(self, a, b):
        if self._gluings is None:
            return super().segal_gluings(a, b)
        return self._gluings(a, b)

    def tensor(self, a, b):
        if self._tensor is None:
            return super().tensor(a, b)
        return self._tensor(a, b)


def is_degenerate_simplex(x: TruncatedSimplicialGroupoid, n: int, sigma) -> bool:
    """Is sigma in the essential image of some degeneracy X_{n-1} -> X_n?"""
    if n == 0:
        return False
    Xn = x.level(n)
    target = Xn.component_index(sigma)
    for i in range(n):
        s = x.degeneracy(n - 1, i)
        for c in x.level(n - 1).components():
            if Xn.component_index(s.obj(c.representative)) == target:
                return True
    return False


# ---------------------------------------------------------------------------
# oracles for categories


class CategoryNerveOracle(FiberOracle):
    """Strict nerve of a finite category; keys are arrow names.

    Fibers are found by depth-first search over chains whose composite is
    the given arrow, so high levels never need to be materialized.
    """

    graded = False
    segal = True

    def __init__(self, cat: FiniteCategory, name: str = "nerve", degree: Callable | None = None):
        super().__init__()
        self.cat, self.name = cat, name
        self._arrow = {}
        for m in cat.arrows:
            k = str(cat.names.get(m, m))
            self._arrow[k] = m
        self._name = {m: k for k, m in self._arrow.items()}
        self._degree = degree
        self.graded = degree is not None
        self.base_is_point = len(cat.objects) == 1
        self._identity_arrows = set(cat.identities.values())

    def _keys(self, bound):
        return list(self._arrow)

    def sort_key(self, key):
        return (self.degree(key) if self.graded else 0, key)

    def degree(self, key):
        return None if self._degree is None else self._degree(self._arrow[key])

    def key_of(self, arrow):
        return self._name[arrow]

    def arrow(self, key):
        self.check_key(key)
        return self._arrow[key]

    def aut_order(self, key) -> int:
        self.check_key(key)
        return 1

    def is_degenerate(self, key) -> bool:
        return self.arrow(key) in self._identity_arrows

    def _chains(self, n, f, allowed):
        C = self.cat
        out = []

        def walk(vertex, arrows, composite):
            if len(arrows) == n:
                if vertex == C.tgt(f) and composite == f:
                    out.append(tuple(arrows))
                return
            for a in C.arrows_from(vertex):
                if allowed(a):
                    comp = a if composite is None else C.compose(composite, a)
                    walk(C.tgt(a), arrows + [a], comp)

        walk(C.src(f), [], None)
        return out

    def _fiber(self, n, key):
        f = self._arrow[key]
        if n == 0:
            items = [()] if f in self._identity_arrows else []
            return discrete_fiber(items, lambda _c: ())
        chains = self._chains(n, f, lambda _a: True)
        return discrete_fiber(chains, lambda c: tuple(self._name[a] for a in c))

    def _nondegenerate_fiber(self, n, key):
        if n == 0:
            return self.fiber(0, key)
        chains = self._chains(n, self._arrow[key], lambda a: a not in self._identity_arrows)
        return discrete_fiber(chains, lambda c: tuple(self._name[a] for a in c))

    def segal_gluings(self, a, b):
        fa, fb = self.arrow(a), self.arrow(b)
        if self.cat.tgt(fa) != self.cat.src(fb):
            return []
        return [self._name[self.cat.compose(fa, fb)]]

    def materialize(self, bound, levels):
        x = nerve(self.cat, levels, key_of=lambda ch: self._name[ch[1][0]])
        x.name = self.name
        return x


class FixedEndChains(FatNerveLevel):
    """Chains with prescribed composite; isos act on inner vertices only."""

    def morphisms_from(self, x):
        return [m for m in super().morphisms_from(x) if self._ends_fixed(x, m[1])]

    def _ends_fixed(self, x, us):
        ids = self.cat.identities
        return us[0] == ids[x[0][0]] and us[-1] == ids[x[0][-1]]

    def generators_from(self, x):
        return [m for m in super().generators_from(x) if self._ends_fixed(x, m[1])]

    def automorphisms(self, x):
        return [m for m in super().automorphisms(x) if self._ends_fixed(x, m[1])]


class FatNerveOracle(FiberOracle):
    """Fat nerve of a finite category.

    Keys name iso-classes of arrows (by default the least arrow name in the
    class).  The fiber over f consists of chains composing exactly to f, with
    isomorphisms acting on the inner vertices: this strict fiber of an
    isofibration is equivalent to the homotopy fiber.
    """

    graded = False
    segal = True

    def __init__(self, cat: FiniteCategory, name: str = "fat nerve", key_of: Callable | None = None,
                 degree: Callable | None = None):
        super().__init__()
        self.cat, self.name = cat, name
        self.arrows_groupoid = FatNerveLevel(cat, 1)
        level = self.arrows_groupoid
        self._rep, self._comp_key = {}, {}
        for idx, c in enumerate(level.components()):
            if key_of is None:
                k = min(str(cat.names.get(ch[1][0], ch[1][0])) for ch in c.members)
            else:
                k = key_of(c.representative[1][0])
            if k in self._rep:
                raise OracleError(f"key {k!r} names two classes of arrows")
            self._rep[k] = c.representative
            self._comp_key[idx] = k
        self._degree = degree
        self.graded = degree is not None
        objs = CoreGroupoid(cat).components()
        self.base_is_point = len(objs) == 1 and objs[0].aut_order == 1

    def _keys(self, bound):
        return list(self._rep)

    def sort_key(self, key):
        return (self.degree(key) if self.graded else 0, str(key))

    def degree(self, key):
        return None if self._degree is None else self._degree(self._rep[key][1][0])

    def arrow(self, key):
        self.check_key(key)
        return self._rep[key][1][0]

    def key_of(self, arrow):
        C = self.cat
        chain = ((C.src(arrow), C.tgt(arrow)), (arrow,))
        return self._comp_key[self.arrows_groupoid.component_index(chain)]

    def aut_order(self, key) -> int:
        self.check_key(key)
        return self.arrows_groupoid.aut_order(self._rep[key])

    def is_degenerate(self, key) -> bool:
        return self.cat.is_iso(self.arrow(key))

    def _chains(self, n, f, allowed):
        C = self.cat
        out = []

        def walk(vertices, arrows, composite):
            if len(arrows) == n:
                if vertices[-1] == C.tgt(f) and composite == f:
                    out.append((tuple(vertices), tuple(arrows)))
                return
            for a in C.arrows_from(vertices[-1]):
                if allowed(a):
                    comp = a if composite is None else C.compose(composite, a)
                    walk(vertices + [C.tgt(a)], arrows + [a], comp)

        walk([C.src(f)], [], None)
        return out

    def _fiber(self, n, key):
        f = self.arrow(key)
        if n == 0:
            core = CoreGroupoid(self.cat)
            s0 = GroupoidFunctor(core, self.arrows_groupoid,
                                 lambda x: ((x, x), (self.cat.identities[x],)),
                                 lambda u: (((self.cat.src(u),) * 2, (self.cat.identities[self.cat.src(u)],)),
                                            (u, u)))
            return Fiber(homotopy_fiber(s0, self._rep[key]), lambda _t: ())
        chains = self._chains(n, f, lambda _a: True)
        return Fiber(FixedEndChains(self.cat, n, chains), lambda ch: tuple(self.key_of(a) for a in ch[1]))

    def _nondegenerate_fiber(self, n, key):
        if n == 0:
            return self.fiber(0, key)
        chains = self._chains(n, self.arrow(key), lambda a: not self.cat.is_iso(a))
        return Fiber(FixedEndChains(self.cat, n, chains), lambda ch: tuple(self.key_of(a) for a in ch[1]))

    def segal_gluings(self, a, b):
        C = self.cat
        fa, fb = self.arrow(a), self.arrow(b)
        return [self.key_of(C.compose(C.compose(fa, phi), fb))
                for phi in C.isos_from(C.tgt(fa)) if C.tgt(phi) == C.src(fb)]

    def materialize(self, bound, levels):
        x = fat_nerve(self.cat, levels, key_of=lambda ch: self.key_of(ch[1][0]))
        x.name = self.name
        return x


# ---------------------------------------------------------------------------
# module-level helpers


def materialize(oracle: FiberOracle, window=None, levels: int = 3) -> TruncatedSimplicialGroupoid:
    """Materialize levels 0..levels of an oracle on a grading-closed window.

    ``window`` is a degree bound (or None for the oracle default).  The
    builder of each space supplies the actual construction.
    """
    if window is not None and not isinstance(window, int):
        keys = list(window)
        for k in keys:
            if oracle.graded:
                for e in oracle.keys(oracle.degree(k)):
                    if e not in keys:
                        raise OracleError(f"window is not closed: {k!r} decomposes through {e!r}")
        window = max((oracle.degree(k) for k in keys), default=0) if oracle.graded else None
    return oracle.materialize(window, levels)


def nondegenerate_fiber(space, n: int, key) -> Fiber:
    """Nondegenerate part of fiber(n, key) for an oracle or a materialization."""
    if isinstance(space, TruncatedSimplicialGroupoid):
        space = SimplicialOracle(space)
    return space.nondegenerate_fiber(n, key)
