"""Finite groupoids, functors between them, and homotopy cardinality.

Composition is written in diagrammatic order: ``compose(m, n)`` means
"m followed by n", so ``src(compose(m, n)) == src(m)`` and
``tgt(compose(m, n)) == tgt(n)``.

Groupoids come in several concrete flavours (explicit tables, group actions,
pullbacks, products).  All of them answer the same small set of structural
questions; components, automorphism groups and cardinality are derived from
those answers by brute-force search.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Any, Callable, Hashable, Iterable, Sequence


class GroupoidError(ValueError):
    """Raised for malformed groupoid or functor data."""


@dataclass(frozen=True)
class Component:
    representative: Hashable
    members: tuple
    aut_order: int


class FiniteGroupoid:
    """Abstract finite groupoid.

    Subclasses provide ``_object_list``, ``src``, ``tgt``, ``compose``,
    ``identity``, ``inverse`` and ``morphisms_from``.  They may override
    ``generators_from`` (a set of morphisms whose forward closure reaches
    every isomorphic object) and ``automorphisms`` for speed.
    """

    _analysis = None
    _objects = None

    # -- structure hooks -------------------------------------------------
    def _object_list(self) -> Sequence:
        raise NotImplementedError

    def src(self, m):
        raise NotImplementedError

    def tgt(self, m):
        raise NotImplementedError

    def compose(self, m, n):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def inverse(self, m):
        raise NotImplementedError

    def morphisms_from(self, x) -> Iterable:
        raise NotImplementedError

    def generators_from(self, x) -> Iterable:
        return self.morphisms_from(x)

    def automorphisms(self, x) -> list:
        return [m for m in self.morphisms_from(x) if self.tgt(m) == x]

    # -- derived structure -----------------------------------------------
    @property
    def objects(self) -> tuple:
        if self._objects is None:
            self._objects = tuple(self._object_list())
        return self._objects

    def has_object(self, x) -> bool:
        if getattr(self, "_object_set", None) is None:
            self._object_set = frozenset(self.objects)
        return x in self._object_set

    def morphisms(self) -> list:
        return [m for x in self.objects for m in self.morphisms_from(x)]

    def _analyse(self):
        if self._analysis is not None:
            return self._analysis
        comp_of, transport, comps = {}, {}, []
        for x in self.objects:
            if x in comp_of:
                continue
            idx = len(comps)
            comp_of[x] = idx
            transport[x] = self.identity(x)
            members, stack = [x], [x]
            while stack:
                y = stack.pop()
                ty = transport[y]
                for m in self.generators_from(y):
                    z = self.tgt(m)
                    if z not in comp_of:
                        comp_of[z] = idx
                        transport[z] = self.compose(ty, m)
                        members.append(z)
                        stack.append(z)
            comps.append(Component(x, tuple(members), len(self.automorphisms(x))))
        self._analysis = (comps, comp_of, transport)
        return self._analysis

    def components(self) -> list[Component]:
        return self._analyse()[0]

    def component_index(self, x) -> int:
        return self._analyse()[1][x]

    def representative(self, x):
        return self.components()[self.component_index(x)].representative

    def transport(self, x):
        """A morphism from the representative of x's component to x."""
        return self._analyse()[2][x]

    def aut_order(self, x) -> int:
        return self.components()[self.component_index(x)].aut_order

    def isomorphic(self, x, y) -> bool:
        return self.component_index(x) == self.component_index(y)

    def hom(self, x, y) -> list:
        if not self.isomorphic(x, y):
            return []
        bridge = self.compose(self.inverse(self.transport(x)), self.transport(y))
        return [self.compose(a, bridge) for a in self.automorphisms(x)]

    def cardinality(self) -> Fraction:
        return sum((Fraction(1, c.aut_order) for c in self.components()), Fraction(0))

    def __len__(self):
        return len(self.objects)


# ---------------------------------------------------------------------------
# concrete groupoids


class TableGroupoid(FiniteGroupoid):
    """Groupoid given by explicit tables.

    ``morphisms`` maps a morphism id to ``(src, tgt)``; ``composition`` maps
    ``(m, n)`` to the id of "m followed by n"; ``identities`` maps objects to
    morphism ids.
    """

    def __init__(self, objects, morphisms: dict, composition: dict, identities: dict,
                 validate: bool = True):
        self._objects = tuple(objects)
        self._ends = dict(morphisms)
        self._comp = dict(composition)
        self._ids = dict(identities)
        self._out = {x: [] for x in self._objects}
        for m, (s, _t) in self._ends.items():
            if s not in self._out:
                raise GroupoidError(f"morphism {m!r} has unknown source {s!r}")
            self._out[s].append(m)
        self._inv = {}
        if validate:
            errors = self.violations()
            if errors:
                raise GroupoidError(errors[0])
        else:
            self._fill_inverses()

    def _fill_inverses(self):
        for m, (s, t) in self._ends.items():
            for n in self._out.get(t, ()):
                if self._ends[n][1] == s and self._comp.get((m, n)) == self._ids[s]:
                    self._inv[m] = n
                    break

    def violations(self) -> list[str]:
        """Every violated groupoid axiom, as readable messages."""
        errs = []
        objs = set(self._objects)
        for m, (s, t) in self._ends.items():
            if s not in objs or t not in objs:
                errs.append(f"morphism {m!r}: endpoints must be objects")
        for x in self._objects:
            i = self._ids.get(x)
            if i is None or self._ends.get(i) != (x, x):
                errs.append(f"identity of {x!r} missing or not an endomorphism")
        if errs:
            return errs
        for m, (s, t) in self._ends.items():
            for n in self._out[t]:
                if (m, n) not in self._comp:
                    errs.append(f"composite of {m!r} and {n!r} missing")
                    continue
                mn = self._comp[(m, n)]
                if self._ends.get(mn) != (s, self._ends[n][1]):
                    errs.append(f"composite of {m!r} and {n!r} has wrong endpoints")
        for (m, n) in self._comp:
            if m not in self._ends or n not in self._ends or self._ends[m][1] != self._ends[n][0]:
                errs.append(f"composition entry ({m!r}, {n!r}) is not a composable pair")
        if errs:
            return errs
        for m, (s, t) in self._ends.items():
            if self._comp[(self._ids[s], m)] != m or self._comp[(m, self._ids[t])] != m:
                errs.append(f"identities are not units for {m!r}")
        for m, (s, t) in self._ends.items():
            for n in self._out[t]:
                mn = self._comp[(m, n)]
                for p in self._out[self._ends[n][1]]:
                    if self._comp[(mn, p)] != self._comp[(m, self._comp[(n, p)])]:
                        errs.append(f"composition not associative on ({m!r}, {n!r}, {p!r})")
        self._fill_inverses()
        for m in self._ends:
            n = self._inv.get(m)
            if n is None or self._comp[(n, m)] != self._ids[self._ends[m][1]]:
                errs.append(f"morphism {m!r} has no inverse")
        return errs

    def src(self, m):
        return self._ends[m][0]

    def tgt(self, m):
        return self._ends[m][1]

    def compose(self, m, n):
        return self._comp[(m, n)]

    def identity(self, x):
        return self._ids[x]

    def inverse(self, m):
        return self._inv[m]

    def morphisms_from(self, x):
        return self._out[x]

    # -- JSON ------------------------------------------------------------
    def to_json_data(self) -> dict:
        return {
            "objects": list(self._objects),
            "morphisms": [{"id": m, "src": s, "tgt": t} for m, (s, t) in self._ends.items()],
            "compose": [[m, n, mn] for (m, n), mn in self._comp.items()],
            "identities": {str(x): i for x, i in self._ids.items()},
        }


class DiscreteGroupoid(FiniteGroupoid):
    """Only identity morphisms; the identity of x is ``("id", x)``."""

    def __init__(self, objects):
        self._objects = tuple(objects)

    def src(self, m):
        return m[1]

    tgt = src

    def compose(self, m, n):
        if m != n:
            raise GroupoidError("non-composable identities")
        return m

    def identity(self, x):
        return ("id", x)

    def inverse(self, m):
        return m

    def morphisms_from(self, x):
        return [("id", x)]

    automorphisms = morphisms_from

    def _analyse(self):
        if self._analysis is None:
            comps = [Component(x, (x,), 1) for x in self._objects]
            self._analysis = (comps, {x: i for i, x in enumerate(self._objects)},
                              {x: ("id", x) for x in self._objects})
        return self._analysis


def terminal_groupoid() -> DiscreteGroupoid:
    return DiscreteGroupoid(["*"])


class GroupActionGroupoid(FiniteGroupoid):
    """Action groupoid of per-object groups acting on a set of objects.

    A morphism is ``(x, g)`` going from x to ``act(g, x)``.  ``mul(g, h)`` is
    "g then h", so ``act(mul(g, h), x) == act(h, act(g, x))``.
    ``group(x)`` lists the group acting at x and ``gens(x)`` generators of it.
    """

    def __init__(self, objects, group: Callable, gens: Callable, act: Callable,
                 mul: Callable, inv: Callable, unit: Callable):
        self._objects = tuple(objects)
        self._group, self._gens, self._act = group, gens, act
        self._mul, self._inv, self._unit = mul, inv, unit

    def src(self, m):
        return m[0]

    def tgt(self, m):
        return self._act(m[1], m[0])

    def compose(self, m, n):
        return (m[0], self._mul(m[1], n[1]))

    def identity(self, x):
        return (x, self._unit(x))

    def inverse(self, m):
        return (self.tgt(m), self._inv(m[1]))

    def morphisms_from(self, x):
        return [(x, g) for g in self._group(x)]

    def generators_from(self, x):
        return [(x, g) for g in self._gens(x)]

    def automorphisms(self, x):
        return [(x, g) for g in self._group(x) if self._act(g, x) == x]


class ProductGroupoid(FiniteGroupoid):
    """Full subgroupoid of a product of groupoids on a chosen set of tuples.

    With ``objects=None`` all tuples are taken.  Morphisms are tuples.
    """

    def __init__(self, factors: Sequence[FiniteGroupoid], objects=None):
        self.factors = tuple(factors)
        if objects is None:
            objects = list(cartesian(*(f.objects for f in self.factors)))
        self._objects = tuple(objects)

    def src(self, m):
        return tuple(f.src(c) for f, c in zip(self.factors, m))

    def tgt(self, m):
        return tuple(f.tgt(c) for f, c in zip(self.factors, m))

    def compose(self, m, n):
        return tuple(f.compose(a, b) for f, a, b in zip(self.factors, m, n))

    def identity(self, x):
        return tuple(f.identity(c) for f, c in zip(self.factors, x))

    def inverse(self, m):
        return tuple(f.inverse(c) for f, c in zip(self.factors, m))

    def morphisms_from(self, x):
        return [m for m in cartesian(*(f.morphisms_from(c) for f, c in zip(self.factors, x)))
                if self.has_object(self.tgt(m))]

    def generators_from(self, x):
        ids = self.identity(x)
        out = []
        for i, f in enumerate(self.factors):
            for g in f.generators_from(x[i]):
                m = ids[:i] + (g,) + ids[i + 1:]
                if self.has_object(self.tgt(m)):
                    out.append(m)
        return out

    def automorphisms(self, x):
        return list(cartesian(*(f.automorphisms(c) for f, c in zip(self.factors, x))))


class DisjointUnion(FiniteGroupoid):
    """Objects and morphisms are tagged ``(index, item)``."""

    def __init__(self, parts: Sequence[FiniteGroupoid]):
        self.parts = tuple(parts)
        self._objects = tuple((i, x) for i, g in enumerate(self.parts) for x in g.objects)

    def src(self, m):
        return (m[0], self.parts[m[0]].src(m[1]))

    def tgt(self, m):
        return (m[0], self.parts[m[0]].tgt(m[1]))

    def compose(self, m, n):
        return (m[0], self.parts[m[0]].compose(m[1], n[1]))

    def identity(self, x):
        return (x[0], self.parts[x[0]].identity(x[1]))

    def inverse(self, m):
        return (m[0], self.parts[m[0]].inverse(m[1]))

    def morphisms_from(self, x):
        return [(x[0], m) for m in self.parts[x[0]].morphisms_from(x[1])]

    def generators_from(self, x):
        return [(x[0], m) for m in self.parts[x[0]].generators_from(x[1])]

    def automorphisms(self, x):
        return [(x[0], m) for m in self.parts[x[0]].automorphisms(x[1])]


class FullSubgroupoid(FiniteGroupoid):
    """Full subgroupoid on the objects satisfying a predicate.

    The predicate must be invariant under isomorphism, so that generators of
    the parent stay inside.
    """

    def __init__(self, parent: FiniteGroupoid, keep: Callable[[Any], bool]):
        self.parent = parent
        self._objects = tuple(x for x in parent.objects if keep(x))

    def src(self, m):
        return self.parent.src(m)

    def tgt(self, m):
        return self.parent.tgt(m)

    def compose(self, m, n):
        return self.parent.compose(m, n)

    def identity(self, x):
        return self.parent.identity(x)

    def inverse(self, m):
        return self.parent.inverse(m)

    def morphisms_from(self, x):
        return [m for m in self.parent.morphisms_from(x) if self.has_object(self.parent.tgt(m))]

    def generators_from(self, x):
        return [m for m in self.parent.generators_from(x) if self.has_object(self.parent.tgt(m))]

    def automorphisms(self, x):
        return self.parent.automorphisms(x)


# ---------------------------------------------------------------------------
# functors


class GroupoidFunctor:
    """A functor given by object and morphism maps (callables)."""

    def __init__(self, domain: FiniteGroupoid, codomain: FiniteGroupoid,
                 on_objects: Callable, on_morphisms: Callable, name: str = ""):
        self.domain, self.codomain = domain, codomain
        self._fo, self._fm = on_objects, on_morphisms
        self.name = name

    def obj(self, x):
        return self._fo(x)

    def mor(self, m):
        return self._fm(m)

    def violations(self, exhaustive: bool = True) -> list[str]:
        """Functoriality failures, found by brute force."""
        D, C = self.domain, self.codomain
        errs = []
        for x in D.objects:
            fx = self.obj(x)
            if not C.has_object(fx):
                errs.append(f"object {x!r} maps outside the codomain")
                continue
            if self.mor(D.identity(x)) != C.identity(fx):
                errs.append(f"identity of {x!r} not preserved")
            ms = D.morphisms_from(x) if exhaustive else D.generators_from(x)
            for m in ms:
                fm = self.mor(m)
                if C.src(fm) != fx or C.tgt(fm) != self.obj(D.tgt(m)):
                    errs.append(f"morphism {m!r}: source/target not preserved")
                    continue
                ns = D.morphisms_from(D.tgt(m)) if exhaustive else D.generators_from(D.tgt(m))
                for n in ns:
                    if self.mor(D.compose(m, n)) != C.compose(fm, self.mor(n)):
                        errs.append(f"composite of {m!r} and {n!r} not preserved")
        return errs


def identity_functor(g: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(g, g, lambda x: x, lambda m: m, "id")


def compose_functors(*functors: GroupoidFunctor) -> GroupoidFunctor:
    """The composite applying the given functors from left to right."""
    fs = list(functors)

    def fo(x):
        for f in fs:
            x = f.obj(x)
        return x

    def fm(m):
        for f in fs:
            m = f.mor(m)
        return m

    return GroupoidFunctor(fs[0].domain, fs[-1].codomain, fo, fm,
                           ";".join(f.name for f in fs))


def name_of(g: FiniteGroupoid, b) -> GroupoidFunctor:
    """The functor 1 -> g picking out the object b."""
    one = terminal_groupoid()
    return GroupoidFunctor(one, g, lambda _x: b, lambda _m: g.identity(b), f"name({b!r})")


# ---------------------------------------------------------------------------
# homotopy pullbacks and fibres


class PullbackGroupoid(FiniteGroupoid):
    """Homotopy pullback of f: G -> B and h: E -> B.

    Objects are triples ``(x, y, phi)`` with ``phi: f(x) -> h(y)`` in B.  A
    morphism ``(x, y, phi) -> (x', y', phi')`` is a pair ``(beta, eps)`` with
    ``f(beta) ; phi' == phi ; h(eps)``; it is stored as ``(source, beta, eps)``.
    """

    def __init__(self, f: GroupoidFunctor, h: GroupoidFunctor):
        if f.codomain is not h.codomain:
            raise GroupoidError("pullback legs must share their codomain")
        self.f, self.h, self.base = f, h, f.codomain

    def _object_list(self):
        B = self.base
        by_comp = {}
        for y in self.h.domain.objects:
            by_comp.setdefault(B.component_index(self.h.obj(y)), []).append(y)
        out = []
        for x in self.f.domain.objects:
            fx = self.f.obj(x)
            for y in by_comp.get(B.component_index(fx), ()):
                for phi in B.hom(fx, self.h.obj(y)):
                    out.append((x, y, phi))
        return out

    def has_object(self, t) -> bool:
        return super().has_object(t)

    def src(self, m):
        return m[0]

    def tgt(self, m):
        (x, y, phi), beta, eps = m
        B = self.base
        G, E = self.f.domain, self.h.domain
        phi2 = B.compose(B.compose(B.inverse(self.f.mor(beta)), phi), self.h.mor(eps))
        return (G.tgt(beta), E.tgt(eps), phi2)

    def compose(self, m, n):
        G, E = self.f.domain, self.h.domain
        return (m[0], G.compose(m[1], n[1]), E.compose(m[2], n[2]))

    def identity(self, t):
        return (t, self.f.domain.identity(t[0]), self.h.domain.identity(t[1]))

    def inverse(self, m):
        G, E = self.f.domain, self.h.domain
        return (self.tgt(m), G.inverse(m[1]), E.inverse(m[2]))

    def morphisms_from(self, t):
        G, E = self.f.domain, self.h.domain
        return [(t, b, e) for b in G.morphisms_from(t[0]) for e in E.morphisms_from(t[1])]

    def generators_from(self, t):
        G, E = self.f.domain, self.h.domain
        idx, idy = G.identity(t[0]), E.identity(t[1])
        return ([(t, b, idy) for b in G.generators_from(t[0])]
                + [(t, idx, e) for e in E.generators_from(t[1])])

    def automorphisms(self, t):
        G, E = self.f.domain, self.h.domain
        return [(t, b, e) for b in G.automorphisms(t[0]) for e in E.automorphisms(t[1])
                if self.tgt((t, b, e)) == t]


def homotopy_pullback(f: GroupoidFunctor, h: GroupoidFunctor):
    """Return ``(P, p1, p2)`` with P the homotopy pullback and its projections."""
    P = PullbackGroupoid(f, h)
    p1 = GroupoidFunctor(P, f.domain, lambda t: t[0], lambda m: m[1], "pr1")
    p2 = GroupoidFunctor(P, h.domain, lambda t: t[1], lambda m: m[2], "pr2")
    return P, p1, p2


def homotopy_fiber(p: GroupoidFunctor, b) -> FiniteGroupoid:
    """Pullback of p along the name of b; objects are ``(x, "*", phi)``."""
    if not p.codomain.has_object(b):
        raise GroupoidError(f"{b!r} is not an object of the codomain")
    return PullbackGroupoid(p, name_of(p.codomain, b))


# ---------------------------------------------------------------------------
# predicates


def cardinality(g: FiniteGroupoid) -> Fraction:
    return g.cardinality()


def components(g: FiniteGroupoid) -> list[Component]:
    return g.components()


def _pi0_map(F: GroupoidFunctor) -> dict:
    D, C = F.domain, F.codomain
    return {i: C.component_index(F.obj(c.representative)) for i, c in enumerate(D.components())}


def is_essentially_surjective(F: GroupoidFunctor) -> bool:
    hit = set(_pi0_map(F).values())
    return len(hit) == len(F.codomain.components())


def is_fully_faithful(F: GroupoidFunctor) -> bool:
    """Hom-sets map bijectively.

    Hom-sets between isomorphic objects are torsors over automorphism groups,
    so it suffices that distinct components stay distinct and that every
    automorphism group of a representative maps bijectively.
    """
    D, C = F.domain, F.codomain
    images = _pi0_map(F)
    if len(set(images.values())) != len(images):
        return False
    for comp in D.components():
        x = comp.representative
        fx = F.obj(x)
        image = {F.mor(a) for a in D.automorphisms(x)}
        if len(image) != comp.aut_order or len(image) != len(C.automorphisms(fx)):
            return False
    return True


def is_equivalence(F: GroupoidFunctor) -> bool:
    return is_fully_faithful(F) and is_essentially_surjective(F)


def _fibers(F: GroupoidFunctor):
    for comp in F.codomain.components():
        yield homotopy_fiber(F, comp.representative)


def is_monomorphism(F: GroupoidFunctor) -> bool:
    """Every homotopy fibre is empty or contractible."""
    for fib in _fibers(F):
        comps = fib.components()
        if len(comps) > 1 or (comps and comps[0].aut_order != 1):
            return False
    return True


def is_discrete_map(F: GroupoidFunctor) -> bool:
    """Every homotopy fibre has only trivial automorphism groups."""
    return all(c.aut_order == 1 for fib in _fibers(F) for c in fib.components())


def is_finite_map(F: GroupoidFunctor) -> bool:
    # all groupoids handled here are finite
    return True


# ---------------------------------------------------------------------------
# constructions


def disjoint_union(gs: Iterable[FiniteGroupoid]) -> FiniteGroupoid:
    return DisjointUnion(list(gs))


def product(g: FiniteGroupoid, h: FiniteGroupoid) -> FiniteGroupoid:
    return ProductGroupoid([g, h])


def skeleton(g: FiniteGroupoid):
    """Full subgroupoid on component representatives, with its inclusion."""
    reps = {c.representative for c in g.components()}
    sk = FullSubgroupoid(g, lambda x: x in reps)
    return sk, GroupoidFunctor(sk, g, lambda x: x, lambda m: m, "skeleton")


def action_groupoid(mult: dict, unit, carrier: FiniteGroupoid,
                    act_obj: Callable, act_mor: Callable) -> TableGroupoid:
    """Action groupoid of a finite group acting on a finite groupoid.

    ``mult[(g, h)]`` is the product gh (apply h first, then g); the action is
    a left action.  A morphism ``(g, m)`` goes from ``src(m)`` to
    ``g . tgt(m)``.  Non-functorial action data raises GroupoidError.
    """
    elems = sorted({g for g, _ in mult} | {h for _, h in mult}, key=repr)
    inv = {}
    for g in elems:
        for h in elems:
            if mult[(g, h)] == unit and mult[(h, g)] == unit:
                inv[g] = h
        if g not in inv:
            raise GroupoidError(f"group element {g!r} has no inverse")
    for x in carrier.objects:
        if act_obj(unit, x) != x:
            raise GroupoidError(f"unit does not act trivially on {x!r}")
        for g in elems:
            gx = act_obj(g, x)
            if not carrier.has_object(gx):
                raise GroupoidError(f"action moves {x!r} outside the carrier")
            for h in elems:
                if act_obj(g, act_obj(h, x)) != act_obj(mult[(g, h)], x):
                    raise GroupoidError(f"action not compatible with the group law at {x!r}")
    for m in carrier.morphisms():
        if act_mor(unit, m) != m:
            raise GroupoidError(f"unit does not act trivially on {m!r}")
        for g in elems:
            gm = act_mor(g, m)
            if carrier.src(gm) != act_obj(g, carrier.src(m)) or carrier.tgt(gm) != act_obj(g, carrier.tgt(m)):
                raise GroupoidError(f"action on {m!r} does not respect endpoints")
            for n in carrier.morphisms_from(carrier.tgt(m)):
                if act_mor(g, carrier.compose(m, n)) != carrier.compose(gm, act_mor(g, n)):
                    raise GroupoidError("action does not preserve composition")
    objects = list(carrier.objects)
    ends, comp, ids = {}, {}, {}
    for g in elems:
        for m in carrier.morphisms():
            ends[(g, m)] = (carrier.src(m), act_obj(g, carrier.tgt(m)))
    for x in objects:
        ids[x] = (unit, carrier.identity(x))
    starting = {}
    for key, (s, _t) in ends.items():
        starting.setdefault(s, []).append(key)
    for (g, m), (s, t) in ends.items():
        for (h, n) in starting.get(t, ()):
            # (g, m) then (h, n):  x -> g.x' then g.x' -> h.y'
            comp[((g, m), (h, n))] = (mult[(h, g)], carrier.compose(m, act_mor(inv[g], n)))
    return TableGroupoid(objects, ends, comp, ids, validate=True)


# ---------------------------------------------------------------------------
# JSON


def _locate(text: str, pattern: str) -> int:
    match = re.search(pattern, text)
    return text.count("\n", 0, match.start()) + 1 if match else 1


def groupoid_from_json(text: str) -> TableGroupoid:
    """Parse and validate the JSON groupoid format.

    Errors carry the line of the offending entry.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupoidError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    for field in ("objects", "morphisms", "compose", "identities"):
        if field not in data:
            raise GroupoidError(f"line 1: missing field {field!r}")
    objects = data["objects"]
    ends = {}
    for entry in data["morphisms"]:
        mid = entry.get("id")
        line = _locate(text, r'"id"\s*:\s*' + re.escape(json.dumps(mid)))
        if mid in ends:
            raise GroupoidError(f"line {line}: duplicate morphism id {mid!r}")
        if entry.get("src") not in objects or entry.get("tgt") not in objects:
            raise GroupoidError(f"line {line}: morphism {mid!r} has an endpoint that is not an object")
        ends[mid] = (entry["src"], entry["tgt"])
    comp = {}
    for entry in data["compose"]:
        pat = r"\[\s*" + r"\s*,\s*".join(re.escape(json.dumps(v)) for v in entry[:2])
        line = _locate(text, pat)
        if len(entry) != 3 or any(v not in ends for v in entry):
            raise GroupoidError(f"line {line}: compose entry {entry!r} names unknown morphisms")
        m, n, mn = entry
        if ends[m][1] != ends[n][0]:
            raise GroupoidError(f"line {line}: compose entry {entry!r} is not a composable pair")
        if ends[mn] != (ends[m][0], ends[n][1]):
            raise GroupoidError(f"line {line}: compose entry {entry!r} has wrong endpoints")
        comp[(m, n)] = mn
    ids = {}
    for x in objects:
        key = x if isinstance(x, str) else str(x)
        if key not in data["identities"]:
            line = _locate(text, '"identities"')
            raise GroupoidError(f"line {line}: object {x!r} has no identity")
        ids[x] = data["identities"][key]
    try:
        return TableGroupoid(objects, ends, comp, ids, validate=True)
    except GroupoidError as exc:
        line = _locate(text, '"compose"')
        raise GroupoidError(f"line {line}: {exc}") from None


def groupoid_to_json(g: FiniteGroupoid) -> str:
    if not isinstance(g, TableGroupoid):
        g = to_table(g)
    return json.dumps(g.to_json_data(), indent=1)


def to_table(g: FiniteGroupoid) -> TableGroupoid:
    """Explicit table copy with objects and morphisms renamed to strings."""
    obj_name = {x: f"o{i}" for i, x in enumerate(g.objects)}
    mors = g.morphisms()
    mor_name = {m: f"m{i}" for i, m in enumerate(mors)}
    ends = {mor_name[m]: (obj_name[g.src(m)], obj_name[g.tgt(m)]) for m in mors}
    comp = {}
    for m in mors:
        for n in g.morphisms_from(g.tgt(m)):
            comp[(mor_name[m], mor_name[n])] = mor_name[g.compose(m, n)]
    ids = {obj_name[x]: mor_name[g.identity(x)] for x in g.objects}
    return TableGroupoid(list(obj_name.values()), ends, comp, ids, validate=False)
