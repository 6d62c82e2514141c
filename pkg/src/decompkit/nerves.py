"""Finite categories and the simplicial groupoids built from them.

Chains of composable arrows are stored as ``(vertices, arrows)`` with
``arrows[i]`` going from ``vertices[i]`` to ``vertices[i + 1]``.
"""

from __future__ import annotations

import json
from itertools import product as cartesian
from typing import Callable

from .groupoid import (DiscreteGroupoid, FiniteGroupoid, GroupoidError,
                       GroupoidFunctor, ProductGroupoid)
from .simplicial import TruncatedSimplicialGroupoid, additive_merge


class FiniteCategory:
    """A finite category given by tables; composition is diagrammatic."""

    def __init__(self, objects, arrows: dict, composition: dict, identities: dict,
                 validate: bool = True, names: dict | None = None):
        self.objects = tuple(objects)
        self.arrows = dict(arrows)
        self.composition = dict(composition)
        self.identities = dict(identities)
        self.names = names or {}
        self._out = {x: [] for x in self.objects}
        for m, (s, _t) in self.arrows.items():
            self._out[s].append(m)
        if validate:
            errs = self.violations()
            if errs:
                raise GroupoidError(errs[0])
        self._inverse = {}
        for m, (s, t) in self.arrows.items():
            for n in self._out[t]:
                if (self.arrows[n][1] == s and self.composition[(m, n)] == self.identities[s]
                        and self.composition[(n, m)] == self.identities[t]):
                    self._inverse[m] = n
                    break

    def violations(self) -> list[str]:
        errs = []
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.arrows.get(i) != (x, x):
                errs.append(f"identity of {x!r} missing")
        if errs:
            return errs
        for m, (s, t) in self.arrows.items():
            for n in self._out[t]:
                mn = self.composition.get((m, n))
                if mn is None:
                    errs.append(f"composite of {m!r} and {n!r} missing")
                elif self.arrows.get(mn) != (s, self.arrows[n][1]):
                    errs.append(f"composite of {m!r} and {n!r} has wrong endpoints")
        if errs:
            return errs
        for m, (s, t) in self.arrows.items():
            if self.composition[(self.identities[s], m)] != m or self.composition[(m, self.identities[t])] != m:
                errs.append(f"identities are not units for {m!r}")
            for n in self._out[t]:
                for p in self._out[self.arrows[n][1]]:
                    if (self.composition[(self.composition[(m, n)], p)]
                            != self.composition[(m, self.composition[(n, p)])]):
                        errs.append(f"composition not associative on ({m!r}, {n!r}, {p!r})")
        return errs

    def src(self, m):
        return self.arrows[m][0]

    def tgt(self, m):
        return self.arrows[m][1]

    def compose(self, m, n):
        return self.composition[(m, n)]

    def arrows_from(self, x) -> list:
        return self._out[x]

    def is_iso(self, m) -> bool:
        return m in self._inverse

    def inverse(self, m):
        return self._inverse[m]

    def isos_from(self, x) -> list:
        return [m for m in self._out[x] if m in self._inverse]

    def automorphisms(self, x) -> list:
        return [m for m in self.isos_from(x) if self.tgt(m) == x]

    def op(self) -> "FiniteCategory":
        arrows = {m: (t, s) for m, (s, t) in self.arrows.items()}
        comp = {(n, m): mn for (m, n), mn in self.composition.items()}
        return FiniteCategory(self.objects, arrows, comp, self.identities, validate=False, names=self.names)

    def core(self) -> "CoreGroupoid":
        return CoreGroupoid(self)

    @classmethod
    def from_poset(cls, elements, leq: Callable) -> "FiniteCategory":
        elements = list(elements)
        arrows = {(a, b): (a, b) for a in elements for b in elements if leq(a, b)}
        comp = {((a, b), (b2, c)): (a, c) for (a, b) in arrows for (b2, c) in arrows if b == b2}
        ids = {a: (a, a) for a in elements}
        return cls(elements, arrows, comp, ids, validate=False)

    @classmethod
    def from_json(cls, text: str) -> "FiniteCategory":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GroupoidError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
        for field in ("objects", "arrows", "compose", "identities"):
            if field not in data:
                raise GroupoidError(f"missing field {field!r}")
        arrows = {a["id"]: (a["src"], a["tgt"]) for a in data["arrows"]}
        comp = {(m, n): mn for m, n, mn in data["compose"]}
        ids = {x: data["identities"][x] for x in data["objects"]}
        return cls(data["objects"], arrows, comp, ids)

    def to_json(self) -> str:
        return json.dumps({
            "objects": list(self.objects),
            "arrows": [{"id": m, "src": s, "tgt": t} for m, (s, t) in self.arrows.items()],
            "compose": [[m, n, mn] for (m, n), mn in self.composition.items()],
            "identities": dict(self.identities),
        }, indent=1)


class CoreGroupoid(FiniteGroupoid):
    """Objects of a category with its invertible arrows."""

    def __init__(self, cat: FiniteCategory):
        self.cat = cat
        self._objects = cat.objects

    def src(self, m):
        return self.cat.src(m)

    def tgt(self, m):
        return self.cat.tgt(m)

    def compose(self, m, n):
        return self.cat.compose(m, n)

    def identity(self, x):
        return self.cat.identities[x]

    def inverse(self, m):
        return self.cat.inverse(m)

    def morphisms_from(self, x):
        return self.cat.isos_from(x)


# ---------------------------------------------------------------------------
# chains


def composable_chains(cat: FiniteCategory, n: int) -> list:
    """All chains of n composable arrows."""
    chains = [((x,), ()) for x in cat.objects]
    for _ in range(n):
        chains = [(vs + (cat.tgt(a),), arr + (a,)) for vs, arr in chains for a in cat.arrows_from(vs[-1])]
    return chains


def _chain_face(cat: FiniteCategory, n: int, i: int):
    def face(chain):
        vs, arr = chain
        if i == 0:
            return vs[1:], arr[1:]
        if i == n:
            return vs[:-1], arr[:-1]
        return vs[:i] + vs[i + 1:], arr[:i - 1] + (cat.compose(arr[i - 1], arr[i]),) + arr[i + 1:]
    return face


def _chain_degeneracy(cat: FiniteCategory, i: int):
    def degen(chain):
        vs, arr = chain
        return vs[:i + 1] + vs[i:], arr[:i] + (cat.identities[vs[i]],) + arr[i:]
    return degen


def nerve(cat: FiniteCategory, N: int, key_of: Callable | None = None) -> TruncatedSimplicialGroupoid:
    """Strict nerve: level n is the discrete set of composable n-chains."""
    levels = [DiscreteGroupoid(composable_chains(cat, n)) for n in range(N + 1)]
    faces, degens = {}, {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            f = _chain_face(cat, n, i)
            faces[(n, i)] = GroupoidFunctor(levels[n], levels[n - 1], f,
                                            lambda m, f=f: ("id", f(m[1])), f"d{i}")
    for n in range(N):
        for i in range(n + 1):
            s = _chain_degeneracy(cat, i)
            degens[(n, i)] = GroupoidFunctor(levels[n], levels[n + 1], s,
                                             lambda m, s=s: ("id", s(m[1])), f"s{i}")
    if key_of is None:
        key_of = lambda chain: str(cat.names.get(chain[1][0], chain[1][0]))
    return TruncatedSimplicialGroupoid(levels, faces, degens, name="nerve", key_of=key_of)


class FatNerveLevel(FiniteGroupoid):
    """Chains of n composable arrows with invertible natural transformations.

    A morphism is ``(chain, us)`` where ``us[i]`` is an iso out of vertex i;
    its target has arrows ``inverse(us[i-1]) ; arrows[i-1] ; us[i]``.
    """

    def __init__(self, cat: FiniteCategory, n: int, chains=None):
        self.cat, self.n = cat, n
        self._objects = tuple(composable_chains(cat, n) if chains is None else chains)

    def src(self, m):
        return m[0]

    def tgt(self, m):
        (vs, arr), us = m
        C = self.cat
        new_arr = tuple(C.compose(C.compose(C.inverse(us[i]), a), us[i + 1]) for i, a in enumerate(arr))
        return tuple(C.tgt(u) for u in us), new_arr

    def compose(self, m, n):
        C = self.cat
        return (m[0], tuple(C.compose(u, v) for u, v in zip(m[1], n[1])))

    def identity(self, x):
        return (x, tuple(self.cat.identities[v] for v in x[0]))

    def inverse(self, m):
        return (self.tgt(m), tuple(self.cat.inverse(u) for u in m[1]))

    def morphisms_from(self, x):
        return [(x, us) for us in cartesian(*(self.cat.isos_from(v) for v in x[0]))]

    def generators_from(self, x):
        ids = self.identity(x)[1]
        out = []
        for i, v in enumerate(x[0]):
            for u in self.cat.isos_from(v):
                if u != ids[i]:
                    out.append((x, ids[:i] + (u,) + ids[i + 1:]))
        return out

    def automorphisms(self, x):
        C = self.cat
        vs, arr = x
        found = []

        def extend(prefix):
            i = len(prefix)
            if i == len(vs):
                found.append((x, tuple(prefix)))
                return
            for u in C.automorphisms(vs[i]):
                if i and C.compose(prefix[-1], arr[i - 1]) != C.compose(arr[i - 1], u):
                    continue
                extend(prefix + [u])

        extend([])
        return found


def fat_nerve(cat: FiniteCategory, N: int, key_of: Callable | None = None) -> TruncatedSimplicialGroupoid:
    """Fat nerve: functors [n] -> C and their invertible natural transformations."""
    levels = [FatNerveLevel(cat, n) for n in range(N + 1)]
    faces, degens = {}, {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            f = _chain_face(cat, n, i)
            faces[(n, i)] = GroupoidFunctor(
                levels[n], levels[n - 1], f,
                lambda m, f=f, i=i: (f(m[0]), m[1][:i] + m[1][i + 1:]), f"d{i}")
    for n in range(N):
        for i in range(n + 1):
            s = _chain_degeneracy(cat, i)
            degens[(n, i)] = GroupoidFunctor(
                levels[n], levels[n + 1], s,
                lambda m, s=s, i=i: (s(m[0]), m[1][:i + 1] + m[1][i:]), f"s{i}")
    if key_of is None:
        key_of = lambda chain: str(cat.names.get(chain[1][0], chain[1][0]))
    return TruncatedSimplicialGroupoid(levels, faces, degens, name="fat nerve", key_of=key_of)


# ---------------------------------------------------------------------------
# monoidal groupoids


class MonoidalGroupoidPresentation:
    """A strict monoidal structure on a finite groupoid.

    ``tensor_obj`` and ``tensor_mor`` may leave the carrier (for windowed
    presentations such as sets of size at most 3); the nerve keeps only the
    tuples whose total product stays inside.
    """

    def __init__(self, carrier: FiniteGroupoid, tensor_obj: Callable, tensor_mor: Callable, unit,
                 key_of: Callable | None = None, validate: bool = True):
        self.carrier, self.unit = carrier, unit
        self.tensor_obj, self.tensor_mor = tensor_obj, tensor_mor
        self.key_of = key_of or str
        if validate:
            errs = self.violations()
            if errs:
                raise GroupoidError(errs[0] + "; replace the data by a strict (skeletal) model")

    def violations(self) -> list[str]:
        C, t, tm = self.carrier, self.tensor_obj, self.tensor_mor
        errs = []
        if not C.has_object(self.unit):
            return ["unit is not an object of the carrier"]
        uid = C.identity(self.unit)
        for x in C.objects:
            if t(self.unit, x) != x or t(x, self.unit) != x:
                errs.append(f"unit law fails on {x!r}")
            for m in C.morphisms_from(x):
                if tm(uid, m) != m or tm(m, uid) != m:
                    errs.append(f"unit law fails on morphism {m!r}")
        for x in C.objects:
            for y in C.objects:
                xy = t(x, y)
                if not C.has_object(xy):
                    continue
                for z in C.objects:
                    if C.has_object(t(xy, z)) and t(xy, z) != t(x, t(y, z)):
                        errs.append(f"tensor not strictly associative on {(x, y, z)!r}")
        for x in C.objects:
            for y in C.objects:
                if not C.has_object(t(x, y)):
                    continue
                for m in C.morphisms_from(x):
                    for n in C.morphisms_from(y):
                        tmn = tm(m, n)
                        if C.src(tmn) != t(x, y) or C.tgt(tmn) != t(C.tgt(m), C.tgt(n)):
                            errs.append(f"tensor of morphisms {m!r}, {n!r} has wrong endpoints")
                            continue
                        for m2 in C.morphisms_from(C.tgt(m))[:3]:
                            for n2 in C.morphisms_from(C.tgt(n))[:3]:
                                if tm(C.compose(m, m2), C.compose(n, n2)) != C.compose(tmn, tm(m2, n2)):
                                    errs.append("tensor is not functorial")
        return errs

    def tensor_all(self, xs):
        out = self.unit
        for x in xs:
            out = self.tensor_obj(out, x)
        return out

    def tensor_all_mor(self, ms):
        out = self.carrier.identity(self.unit)
        for m in ms:
            out = self.tensor_mor(out, m)
        return out


def monoidal_nerve(m: MonoidalGroupoidPresentation, N: int, weight: Callable | None = None,
                   bound=None, merge: Callable = additive_merge,
                   keep: Callable | None = None) -> TruncatedSimplicialGroupoid:
    """Level n is carrier^n (tuples whose product stays in the carrier).

    Inner faces tensor adjacent factors, outer faces project away the first
    or last factor, degeneracies insert the unit.  ``weight`` grades carrier
    objects; ``keep`` may restrict the tuples further (a window).
    """
    C = m.carrier

    def admissible(xs):
        if keep is not None and not keep(xs):
            return False
        acc = m.unit
        for x in xs:
            acc = m.tensor_obj(acc, x)
            if not C.has_object(acc):
                return False
        return True

    levels = []
    for n in range(N + 1):
        tuples = [xs for xs in cartesian(*([C.objects] * n)) if admissible(xs)]
        levels.append(ProductGroupoid([C] * n, tuples))

    def face(n, i):
        if i == 0:
            return lambda xs: xs[1:], lambda ms: ms[1:]
        if i == n:
            return lambda xs: xs[:-1], lambda ms: ms[:-1]
        return (lambda xs: xs[:i - 1] + (m.tensor_obj(xs[i - 1], xs[i]),) + xs[i + 1:],
                lambda ms: ms[:i - 1] + (m.tensor_mor(ms[i - 1], ms[i]),) + ms[i + 1:])

    faces, degens = {}, {}
    for n in range(1, N + 1):
        for i in range(n + 1):
            fo, fm = face(n, i)
            faces[(n, i)] = GroupoidFunctor(levels[n], levels[n - 1], fo, fm, f"d{i}")
    uid = C.identity(m.unit)
    for n in range(N):
        for i in range(n + 1):
            degens[(n, i)] = GroupoidFunctor(
                levels[n], levels[n + 1],
                lambda xs, i=i: xs[:i] + (m.unit,) + xs[i:],
                lambda ms, i=i: ms[:i] + (uid,) + ms[i:], f"s{i}")
    level_weight = None
    if weight is not None:
        def level_weight(n, xs):
            return weight(m.tensor_all(xs))
    return TruncatedSimplicialGroupoid(levels, faces, degens, level_weight, bound, merge,
                                       name="monoidal nerve", key_of=lambda xs: m.key_of(xs[0]))


def discrete_monoid(elements, op: Callable, unit, key_of: Callable | None = None) -> MonoidalGroupoidPresentation:
    """A (windowed) monoid viewed as a discrete monoidal groupoid."""
    carrier = DiscreteGroupoid(elements)
    return MonoidalGroupoidPresentation(
        carrier, op, lambda a, b: ("id", op(a[1], b[1])), unit, key_of=key_of, validate=False)
