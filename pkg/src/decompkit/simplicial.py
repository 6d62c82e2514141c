"""Truncated simplicial groupoids and their axiom checkers.

A simplicial groupoid is stored level by level, with face and degeneracy
functors.  Every square the checkers look at commutes strictly, and is tested
for being a homotopy pullback by comparing the apex with the pullback on the
level of components and automorphism groups.  That comparison only needs one
representative per component of each corner, which keeps the checks cheap
even when the pullback groupoid itself would be large.

Optionally a space carries a *weight* (an additive grading on objects) and a
bound.  The levels of a windowed space only contain simplices up to the
bound, so pullback components whose weight exceeds it are ignored.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from .groupoid import (DiscreteGroupoid, FiniteGroupoid, GroupoidFunctor,
                       compose_functors, is_monomorphism)


@dataclass(frozen=True)
class CheckResult:
    check: str
    level: int
    square: str
    status: str
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class Report(list):
    """A list of CheckResult entries."""

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self)

    def failures(self) -> list[CheckResult]:
        return [r for r in self if not r.passed]

    def to_json_data(self) -> list[dict]:
        return [asdict(r) for r in self]

    def to_json(self) -> str:
        return json.dumps(self.to_json_data(), indent=1, sort_keys=True)


def _describe(x, limit: int = 120) -> str:
    s = repr(x)
    return s if len(s) <= limit else s[:limit - 3] + "..."


def additive_merge(wx, wy, wc):
    return wx + wy - wc


class TruncatedSimplicialGroupoid:
    """Levels X_0..X_N with strict face and degeneracy functors.

    ``faces[(n, i)]`` is d_i: X_n -> X_{n-1};  ``degeneracies[(n, i)]`` is
    s_i: X_n -> X_{n+1}.
    """

    def __init__(self, levels: Sequence[FiniteGroupoid], faces: dict, degeneracies: dict,
                 weight: Callable | None = None, weight_bound=None,
                 weight_merge: Callable = additive_merge, name: str = "",
                 key_of: Callable | None = None):
        self.levels = list(levels)
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)
        self.weight = weight
        self.weight_bound = weight_bound
        self.weight_merge = weight_merge
        self.name = name
        # canonical key of a 1-simplex, used when comparing with fiber oracles
        self.key_of = key_of

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> FiniteGroupoid:
        return self.levels[n]

    def face(self, n: int, i: int) -> GroupoidFunctor:
        return self.faces[(n, i)]

    def degeneracy(self, n: int, i: int) -> GroupoidFunctor:
        return self.degeneracies[(n, i)]

    def level_weight(self, n: int):
        if self.weight is None:
            return None
        return lambda x: self.weight(n, x)

    def long_edge(self, n: int) -> GroupoidFunctor:
        """X_n -> X_1 given by the composite of inner faces (s_0 for n = 0)."""
        if n == 0:
            return self.degeneracy(0, 0)
        if n == 1:
            return GroupoidFunctor(self.levels[1], self.levels[1], lambda x: x, lambda m: m, "id")
        return compose_functors(*[self.face(k, 1) for k in range(n, 1, -1)])

    def principal_edge(self, n: int, i: int) -> GroupoidFunctor:
        """X_n -> X_1 extracting the edge from vertex i-1 to vertex i (1 <= i <= n)."""
        fs = []
        level = n
        for _ in range(n - i):
            fs.append(self.face(level, level))
            level -= 1
        for _ in range(i - 1):
            fs.append(self.face(level, 0))
            level -= 1
        if not fs:
            return GroupoidFunctor(self.levels[1], self.levels[1], lambda x: x, lambda m: m, "id")
        return compose_functors(*fs)


class SimplicialMap:
    """Level functors F_n: X_n -> Y_n for the levels both spaces share."""

    def __init__(self, source: TruncatedSimplicialGroupoid, target: TruncatedSimplicialGroupoid,
                 functors: Sequence[GroupoidFunctor], name: str = ""):
        self.source, self.target = source, target
        self.functors = list(functors)
        self.name = name

    @property
    def max_level(self) -> int:
        return len(self.functors) - 1

    def __getitem__(self, n: int) -> GroupoidFunctor:
        return self.functors[n]

    def violations(self) -> list[str]:
        """Failures of strict commutation with faces and degeneracies."""
        X, Y = self.source, self.target
        errs = []
        for n in range(1, self.max_level + 1):
            for i in range(n + 1):
                lhs = compose_functors(self[n], Y.face(n, i))
                rhs = compose_functors(X.face(n, i), self[n - 1])
                w = _functor_difference(lhs, rhs)
                if w:
                    errs.append(f"F d_{i} != d_{i} F at level {n}: {w}")
        for n in range(self.max_level):
            for i in range(n + 1):
                lhs = compose_functors(self[n], Y.degeneracy(n, i))
                rhs = compose_functors(X.degeneracy(n, i), self[n + 1])
                w = _functor_difference(lhs, rhs)
                if w:
                    errs.append(f"F s_{i} != s_{i} F at level {n}: {w}")
        return errs


def _functor_difference(F: GroupoidFunctor, G: GroupoidFunctor) -> str:
    """Empty if F and G agree on objects and generating morphisms."""
    D = F.domain
    for x in D.objects:
        if F.obj(x) != G.obj(x):
            return f"object {_describe(x)}"
        for m in D.generators_from(x):
            if F.mor(m) != G.mor(m):
                return f"morphism {_describe(m)}"
    return ""


# ---------------------------------------------------------------------------
# pullback squares


def square_witness(g: GroupoidFunctor, v: GroupoidFunctor, f: GroupoidFunctor,
                   h: GroupoidFunctor, weights=None, bound=None,
                   merge: Callable = additive_merge) -> str:
    """Decide whether a strictly commuting square is a homotopy pullback.

    The square is  A --g--> G --f--> B  and  A --v--> E --h--> B  with
    f g = h v.  Returns "" when the comparison A -> G x_B E is an
    equivalence, otherwise a description of the first failure.

    Components of the pullback over a pair of representatives (x, y) are the
    orbits of Aut(x) x Aut(y) on Hom_B(f x, h y); the stabiliser of an orbit
    is the automorphism group of that component.  ``weights`` is an optional
    triple of weight functions for G, E and B; pullback components whose
    merged weight exceeds ``bound`` lie outside the window and are skipped.
    """
    A, G, E, B = g.domain, g.codomain, v.codomain, f.codomain
    by_base = {}
    for c in E.components():
        by_base.setdefault(B.component_index(h.obj(c.representative)), []).append(c.representative)
    orbit_of = {}
    pb_components = []
    for cg in G.components():
        xb = cg.representative
        fx = f.obj(xb)
        ys = by_base.get(B.component_index(fx), ())
        if not ys:
            continue
        f_auts = [B.inverse(f.mor(b)) for b in G.automorphisms(xb)]
        for yb in ys:
            h_auts = [h.mor(e) for e in E.automorphisms(yb)]
            group_order = len(f_auts) * len(h_auts)
            seen = {}
            for phi in B.hom(fx, h.obj(yb)):
                if phi in seen:
                    continue
                idx = len(pb_components)
                orbit = [phi]
                seen[phi] = idx
                frontier = [phi]
                while frontier:
                    cur = frontier.pop()
                    moves = [B.compose(fb, cur) for fb in f_auts] + [B.compose(cur, he) for he in h_auts]
                    for nxt in moves:
                        if nxt not in seen:
                            seen[nxt] = idx
                            orbit.append(nxt)
                            frontier.append(nxt)
                weight = None
                if weights is not None:
                    wg, we, wb = weights
                    weight = merge(wg(xb), we(yb), wb(fx))
                pb_components.append((xb, yb, group_order // len(orbit), weight))
            for phi, idx in seen.items():
                orbit_of[(xb, yb, phi)] = idx
    hit = {}
    for ca in A.components():
        a = ca.representative
        x, y = g.obj(a), v.obj(a)
        t, s = G.transport(x), E.transport(y)
        xb, yb = G.representative(x), E.representative(y)
        phi = B.compose(f.mor(t), B.inverse(h.mor(s)))
        idx = orbit_of.get((xb, yb, phi))
        if idx is None:
            return f"no pullback component for {_describe(a)}"
        if idx in hit:
            return (f"{_describe(a)} and {_describe(hit[idx])} are not isomorphic "
                    f"but land in the same pullback component")
        hit[idx] = a
        stab = pb_components[idx][2]
        if ca.aut_order != stab:
            return (f"automorphism group of {_describe(a)} has order {ca.aut_order}, "
                    f"its pullback component has {stab}")
        t_inv, s_inv = G.inverse(t), E.inverse(s)
        image = {(G.compose(G.compose(t, g.mor(al)), t_inv), E.compose(E.compose(s, v.mor(al)), s_inv))
                 for al in A.automorphisms(a)}
        if len(image) != ca.aut_order:
            return f"automorphisms of {_describe(a)} do not map injectively"
    for idx, (xb, yb, stab, weight) in enumerate(pb_components):
        if idx in hit:
            continue
        if bound is not None and weight is not None and weight > bound:
            continue
        return f"pullback component over ({_describe(xb)}, {_describe(yb)}) is not in the image"
    return ""


def _square(check, level, label, g, v, f, h, weights, bound, merge) -> CheckResult:
    w = square_witness(g, v, f, h, weights, bound, merge)
    return CheckResult(check, level, label, "fail" if w else "pass", w)


def _weights(x: TruncatedSimplicialGroupoid, ng, ne, nb, y: TruncatedSimplicialGroupoid | None = None):
    y = y or x
    if x.weight is None or y.weight is None:
        return None
    return (x.level_weight(ng), y.level_weight(ne), y.level_weight(nb))


# ---------------------------------------------------------------------------
# checkers


def check_simplicial_identities(x: TruncatedSimplicialGroupoid) -> Report:
    """Report every violated simplicial identity (empty report when valid)."""
    N = x.max_level
    d, s = x.face, x.degeneracy
    rep = Report()

    def compare(label, n, lhs, rhs):
        w = _functor_difference(compose_functors(*lhs), compose_functors(*rhs))
        if w:
            rep.append(CheckResult("simplicial-identities", n, label, "fail", w))

    for n in range(2, N + 1):
        for j in range(1, n + 1):
            for i in range(j):
                compare(f"d{i} d{j} = d{j - 1} d{i}", n, [d(n, j), d(n - 1, i)], [d(n, i), d(n - 1, j - 1)])
    for n in range(N):
        for j in range(n + 1):
            ident = GroupoidFunctor(x.level(n), x.level(n), lambda o: o, lambda m: m)
            compare(f"d{j} s{j} = id", n, [s(n, j), d(n + 1, j)], [ident])
            compare(f"d{j + 1} s{j} = id", n, [s(n, j), d(n + 1, j + 1)], [ident])
            for i in range(j):
                if n >= 1:
                    compare(f"d{i} s{j} = s{j - 1} d{i}", n, [s(n, j), d(n + 1, i)], [d(n, i), s(n - 1, j - 1)])
            for i in range(j + 2, n + 2):
                if n >= 1:
                    compare(f"d{i} s{j} = s{j} d{i - 1}", n, [s(n, j), d(n + 1, i)], [d(n, i - 1), s(n - 1, j)])
    for n in range(N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                compare(f"s{i} s{j} = s{j + 1} s{i}", n, [s(n, j), s(n + 1, i)], [s(n, i), s(n + 1, j + 1)])
    return rep


def check_segal(x: TruncatedSimplicialGroupoid, up_to: int | None = None) -> Report:
    """Segal squares X_{n+1} -> X_n x_{X_{n-1}} X_n for n = 1..up_to."""
    N = x.max_level
    up_to = N - 1 if up_to is None else up_to
    if up_to > N - 1:
        raise ValueError(f"Segal squares up to {up_to} need level {up_to + 1} > {N}")
    rep = Report()
    for n in range(1, up_to + 1):
        g, v = x.face(n + 1, 0), x.face(n + 1, n + 1)
        f, h = x.face(n, n), x.face(n, 0)
        rep.append(_square("segal", n + 1, f"(d0, d{n + 1}) over X{n - 1}", g, v, f, h,
                           _weights(x, n, n, n - 1), x.weight_bound, x.weight_merge))
    return rep


def decomposition_squares(x: TruncatedSimplicialGroupoid, up_to: int):
    """The generic/free squares indexed by n <= up_to and 0 <= k <= n.

    Each entry is ``(label, apex level, g, v, f, h, levels of G, E, B)``.
    """
    N = x.max_level
    d, s = x.face, x.degeneracy
    out = []
    for n in range(up_to + 1):
        for k in range(n + 1):
            if n + 2 <= N:
                out.append((f"bottom: s{k + 1} over s{k} (n={n})", n + 1,
                            s(n + 1, k + 1), d(n + 1, 0), d(n + 2, 0), s(n, k), (n + 2, n, n + 1)))
                out.append((f"top: s{k} over s{k} (n={n})", n + 1,
                            s(n + 1, k), d(n + 1, n + 1), d(n + 2, n + 2), s(n, k), (n + 2, n, n + 1)))
            if n + 3 <= N:
                out.append((f"bottom: d{k + 2} over d{k + 1} (n={n})", n + 3,
                            d(n + 3, k + 2), d(n + 3, 0), d(n + 2, 0), d(n + 2, k + 1), (n + 2, n + 2, n + 1)))
                out.append((f"top: d{k + 1} over d{k + 1} (n={n})", n + 3,
                            d(n + 3, k + 1), d(n + 3, n + 3), d(n + 2, n + 2), d(n + 2, k + 1),
                            (n + 2, n + 2, n + 1)))
    return out


def check_decomposition(x: TruncatedSimplicialGroupoid, up_to: int | None = None) -> Report:
    """Test the generic/free pullback squares listed for decomposition spaces."""
    N = x.max_level
    up_to = N - 3 if up_to is None else up_to
    if up_to < 0 or up_to + 3 > N:
        raise ValueError(f"decomposition squares up to n={up_to} need level {up_to + 3} > {N}")
    rep = Report()
    for label, apex, g, v, f, h, (ng, ne, nb) in decomposition_squares(x, up_to):
        rep.append(_square("decomposition", apex, label, g, v, f, h,
                           _weights(x, ng, ne, nb), x.weight_bound, x.weight_merge))
    return rep


def check_complete(x: TruncatedSimplicialGroupoid) -> bool:
    """Is s_0: X_0 -> X_1 a monomorphism?"""
    return is_monomorphism(x.degeneracy(0, 0))


def check_culf(F: SimplicialMap, up_to: int | None = None) -> Report:
    """Cartesian squares of F against degeneracies and inner faces."""
    X, Y = F.source, F.target
    N = F.max_level
    up_to = N - 2 if up_to is None else up_to
    rep = Report()
    for n in range(up_to + 1):
        for i in range(n + 1):
            if n + 1 <= N:
                ws = _weights(X, n + 1, n, n + 1, Y)
                rep.append(_square("culf", n, f"F against s{i}", X.degeneracy(n, i), F[n],
                                   F[n + 1], Y.degeneracy(n, i), ws, X.weight_bound, X.weight_merge))
            if n + 2 <= N:
                ws = _weights(X, n + 1, n + 2, n + 1, Y)
                rep.append(_square("culf", n + 2, f"F against d{i + 1}", X.face(n + 2, i + 1), F[n + 2],
                                   F[n + 1], Y.face(n + 2, i + 1), ws, X.weight_bound, X.weight_merge))
    return rep


# ---------------------------------------------------------------------------
# decalage


def decalage_lower(x: TruncatedSimplicialGroupoid):
    """Drop the bottom face and degeneracy; return (Dec, dec map d_0)."""
    if x.max_level < 3:
        raise ValueError("decalage needs at least four levels")
    N = x.max_level - 1
    faces = {(n, i): x.face(n + 1, i + 1) for n in range(1, N + 1) for i in range(n + 1)}
    degens = {(n, i): x.degeneracy(n + 1, i + 1) for n in range(N) for i in range(n + 1)}
    weight = None if x.weight is None else (lambda n, o: x.weight(n + 1, o))
    dec = TruncatedSimplicialGroupoid(x.levels[1:], faces, degens, weight, x.weight_bound,
                                      x.weight_merge, f"Dec_bottom({x.name})")
    dmap = SimplicialMap(dec, x, [x.face(n + 1, 0) for n in range(N + 1)], "d_bottom")
    return dec, dmap


def decalage_upper(x: TruncatedSimplicialGroupoid):
    """Drop the top face and degeneracy; return (Dec, dec map d_top)."""
    if x.max_level < 3:
        raise ValueError("decalage needs at least four levels")
    N = x.max_level - 1
    faces = {(n, i): x.face(n + 1, i) for n in range(1, N + 1) for i in range(n + 1)}
    degens = {(n, i): x.degeneracy(n + 1, i) for n in range(N) for i in range(n + 1)}
    weight = None if x.weight is None else (lambda n, o: x.weight(n + 1, o))
    dec = TruncatedSimplicialGroupoid(x.levels[1:], faces, degens, weight, x.weight_bound,
                                      x.weight_merge, f"Dec_top({x.name})")
    dmap = SimplicialMap(dec, x, [x.face(n + 1, n + 1) for n in range(N + 1)], "d_top")
    return dec, dmap


def components_quotient(x: TruncatedSimplicialGroupoid):
    """The levelwise set of components pi_0 X, with the projection X -> pi_0 X."""
    levels = [DiscreteGroupoid([c.representative for c in lv.components()]) for lv in x.levels]

    def induced(F, source, target):
        on_obj = lambda o: F.codomain.representative(F.obj(o))
        return GroupoidFunctor(source, target, on_obj, lambda m: ("id", on_obj(m[1])))

    faces = {(n, i): induced(F, levels[n], levels[n - 1]) for (n, i), F in x.faces.items()}
    degens = {(n, i): induced(F, levels[n], levels[n + 1]) for (n, i), F in x.degeneracies.items()}
    quotient = TruncatedSimplicialGroupoid(levels, faces, degens, x.weight, x.weight_bound,
                                           x.weight_merge, f"pi0({x.name})", key_of=x.key_of)
    proj = SimplicialMap(x, quotient, [
        GroupoidFunctor(lv, levels[n], lambda o, lv=lv: lv.representative(o),
                        lambda m, lv=lv: ("id", lv.representative(lv.src(m))))
        for n, lv in enumerate(x.levels)], "components")
    return quotient, proj
