"""Explicit identifications of decalages with (fat) nerves.

Each identification is a levelwise functor from a decalage to a nerve.  The
verifier checks that every level functor is an equivalence, that the
functors commute strictly with faces and degeneracies, that the dec map is
CULF and that it induces a coalgebra homomorphism.
"""

from __future__ import annotations

from ..combinat import all_perms, perm_inverse
from ..fq import coordinates_in, identity_matrix, image, mat_inverse, mat_vec
from ..groupoid import GroupoidFunctor, is_equivalence
from ..nerves import FiniteCategory, fat_nerve, nerve
from ..oracle import SimplicialOracle
from ..incidence import culf_homomorphism_check
from ..simplicial import CheckResult, Report, SimplicialMap, check_culf, decalage_lower, decalage_upper
from .categories import root_inclusions_op
from .linear import block_diagonal, direct_sum_nerve, linear_injections, retracted_injections, waldhausen_groupoid
from .monoids import AdditiveMonoidOracle, DivisibilityOracle, block_sum, finite_sets_nerve
from .species import forests, parse_forest, relabel_forest, restrict_forest, species_simplicial_groupoid
from .surjections import (injections_category, partition_of, partition_poset, refinement_category,
                          relabelled_refinement_category, surjections_category)

IDENTIFICATIONS = ("N->L", "M(mult)->D", "B->I", "Waldhausen->mono-injections", "BCK->rooted-inclusions-op")
# checked on request, outside the main list
EXTRA_IDENTIFICATIONS = ("M(directsum)->retracted-injections",)


def _partial(op, unit, values):
    out, acc = [], unit
    for v in values:
        acc = op(acc, v)
        out.append(acc)
    return out


def _chain(vertices, arrow):
    return (tuple(vertices), tuple(arrow(vertices[j], vertices[j + 1], j) for j in range(len(vertices) - 1)))


# -- strict nerves of posets ----------------------------------------------------


def _poset_comparison(source, cat: FiniteCategory, op, unit):
    """Dec_bottom of a monoid nerve -> nerve of a poset, by partial products."""
    dec, dmap = decalage_lower(source)
    target = nerve(cat, dec.max_level)

    def on_obj(xs):
        values = [v[0] if isinstance(v, tuple) else v for v in xs]
        return _chain(_partial(op, unit, values), lambda a, b, _j: (a, b))

    functors = [GroupoidFunctor(dec.level(n), target.level(n), on_obj,
                                lambda m: ("id", on_obj(tuple(e[1] for e in m))), f"F{n}")
                for n in range(dec.max_level + 1)]
    return dec, dmap, target, SimplicialMap(dec, target, functors, "partial products")


def _nat_leq(bound):
    source = AdditiveMonoidOracle(1, bound).materialize(bound, 4)
    cat = FiniteCategory.from_poset(range(bound + 1), lambda a, b: a <= b)
    return source, _poset_comparison(source, cat, lambda a, b: a + b, 0)


def _divisibility(bound):
    source = DivisibilityOracle(bound).materialize(bound, 4)
    cat = FiniteCategory.from_poset(range(1, bound + 1), lambda a, b: b % a == 0)
    return source, _poset_comparison(source, cat, lambda a, b: a * b, 1)


# -- finite sets and injections -------------------------------------------------------


def _sets_injections(bound):
    source = finite_sets_nerve(bound, 4)
    dec, dmap = decalage_lower(source)
    target = fat_nerve(injections_category(bound), dec.max_level)

    def on_obj(xs):
        sizes = _partial(lambda a, b: a + b, 0, xs)
        return _chain(sizes, lambda a, b, _j: (a, b, tuple(range(a))))

    def on_mor(m):
        xs = tuple(e[0] for e in m)
        perms = _partial(block_sum, (), [e[1] for e in m])
        return (on_obj(xs), tuple((len(p), len(p), p) for p in perms))

    functors = [GroupoidFunctor(dec.level(n), target.level(n), on_obj, on_mor, f"F{n}")
                for n in range(dec.max_level + 1)]
    return source, (dec, dmap, target, SimplicialMap(dec, target, functors, "block inclusions"))


# -- flags and linear injections ---------------------------------------------------------


def _flag_injections(q, bound):
    source = waldhausen_groupoid(q, bound, 4)
    dec, dmap = decalage_lower(source)
    target = fat_nerve(linear_injections(q, bound), dec.max_level)
    ident = {m: tuple(tuple(int(i == j) for j in range(m)) for i in range(m)) for m in range(bound + 1)}

    def spaces(x):
        m, flag = x
        return list(flag) + [ident[m]]

    def inclusion(small, big):
        cols = [coordinates_in(big, row) for row in small]
        return tuple(tuple(c[i] for c in cols) for i in range(len(big)))

    def on_obj(x):
        ss = spaces(x)
        dims = [len(s) for s in ss]
        return _chain(dims, lambda a, b, j: (a, b, inclusion(ss[j], ss[j + 1])))

    def restricted(g, s):
        gs = image(g, s, q)
        cols = [coordinates_in(gs, mat_vec(g, row, q)) for row in s]
        return (len(s), len(s), tuple(tuple(c[i] for c in cols) for i in range(len(s))))

    def on_mor(mor):
        x, g = mor
        return (on_obj(x), tuple(restricted(g, s) for s in spaces(x)))

    functors = [GroupoidFunctor(dec.level(n), target.level(n), on_obj, on_mor, f"F{n}")
                for n in range(dec.max_level + 1)]
    return source, (dec, dmap, target, SimplicialMap(dec, target, functors, "pivot inclusions"))


# -- direct sums and retracted injections ---------------------------------------------------


def _sum_retractions(q, bound):
    source = direct_sum_nerve(q, bound, 4)
    dec, dmap = decalage_lower(source)
    target = fat_nerve(retracted_injections(q, bound), dec.max_level)

    def first_block(a, b):
        incl = tuple(tuple(int(i == j) for j in range(a)) for i in range(b))
        proj = tuple(tuple(int(i == j) for j in range(b)) for i in range(a))
        return (a, b, incl, proj)

    def on_obj(xs):
        return _chain(_partial(lambda a, b: a + b, 0, xs), lambda a, b, _j: first_block(a, b))

    def on_mor(m):
        xs = tuple(e[0] for e in m)
        blocks = _partial(block_diagonal, identity_matrix(0), [e[1] for e in m])
        return (on_obj(xs), tuple((len(g), len(g), g, mat_inverse(g, q)) for g in blocks))

    functors = [GroupoidFunctor(dec.level(n), target.level(n), on_obj, on_mor, f"F{n}")
                for n in range(dec.max_level + 1)]
    return source, (dec, dmap, target, SimplicialMap(dec, target, functors, "first-summand inclusions"))


# -- forests and root-preserving inclusions ------------------------------------------------


def _canonical_labelling(forest):
    """A permutation carrying a labelled forest onto its canonical representative."""
    from .species import forest_key
    rep = parse_forest(forest_key(forest))
    for h in all_perms(len(forest)):
        if relabel_forest(forest, h) == rep:
            return h
    raise AssertionError("no canonical labelling found")


def _forest_inclusions(bound):
    from .species import forest_key
    source = species_simplicial_groupoid(forests(), bound, 4)
    dec, dmap = decalage_upper(source)
    target = fat_nerve(root_inclusions_op(bound), dec.max_level)

    def layers(x, n):
        m, s, alpha = x
        out = []
        for j in range(n + 1):
            q = tuple(v for v in range(m) if alpha[v] >= j)
            sub = restrict_forest(s, q)
            h = _canonical_labelling(sub)
            label = {v: h[i] for i, v in enumerate(q)}
            out.append((forest_key(sub), label))
        return out

    def level_functor(n):
        def on_obj(x):
            ls = layers(x, n)
            keys = [k for k, _ in ls]

            def arrow(_a, _b, j):
                big, small = ls[j][1], ls[j + 1][1]
                back = {w: v for v, w in small.items()}
                return (keys[j], keys[j + 1], tuple(big[back[w]] for w in range(len(small))))
            return _chain(keys, arrow)

        def on_mor(mor):
            x, g = mor
            y = (x[0], relabel_forest(x[1], g), tuple(x[2][i] for i in perm_inverse(g)))
            lx, ly = layers(x, n), layers(y, n)
            ginv = perm_inverse(g)
            comps = []
            for (kx, cx), (_ky, cy) in zip(lx, ly):
                back = {w: v for v, w in cy.items()}
                comps.append((kx, kx, tuple(cx[ginv[back[w]]] for w in range(len(cy)))))
            return (on_obj(x), tuple(comps))

        return GroupoidFunctor(dec.level(n), target.level(n), on_obj, on_mor, f"F{n}")

    functors = [level_functor(n) for n in range(dec.max_level + 1)]
    return source, (dec, dmap, target, SimplicialMap(dec, target, functors, "layer restrictions"))


def _build(name):
    name = name.replace("\u2192", "->")
    if name == "N->L":
        return _nat_leq(4)
    if name == "M(mult)->D":
        return _divisibility(12)
    if name == "B->I":
        return _sets_injections(3)
    if name == "Waldhausen->mono-injections":
        return _flag_injections(2, 2)
    if name == "BCK->rooted-inclusions-op":
        return _forest_inclusions(2)
    if name == "M(directsum)->retracted-injections":
        return _sum_retractions(2, 1)
    choices = ", ".join(IDENTIFICATIONS + EXTRA_IDENTIFICATIONS)
    raise ValueError(f"unknown identification {name!r}; choose from {choices}")


def _comparison_lines(comparison, equivalence=True) -> Report:
    rep = Report()
    for n in range(comparison.max_level + 1):
        F = comparison[n]
        bad = F.violations(exhaustive=False)
        rep.append(CheckResult("functor", n, F.name, "fail" if bad else "pass", bad[0] if bad else ""))
        if equivalence:
            ok = is_equivalence(F)
            rep.append(CheckResult("equivalence", n, F.name, "pass" if ok else "fail",
                                   "" if ok else f"level {n} comparison is not an equivalence"))
    errs = comparison.violations()
    rep.append(CheckResult("commutes", comparison.max_level, comparison.name, "fail" if errs else "pass",
                           errs[0] if errs else ""))
    return rep


def verify_decalage_identification(name: str) -> Report:
    """Levelwise equivalence, strict commutation, CULF dec map and the
    induced coalgebra homomorphism, each as report lines."""
    source, (dec, dmap, target, comparison) = _build(name)
    rep = _comparison_lines(comparison)
    rep.extend(check_culf(dmap, up_to=1))
    dec_oracle = SimplicialOracle(dec, key_of=repr)
    base = SimplicialOracle(source)
    key_map = lambda k: base.edge_key(dmap[1].obj(dec_oracle.representative(k)))
    rep.extend(culf_homomorphism_check(dec_oracle, base, key_map, dec_oracle.keys()))
    return rep


# -- partitions and surjections -------------------------------------------------------------


def _levelwise(source, target, on_obj, on_mor, name):
    functors = [GroupoidFunctor(source.level(n), target.level(n), on_obj, on_mor, f"{name}{n}")
                for n in range(min(source.max_level, target.max_level) + 1)]
    return SimplicialMap(source, target, functors, name)


def verify_faa_di_bruno_chain(max_size: int = 2) -> Report:
    """The string partitions ~ C -> D ~ Dec_bottom(S) -> S on sets of size <= max_size.

    C has surjections out of the standard sets with refinements fixing the
    domain, D also allows relabelling the domain, S is the fat nerve of
    surjections.  Equivalences are checked levelwise, the two one-way maps
    for CULF.
    """
    surj = fat_nerve(surjections_category(max_size), 4)
    dec, dmap = decalage_lower(surj)
    levels = dec.max_level
    n_c = fat_nerve(refinement_category(max_size), levels)
    n_d = fat_nerve(relabelled_refinement_category(max_size), levels)
    n_p = nerve(partition_poset(max_size), levels)

    def to_partitions(chain):
        vs = tuple(partition_of(v) for v in chain[0])
        return _chain(vs, lambda a, b, _j: (a, b))
    blocks = _levelwise(n_c, n_p, to_partitions, lambda m: ("id", to_partitions(m[0])), "P")

    inclusion = _levelwise(n_c, n_d, lambda c: c, lambda m: m, "incl")

    def composites(chain):
        xs, arrows = chain
        out, acc = [], tuple(range(xs[0]))
        for a in arrows:
            acc = tuple(a[2][v] for v in acc)
            out.append((xs[0], a[1], acc))
        return out

    def dec_obj(chain):
        rhos = composites(chain)
        ident = tuple(range(chain[0][0]))
        return _chain(rhos, lambda a, b, _j: (a, b, ident))

    def dec_mor(m):
        n = len(m[0][1]) - 1
        before, after = composites(m[0]), composites(dec.level(n).tgt(m))
        sigma = m[1][0][2]
        return (dec_obj(m[0]), tuple((r, r2, sigma) for r, r2 in zip(before, after)))
    relabel = _levelwise(dec, n_d, dec_obj, dec_mor, "D")

    rep = Report()
    rep.extend(_comparison_lines(blocks))
    rep.extend(_comparison_lines(inclusion, equivalence=False))
    # C and D differ in the symmetries at the domain
    same = is_equivalence(inclusion[0])
    rep.append(CheckResult("not an equivalence", 0, "incl0", "fail" if same else "pass",
                           "the inclusion of C into D is an equivalence" if same else ""))
    rep.extend(check_culf(inclusion, up_to=1))
    rep.extend(_comparison_lines(relabel))
    rep.extend(check_culf(dmap, up_to=1))
    return rep


__all__ = ["EXTRA_IDENTIFICATIONS", "IDENTIFICATIONS", "verify_decalage_identification",
           "verify_faa_di_bruno_chain"]
