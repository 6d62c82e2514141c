"""The acceptance suite: fourteen end-to-end criteria, each a Report.

Expected values come from closed formulas or from enumerations that do not
go through the fiber machinery (subspace lists, Stirling recursions,
sympy factorizations), so every line compares two independent routes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, factorial, prod

from sympy import factorint

from . import cancellation
from .combinat import stirling2
from .fq import subspaces
from .gallery import IDENTIFICATIONS, build, space_names, verify_decalage_identification
from .gallery.monoids import vector_key
from .gallery.surjections import type_key
from .incidence import (IncidenceVector, MobiusConditionError, check_bialgebra, check_coassociativity,
                        check_mobius_inversion, check_phi_recursion, convolve, delta, epsilon, mobius,
                        mobius_function, mobius_via_interpolation, multiply_tensors, numeric_zeta_inverse,
                        phi_function, power, section_coefficient, section_coefficient_segal, zeta,
                        zeta_polynomial)
from .series import REGISTERED, from_incidence, invert, q_binomial, zeta_series
from .simplicial import CheckResult, Report, check_decomposition, check_segal


def _line(criterion, label, ok, witness="") -> CheckResult:
    return CheckResult(f"criterion {criterion}", criterion, label, "pass" if ok else "fail",
                       "" if ok else witness)


def _equal(criterion, label, got, expected) -> CheckResult:
    return _line(criterion, label, got == expected, f"got {got}, expected {expected}")


def _report(criterion, rep: Report, label) -> CheckResult:
    bad = rep.failures()
    return _line(criterion, label, not bad and len(rep) > 0,
                 f"{bad[0].square}: {bad[0].witness}" if bad else "empty report")


# ---------------------------------------------------------------------------


def axiom_matrix() -> Report:
    rep = Report()
    cases = [
        ("schmitt-graphs", {"max_vertices": 4, "materialize": 3}, False),
        ("bck-forests", {"max_nodes": 3, "materialize": 2}, False),
        ("hanger", {}, True),
        ("fdb-surjections", {"materialize": 3}, True),
        ("b-species", {"materialize": 3}, True),
        ("vect-directsum", {"q": 2, "materialize": 2}, True),
    ]
    for name, params, segal in cases:
        x = build(name, **params).materialize(4)
        rep.append(_equal(1, f"{name}: Segal {'passes' if segal else 'fails'}", check_segal(x).passed, segal))
        rep.append(_report(1, check_decomposition(x), f"{name}: decomposition"))
    return rep


def section_coefficients() -> Report:
    rep = Report()
    b = build("b-species").oracle
    for n in range(7):
        for a in range(n + 1):
            rep.append(_equal(2, f"B: c^{n}_({a},{n - a})", section_coefficient(b, str(n), str(a), str(n - a)),
                              Fraction(factorial(n), factorial(a) * factorial(n - a))))
    for q in (2, 3):
        w = build("vect-waldhausen", q=q).oracle
        for n in range(5):
            by_dim = [0] * (n + 1)
            for basis in subspaces(n, q):
                by_dim[len(basis)] += 1
            for k in range(n + 1):
                c = section_coefficient(w, f"dim={n}", f"dim={k}", f"dim={n - k}")
                rep.append(_equal(2, f"Waldhausen q={q}: c^{n}_({k},{n - k}) vs subspace count", c, by_dim[k]))
                rep.append(_equal(2, f"Waldhausen q={q}: c^{n}_({k},{n - k}) vs q-binomial", c,
                                  q_binomial(n, k)(q)))
        m = build("vect-directsum", q=q).oracle
        for n in range(5):
            for k in range(n + 1):
                c = section_coefficient(m, f"dim={n}", f"dim={k}", f"dim={n - k}")
                rep.append(_equal(2, f"direct sum q={q}: c^{n}_({k},{n - k})", c,
                                  q ** (k * (n - k)) * q_binomial(n, k)(q)))
    fdb = build("fdb-surjections").oracle
    for n in range(1, 6):
        top = type_key([n])
        for k in range(1, n + 1):
            for lam in _partitions(n, k):
                counts = {j: lam.count(j) for j in set(lam)}
                expected = Fraction(factorial(n), prod(factorial(e) * factorial(j) ** e for j, e in counts.items()))
                c = section_coefficient(fdb, top, type_key(lam), type_key([k]))
                rep.append(_equal(2, f"Faa di Bruno: c^{top}_({type_key(lam)},{k}^1)", c, expected))
    h = build("hanger").oracle
    rep.append(_equal(2, "hanger: c^f_(a,b)", section_coefficient(h, "f", "a", "b"), Fraction(1, 2)))
    return rep


def _partitions(n, k, largest=None):
    """Partitions of n into exactly k parts, increasing."""
    largest = n if largest is None else largest
    if k == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, k - 1, first):
            out.append(tuple(sorted(rest + (first,))))
    return out


def segal_closed_form() -> Report:
    rep = Report()
    for name in space_names():
        space = build(name)
        if not space.segal:
            continue
        o = space.oracle
        keys = o.keys()
        allowed = set(keys)
        rows = {f: dict(o.fiber(2, f).weights()) for f in keys}
        bad = []
        for f, row in rows.items():
            for (a, b), c in row.items():
                if section_coefficient_segal(o, a, b, f) != c:
                    bad.append((f, a, b))
        for a in keys:
            for b in keys:
                for g in set(o.segal_gluings(a, b)) & allowed:
                    if section_coefficient_segal(o, a, b, g) != rows[g].get((a, b), 0):
                        bad.append((g, a, b))
        rep.append(_line(3, f"{name}: closed form = fiber count on {len(keys)} keys", not bad,
                         f"mismatch at (f, a, b) = {bad[:1]}"))
    return rep


def coassociativity() -> Report:
    rep = Report()
    for name in space_names():
        rep.append(_report(4, check_coassociativity(build(name).oracle), f"{name}: coassociativity and counit"))
    return rep


def mobius_inversion() -> Report:
    cases = [("nat-plus", {"max_degree": 8}), ("divisibility", {"max_n": 60}), ("b-species", {"max_size": 6}),
             ("vect-waldhausen", {"q": 2, "max_dim": 4}), ("vect-waldhausen", {"q": 3, "max_dim": 4}),
             ("fdb-surjections", {"max_size": 5}), ("schmitt-graphs", {"max_vertices": 4}),
             ("bck-forests", {"max_nodes": 3})]
    rep = Report()
    for name, params in cases:
        rep.append(_report(5, check_mobius_inversion(build(name, **params).oracle),
                           f"{name} {params}: zeta*mu = epsilon = mu*zeta"))
    return rep


def _partition_chains(n, r):
    """Strict chains of r nontrivial coarsenings from n singletons to one block."""
    if r == 0:
        return 1 if n == 1 else 0
    return sum(stirling2(n, k) * _partition_chains(k, r - 1) for k in range(1, n))


def mobius_values() -> Report:
    rep = Report()
    nat = build("nat-plus").oracle
    for n in range(9):
        rep.append(_equal(6, f"nat: mu({n})", mobius(nat, str(n)), {0: 1, 1: -1}.get(n, 0)))
    b = build("b-species").oracle
    for n in range(7):
        rep.append(_equal(6, f"B: mu({n})", mobius(b, str(n)), (-1) ** n))
    for q in (2, 3):
        w = build("vect-waldhausen", q=q).oracle
        for n in range(5):
            rep.append(_equal(6, f"Waldhausen q={q}: mu({n})", mobius(w, f"dim={n}"), (-1) ** n * q ** comb(n, 2)))
    fdb = build("fdb-surjections").oracle
    for n in range(1, 6):
        expected = (-1) ** (n - 1) * factorial(n - 1)
        rep.append(_equal(6, f"Faa di Bruno: mu({n}->1)", mobius(fdb, type_key([n])), expected))
        alternating = sum((-1) ** r * _partition_chains(n, r) for r in range(n + 1))
        rep.append(_equal(6, f"sum_r (-1)^r |Tr({n},r)|", alternating, expected))
    g = build("schmitt-graphs", max_vertices=4).oracle
    for key in g.keys():
        rep.append(_equal(6, f"graphs: mu({key})", mobius(g, key), (-1) ** g.degree(key)))
    return rep


def phi_calculus() -> Report:
    rep = Report()
    for name, params in [("nat-plus", {"max_degree": 6}), ("b-species", {"max_size": 5}),
                         ("schmitt-graphs", {"max_vertices": 3})]:
        o = build(name, **params).oracle
        keys = o.keys()
        reduced = zeta(o, keys) - epsilon(o, keys)
        for n in range(5):
            rep.append(_equal(7, f"{name}: Phi_{n} = (zeta - epsilon)^{n}", phi_function(o, n, keys),
                              power(o, reduced, n)))
        rep.append(_report(7, check_phi_recursion(o, keys, 4), f"{name}: zeta*Phi_n = Phi_n + Phi_(n+1)"))
    return rep


def zeta_polynomials() -> Report:
    rep = Report()
    nat, b = build("nat-plus").oracle, build("b-species").oracle
    for r in range(6):
        for n in range(7):
            rep.append(_equal(8, f"nat: zeta^{r}({n})", zeta_polynomial(nat, str(n), r),
                              comb(n + r - 1, n) if r else int(n == 0)))
            rep.append(_equal(8, f"B: zeta^{r}({n})", zeta_polynomial(b, str(n), r), r ** n))
    for o in (nat, b):
        for key in o.keys():
            rep.append(_equal(8, f"{o.name}: interpolation at r=-1 for {key}", mobius_via_interpolation(o, key),
                              mobius(o, key)))
    for name in space_names():
        space = build(name)
        if not space.complete:
            continue
        o = space.oracle
        bad = []
        for f in o.keys():
            for r in range(5):
                lhs = o.fiber(r, f).cardinality()
                rhs = sum(comb(r, k) * o.nondegenerate_fiber(k, f).cardinality() for k in range(r + 1))
                if lhs != rhs:
                    bad.append((f, r, lhs, rhs))
        rep.append(_line(8, f"{name}: degeneracy-type decomposition, r <= 4", not bad, f"{bad[:1]}"))
    return rep


def decalage() -> Report:
    rep = Report()
    for name in IDENTIFICATIONS:
        rep.append(_report(9, verify_decalage_identification(name), name))
    return rep


def bialgebra() -> Report:
    rep = Report()
    rep.append(_report(10, check_bialgebra(build("schmitt-graphs", max_vertices=4).oracle),
                       "graphs <= 4: Delta is multiplicative"))
    b = build("b-species", max_size=5).oracle
    rep.append(_report(10, check_bialgebra(b), "B <= 5: Delta is multiplicative"))
    generator = IncidenceVector({("0", "1"): Fraction(1), ("1", "0"): Fraction(1)})
    acc = IncidenceVector({("0", "0"): Fraction(1)})
    for n in range(6):
        rep.append(_equal(10, f"B: (d0 x d1 + d1 x d0)^{n} = Delta(d_{n})", acc,
                          delta(b, IncidenceVector.basis(str(n)))))
        acc = multiply_tensors(b, acc, generator)
    return rep


def cancellations() -> Report:
    rep = Report()
    rep.append(_report(11, cancellation.verify_compositions(10), "compositions n <= 10"))
    rep.append(_report(11, cancellation.verify_surjections(7), "surjections n <= 7"))
    rep.append(_report(11, cancellation.verify_subsets(6), "subsets |S| <= 6"))
    rep.append(_equal(11, "flip_second_bit(3,2,1,1,1)", cancellation.flip_second_bit((3, 2, 1, 1, 1)),
                      (1, 2, 2, 1, 1, 1)))
    rep.append(_equal(11, "(34,1,26,5) <-> (134,26,5)",
                      cancellation.format_blocks(cancellation.surjection_parity_involution(
                          cancellation.parse_blocks("34,1,26,5"))), "(134,26,5)"))
    rep.append(_line(11, "base point dependence", bool(cancellation.base_point_dependence(2)),
                     "toggles at two base points agree"))
    return rep


def _classical_mobius(n):
    exps = factorint(n).values()
    return 0 if any(e > 1 for e in exps) else (-1) ** len(exps)


def series_bridge() -> Report:
    rep = Report()
    bounds = {"nat-plus": 8, "b-species": 6, "divisibility": 30, "arith-species": 6,
              "vect-waldhausen": 4, "vect-directsum": 4}
    for name, flavor in sorted(REGISTERED.items()):
        bound = bounds[name]
        qs = (2, 3) if flavor.startswith("q-") else (None,)
        symbolic = invert(zeta_series(flavor, bound)) if flavor.startswith("q-") else None
        for q in qs:
            size = {"q": q} if q else {}
            space = build(name, **size)
            window = space.oracle.keys(bound)
            mu = mobius_function(space.oracle, window)
            got = invert(zeta_series(flavor, bound, q))
            want = from_incidence(name, bound, mu, q)
            label = f"{name} ({flavor}{'' if q is None else f', q={q}'})"
            rep.append(_equal(12, f"{label}: inverse zeta series = incidence mu", got.coeffs, want.coeffs))
            if symbolic is not None:
                evaluated = {n: c(q) for n, c in symbolic.coeffs.items()}
                rep.append(_equal(12, f"{label}: polynomial inverse at q={q}", evaluated, want.coeffs))
    dirichlet = invert(zeta_series("dirichlet", 30))
    rep.append(_equal(12, "Dirichlet inverse = classical mu, k <= 30", dirichlet.coeffs,
                      {k: Fraction(_classical_mobius(k)) for k in range(1, 31)}))
    return rep


def leinster_fixture() -> Report:
    rep = Report()
    o = build("leinster").oracle
    try:
        mobius_function(o, cap=10)
        rep.append(_line(13, "mobius raises", False, "mobius succeeded"))
    except MobiusConditionError as exc:
        rep.append(_line(13, "mobius raises", "not locally finite length up to bound" in str(exc), str(exc)))
    keys = o.keys()
    x = numeric_zeta_inverse(o, keys)
    rep.append(_equal(13, "numeric inverse on the 5-arrow window", len(keys), 5))
    rep.append(_equal(13, "zeta * x = epsilon", convolve(o, zeta(o, keys), x), epsilon(o, keys)))
    rep.append(_equal(13, "x * zeta = epsilon", convolve(o, x, zeta(o, keys)), epsilon(o, keys)))
    return rep


def _orbit(a, b):
    return vector_key(min((a, b), (b, a)))


def symmetric_quotient_fixture() -> Report:
    """P = (1,1) - (2,0) - (0,2), pushed into the quotient, is primitive; the
    single-representative combination delta(1,1) - delta[(2,0)] is not."""
    rep = Report()
    o = build("sym-quotient", max_degree=4).oracle

    def primitive(p):
        expected = IncidenceVector({(o.unit_key, k): v for k, v in p.items()}) + \
            IncidenceVector({(k, o.unit_key): v for k, v in p.items()})
        return delta(o, p) == expected

    pushed = IncidenceVector()
    for v, c in [((1, 1), 1), ((2, 0), -1), ((0, 2), -1)]:
        pushed = pushed + IncidenceVector({_orbit(*v): Fraction(c)})
    rep.append(_line(14, "P = (1,1) - (2,0) - (0,2) in the quotient is primitive", primitive(pushed),
                     f"Delta(P) = {delta(o, pushed)}"))
    single = IncidenceVector({_orbit(1, 1): Fraction(1), _orbit(2, 0): Fraction(-1)})
    rep.append(_line(14, "delta(1,1) - delta[(2,0)] alone is not primitive", not primitive(single),
                     "unexpectedly primitive"))
    rep.append(_line(14, "(1,1) - (2,0) - (0,2) is not primitive before the quotient",
                     not _primitive_in_plane(), "primitive in N^2"))
    return rep


def _primitive_in_plane():
    o = build("nat-power", max_degree=4).oracle
    p = IncidenceVector({"(1,1)": Fraction(1), "(2,0)": Fraction(-1), "(0,2)": Fraction(-1)})
    expected = IncidenceVector({(o.unit_key, k): v for k, v in p.items()}) + \
        IncidenceVector({(k, o.unit_key): v for k, v in p.items()})
    return delta(o, p) == expected


CRITERIA = {
    1: ("axiom matrix", axiom_matrix),
    2: ("section coefficients", section_coefficients),
    3: ("Segal closed form", segal_closed_form),
    4: ("coassociativity and counit", coassociativity),
    5: ("Mobius inversion", mobius_inversion),
    6: ("Mobius values", mobius_values),
    7: ("Phi calculus", phi_calculus),
    8: ("zeta polynomials", zeta_polynomials),
    9: ("decalage identifications", decalage),
    10: ("bialgebra", bialgebra),
    11: ("cancellation", cancellations),
    12: ("series bridge", series_bridge),
    13: ("Leinster fixture", leinster_fixture),
    14: ("symmetric quotient fixture", symmetric_quotient_fixture),
}


def run_criterion(number: int) -> Report:
    if number not in CRITERIA:
        raise ValueError(f"no acceptance criterion {number}")
    return CRITERIA[number][1]()


def run_all(criteria=None, jobs: int = 1) -> dict[int, Report]:
    """Run the chosen criteria (all by default), optionally in parallel."""
    numbers = sorted(CRITERIA) if criteria is None else sorted(criteria)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return dict(zip(numbers, pool.map(run_criterion, numbers)))
    return {n: run_criterion(n) for n in numbers}


__all__ = ["CRITERIA", "run_all", "run_criterion"]
