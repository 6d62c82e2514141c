"""Every gallery space: declared flags, oracle against materialization,
coalgebra laws, and brute-force section coefficients for a few of them."""

from collections import Counter
from dataclasses import replace
from itertools import combinations

import pytest

from decompkit.gallery import (
    AXIOMS, EXTRA_IDENTIFICATIONS, IDENTIFICATIONS, build, build_restriction_species, check_monoidal, list_spaces, run_axiom, size_parameter, space_names,
    verify_decalage_identification, verify_faa_di_bruno_chain,
)
from decompkit.gallery.species import finite_sets, functoriality_violations, graphs, posets, words
from decompkit.incidence import check_bialgebra, check_coassociativity, comultiplication_row
from decompkit.oracle import OracleError, SimplicialOracle

NAMES = space_names()


def test_registry_is_complete():
    assert len(NAMES) == 23
    rows = {r["name"]: r for r in list_spaces()}
    assert set(rows) == set(NAMES)
    for r in rows.values():
        assert set(r["flags"]) >= set(AXIOMS) - {"decomposition"}
        assert r["description"]


@pytest.mark.parametrize("name", NAMES)
def test_declared_flags_hold(name):
    report = build(name).verify_flags()
    assert report.passed, report.failures()[:2]


@pytest.mark.parametrize("name", NAMES)
def test_oracle_agrees_with_materialization(name):
    space = build(name)
    mat = SimplicialOracle(space.materialize(3))
    shared = set(mat.keys())
    assert shared <= set(space.oracle.keys())
    for key in shared:
        assert comultiplication_row(mat, key) == comultiplication_row(space.oracle, key), key
        assert mat.aut_order(key) == space.oracle.aut_order(key), key


@pytest.mark.parametrize("name", NAMES)
def test_coassociative_and_counital(name):
    space = build(name)
    if not space.complete and not space.oracle.base_is_point:
        pytest.skip("counit undefined")
    assert check_coassociativity(space.oracle).passed


def test_every_space_decomposes():
    for name in NAMES:
        holds, witness = run_axiom(build(name).materialize(3), "decomposition")
        assert holds, (name, witness)


def test_size_caps_and_parameters():
    assert size_parameter("schmitt-graphs") == "max_vertices"
    assert build("nat-plus", max_degree=16).params["max_degree"] == 16
    with pytest.raises(OracleError, match="exceeds the cap 16"):
        build("nat-plus", max_degree=17)
    with pytest.raises(OracleError):
        build("nat-plus", max_vertices=3)
    with pytest.raises(OracleError):
        build("vect-waldhausen", q=4)
    with pytest.raises(OracleError):
        build("no-such-space")


@pytest.mark.parametrize("name", IDENTIFICATIONS + EXTRA_IDENTIFICATIONS)
def test_decalage_identifications(name):
    report = verify_decalage_identification(name)
    assert report.passed, report.failures()[:2]


def test_faa_di_bruno_chain():
    report = verify_faa_di_bruno_chain(2)
    assert report.passed, report.failures()[:2]
    assert any(r.check == "not an equivalence" for r in report)


def test_unknown_identification():
    with pytest.raises(ValueError, match="unknown identification"):
        verify_decalage_identification("X->Y")


def test_unicode_arrow_accepted():
    assert verify_decalage_identification("N→L").passed


@pytest.mark.parametrize("cb", [finite_sets(), graphs(), posets(), words("ab")], ids=lambda c: c.name)
def test_species_are_functorial(cb):
    assert not functoriality_violations(cb, 3)


def test_custom_species_space_matches_registered_graphs():
    space = build_restriction_species(graphs(), 4)
    ref = build("schmitt-graphs").oracle
    assert space.flags == {"segal": False, "complete": True, "graded": True, "monoidal": True,
                           "locally-discrete": False}
    assert all(comultiplication_row(space.oracle, k) == comultiplication_row(ref, k) for k in ref.keys())
    assert space.verify_flags().passed


def test_custom_species_sets_recover_binomials():
    space = build_restriction_species(finite_sets(), 5)
    assert space.flags["segal"]
    row = comultiplication_row(space.oracle, "4")
    assert sorted(row.values()) == [1, 1, 4, 4, 6]


def test_non_functorial_species_rejected():
    # forgetting to relabel after restricting breaks composition of restrictions
    def restrict(s, sub):
        return (len(sub), tuple(e for e in s[1] if set(e) <= set(sub)))
    broken = replace(graphs(), restrict=restrict)
    with pytest.raises(OracleError, match="not functorial"):
        build_restriction_species(broken, 4)


# -- monoidal products ----------------------------------------------------------

DISJOINT_OR_ORDINAL = ["b-species", "shuffles", "words", "schmitt-graphs", "posets", "bck-forests",
                       "fdb-surjections", "ordered-surjections"]
NOT_CULF = ["nat-plus", "nat-power", "vect-directsum"]


def test_every_monoidal_space_has_a_product_model():
    monoidal = {n for n in NAMES if build(n).monoidal}
    assert monoidal == set(DISJOINT_OR_ORDINAL) | set(NOT_CULF)


@pytest.mark.parametrize("name", DISJOINT_OR_ORDINAL)
def test_disjoint_and_ordinal_sums_are_culf(name):
    rep = check_monoidal(build(name))
    assert rep.passed, rep.failures()[:1]
    assert any(r.check == "culf" for r in rep)


@pytest.mark.parametrize("name", NOT_CULF)
def test_sums_of_numbers_and_vector_spaces_are_not_culf(name):
    # two routes: the pullback squares and the bialgebra law on the oracle
    space = build(name)
    bad = check_monoidal(space).failures()
    assert bad and "not isomorphic but land in the same pullback component" in bad[0].witness
    assert not check_bialgebra(space.oracle, 2).passed


def test_vector_sum_bialgebra_counterexample():
    # Delta(delta_1 delta_1) has (1,1)-coefficient |GL_2(F_2)| / |GL_1|^2 = 6, the product only 2
    bad = check_bialgebra(build("vect-directsum").oracle, 2).failures()
    assert bad[0].square == "Delta(dim=1.dim=1)"
    assert "('dim=1', 'dim=1'): Fraction(6, 1)" in bad[0].witness


def test_custom_species_product_is_culf():
    assert check_monoidal(build_restriction_species(graphs(), 3, materialize=2)).passed


def test_non_monoidal_space_has_no_product():
    with pytest.raises(OracleError, match="no monoidal product"):
        check_monoidal(build("leinster"))


# -- brute-force section coefficients ---------------------------------------------


def test_words_deshuffle():
    o = build("words", max_size=4).oracle
    for key in o.keys():
        w = key[5:]
        expected = Counter()
        for r in range(len(w) + 1):
            for u in combinations(range(len(w)), r):
                a = "".join(w[i] for i in u)
                b = "".join(w[i] for i in range(len(w)) if i not in u)
                expected[(f"word={a}", f"word={b}")] += 1
        assert comultiplication_row(o, key) == dict(expected), key


def _blocks_type(blocks):
    sizes = Counter(len(b) for b in blocks)
    return ".".join(f"{s}^{m}" for s, m in sorted(sizes.items()))


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def test_faa_di_bruno_connected_rows():
    o = build("fdb-surjections", max_size=5).oracle
    for n in range(1, 6):
        expected = Counter()
        for p in _set_partitions(list(range(n))):
            expected[(_blocks_type(p), f"{len(p)}^1")] += 1
        assert comultiplication_row(o, f"{n}^1") == dict(expected)


def _composition(cuts, n):
    if n == 0:
        return ()
    bounds = [0] + sorted(cuts) + [n]
    return tuple(bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1))


def test_ordered_surjections_refine_compositions():
    o = build("ordered-surjections", max_size=5).oracle
    for key in o.keys():
        c = tuple(int(v) for v in key.strip("()").split(",") if v)
        n = sum(c)
        cuts = {sum(c[:i]) for i in range(1, len(c))}
        free = [i for i in range(1, n) if i not in cuts]
        expected = Counter()
        for r in range(len(free) + 1):
            for extra in combinations(free, r):
                fine = sorted(cuts | set(extra))
                a = _composition(fine, n)
                # how many fine blocks sit inside each coarse block
                ends = [sum(a[:i + 1]) for i in range(len(a))]
                coarse_ends = [sum(c[:i + 1]) for i in range(len(c))]
                b, start = [], 0
                for e in coarse_ends:
                    b.append(sum(1 for x in ends if start < x <= e))
                    start = e
                fmt = lambda t: "(" + ",".join(map(str, t)) + ")"
                expected[(fmt(a), fmt(b))] += 1
        assert comultiplication_row(o, key) == dict(expected), key


def test_shuffles_count_position_subsets():
    o = build("shuffles", max_size=6).oracle
    for n in range(7):
        assert comultiplication_row(o, str(n)) == {
            (str(a), str(n - a)): len(list(combinations(range(n), a))) for a in range(n + 1)}
