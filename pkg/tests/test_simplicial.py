"""Axiom checkers on nerves, monoid nerves and non-Segal examples."""

import pytest

from decompkit.gallery import build
from decompkit.gallery.categories import hanger, leinster
from decompkit.gallery.monoids import bz2_nerve
from decompkit.groupoid import GroupoidFunctor
from decompkit.nerves import FiniteCategory, composable_chains, fat_nerve, nerve
from decompkit.simplicial import (
    SimplicialMap, TruncatedSimplicialGroupoid, check_complete, check_culf, check_decomposition, check_segal,
    check_simplicial_identities, components_quotient, decalage_lower, decalage_upper,
)


def chain_poset(n):
    return FiniteCategory.from_poset(range(n), lambda a, b: a <= b)


def test_chain_counts_in_a_poset():
    # composable n-chains in the total order on 4 elements are weakly increasing (n+1)-tuples
    cat = chain_poset(4)
    for n, expected in [(0, 4), (1, 10), (2, 20), (3, 35)]:
        assert len(composable_chains(cat, n)) == expected


@pytest.mark.parametrize("cat", [chain_poset(3), hanger(), leinster()], ids=["chain", "hanger", "leinster"])
def test_nerves_are_segal_and_complete(cat):
    x = nerve(cat, 4)
    assert check_simplicial_identities(x).passed
    assert check_segal(x).passed
    assert check_decomposition(x).passed
    assert check_complete(x)


def test_fat_nerve_matches_nerve_on_a_skeletal_category():
    cat = chain_poset(3)
    a, b = nerve(cat, 3), fat_nerve(cat, 3)
    for n in range(4):
        assert a.level(n).cardinality() == b.level(n).cardinality()


def test_bz2_is_segal_but_not_complete():
    x = bz2_nerve(4)
    assert check_segal(x).passed
    assert not check_complete(x)


@pytest.mark.parametrize("name", ["shuffles", "schmitt-graphs", "bck-forests", "posets", "vect-waldhausen"])
def test_decomposition_spaces_that_are_not_segal(name):
    x = build(name).materialize(3)
    seg = check_segal(x)
    assert not seg.passed
    assert seg.failures()[0].witness
    assert check_decomposition(x).passed


@pytest.mark.parametrize("name", ["shuffles", "b-species", "vect-waldhausen"])
def test_decalages_are_segal_and_culf(name):
    x = build(name).materialize(4)
    for dec, dmap in (decalage_lower(x), decalage_upper(x)):
        assert check_segal(dec).passed
        assert check_culf(dmap, up_to=2).passed


def test_components_quotient_of_a_discrete_space_is_itself():
    x = build("nat-plus").materialize(3)
    q, _qmap = components_quotient(x)
    for n in range(q.max_level + 1):
        assert len(q.level(n).objects) == len(x.level(n).components())


def test_broken_face_is_reported():
    x = nerve(chain_poset(2), 3)
    faces = dict(x.faces)
    good = faces[(2, 1)]
    faces[(2, 1)] = GroupoidFunctor(good.domain, good.codomain, lambda c: faces[(2, 0)].obj(c),
                                    lambda m: faces[(2, 0)].mor(m), "bad d1")
    broken = TruncatedSimplicialGroupoid(x.levels, faces, x.degeneracies)
    assert not check_simplicial_identities(broken).passed


def test_identity_map_is_culf():
    x = nerve(chain_poset(3), 3)
    ident = SimplicialMap(x, x, [GroupoidFunctor(x.level(n), x.level(n), lambda o: o, lambda m: m)
                                 for n in range(4)], "id")
    assert not ident.violations()
    assert check_culf(ident).passed
