"""Truncated series in six flavours against direct expansions."""

from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from decompkit.gallery import build
from decompkit.incidence import convolve, mobius_function, zeta
from decompkit.series import (
    FLAVORS, REGISTERED, QPolynomial, SeriesError, TruncatedSeries, from_incidence, gl_order, invert, multiply,
    q_binomial, q_factorial, q_integer, unit_series, zeta_series,
)


def brute_mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def rank_count(n, k, q):
    """Number of k x n matrices over F_q of full rank k, divided by |GL_k|: the Gaussian binomial."""
    def rank(rows):
        rows = [list(r) for r in rows]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], q - 2, q)
            rows[r] = [v * inv % q for v in rows[r]]
            for i in range(len(rows)):
                if i != r:
                    f = rows[i][c]
                    rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
            r += 1
        return r
    vecs = list(product(range(q), repeat=n))
    full = sum(1 for rows in product(vecs, repeat=k) if rank(rows) == k)
    gl = sum(1 for rows in product(list(product(range(q), repeat=k)), repeat=k) if _rank_k(rows, k, q))
    return full // gl


def _rank_k(rows, k, q):
    # determinant-free full rank test by span size
    span = {tuple([0] * k)}
    for r in rows:
        span = {tuple((a + c * b) % q for a, b in zip(v, r)) for v in span for c in range(q)}
    return len(span) == q ** k


@pytest.mark.parametrize("n,k,q", [(2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 2, 2), (2, 1, 3), (3, 1, 3)])
def test_q_binomial_counts_subspaces(n, k, q):
    assert q_binomial(n, k)(q) == rank_count(n, k, q)


def test_q_basics():
    q = QPolynomial((0, 1))
    assert q_integer(3) == 1 + q + q * q
    assert q_factorial(3) == q_integer(1) * q_integer(2) * q_integer(3)
    assert gl_order(2)(2) == 6 and gl_order(2)(3) == 48
    assert q_factorial(4).exact_div(q_factorial(2) * q_factorial(2)) == q_binomial(4, 2)
    with pytest.raises(SeriesError):
        q_binomial(4, 2).exact_div(q_binomial(4, 1))


@pytest.mark.parametrize("flavor", FLAVORS)
def test_zeta_times_inverse_is_one(flavor):
    q = 2 if flavor.startswith("q-") else None
    z = zeta_series(flavor, 8, q)
    assert multiply(z, invert(z)) == unit_series(flavor, 8, q)


def test_ordinary_inverse():
    assert [invert(zeta_series("ordinary", 6))[n] for n in range(7)] == [1, -1, 0, 0, 0, 0, 0]


def test_exponential_inverse_is_alternating():
    assert [invert(zeta_series("exponential", 6))[n] for n in range(7)] == [(-1) ** n for n in range(7)]


def test_dirichlet_inverse_is_classical_mobius():
    inv = invert(zeta_series("dirichlet", 60))
    assert all(inv[n] == brute_mobius(n) for n in range(1, 61))


def test_q_exponential_inverse_symbolic():
    inv = invert(zeta_series("q-exponential", 5))
    for n in range(6):
        assert inv[n] == QPolynomial.monomial(comb(n, 2), (-1) ** n)


def test_exponential_product_is_binomial_convolution():
    a = TruncatedSeries("exponential", 5, lambda n: n + 1)
    b = TruncatedSeries("exponential", 5, lambda n: 2 ** n)
    c = a * b
    for n in range(6):
        assert c[n] == sum(comb(n, i) * (i + 1) * 2 ** (n - i) for i in range(n + 1))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=6, max_size=6))
def test_inverse_is_two_sided(values):
    a = TruncatedSeries("exponential", 6, dict(enumerate([1] + values)))
    assert a * invert(a) == unit_series("exponential", 6) == invert(a) * a


def test_errors():
    with pytest.raises(SeriesError):
        invert(TruncatedSeries("ordinary", 3, {0: 2}))
    with pytest.raises(SeriesError):
        TruncatedSeries("laurent", 3, {})
    with pytest.raises(SeriesError):
        zeta_series("ordinary", 3) * zeta_series("ordinary", 4)


@pytest.mark.parametrize("name", sorted(REGISTERED))
def test_incidence_and_series_agree(name):
    flavor = REGISTERED[name]
    q = 2 if flavor.startswith("q-") else None
    bound = {"divisibility": 30, "vect-waldhausen": 3, "vect-directsum": 3}.get(name, 5)
    size = {"divisibility": "max_n", "arith-species": "max_n", "nat-plus": "max_degree",
            "b-species": "max_size"}.get(name, "max_dim")
    o = build(name, **{size: bound}, **({"q": q} if q else {})).oracle
    w = o.keys()
    # convolution goes to multiplication
    z = zeta(o, w)
    assert from_incidence(name, bound, convolve(o, z, z), q) == zeta_series(flavor, bound, q) * zeta_series(flavor, bound, q)
    assert from_incidence(name, bound, mobius_function(o, w), q) == invert(zeta_series(flavor, bound, q))


def test_json_is_exact():
    data = invert(zeta_series("q-cauchy", 3, 3)).to_json_data()
    assert data["flavor"] == "q-cauchy"
    assert all({"n", "num", "den"} <= set(c) for c in data["coeffs"])
