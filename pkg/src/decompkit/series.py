"""Truncated power series in the six flavours that carry incidence algebras.

Coefficients are stored relative to the flavour's basis element (z^n,
z^n/n!, k^-s, k^-s/k!, z^n/[n]!, z^n/|GL_n|), so the zeta series has all
coefficients 1.  Multiplying basis elements then produces a weight: 1,
C(n,i), [n choose i]_q, q^{i(n-i)}[n choose i]_q, 1, or k!/(m!n!).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, factorial

FLAVORS = ("ordinary", "exponential", "dirichlet", "modified-dirichlet", "q-exponential", "q-cauchy")
Q_FLAVORS = ("q-exponential", "q-cauchy")
DIRICHLET_FLAVORS = ("dirichlet", "modified-dirichlet")


class SeriesError(ValueError):
    pass


class QPolynomial:
    """Polynomial in a formal variable q with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def lift(cls, x) -> "QPolynomial":
        return x if isinstance(x, QPolynomial) else cls([x])

    @classmethod
    def monomial(cls, k: int, c=1) -> "QPolynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other):
        other = QPolynomial.lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return QPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-QPolynomial.lift(other))

    def __rsub__(self, other):
        return QPolynomial.lift(other) - self

    def __mul__(self, other):
        other = QPolynomial.lift(other)
        if not self.coeffs or not other.coeffs:
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return QPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = QPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other) -> tuple:
        other = QPolynomial.lift(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            quot[i] = c
            for j, d in enumerate(other.coeffs):
                rem[i + j] -= c * d
        return QPolynomial(quot), QPolynomial(rem)

    def exact_div(self, other) -> "QPolynomial":
        quot, rem = self.divmod(other)
        if rem.coeffs:
            raise SeriesError("polynomial division is not exact")
        return quot

    def __call__(self, q) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        return isinstance(other, QPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*q^{k}")
        return " + ".join(terms)

    def to_json_data(self) -> list:
        return [str(c) for c in self.coeffs]


def q_integer(n: int) -> QPolynomial:
    return QPolynomial([1] * n)


def q_factorial(n: int) -> QPolynomial:
    if n < 0:
        raise SeriesError("q_factorial needs n >= 0")
    out = QPolynomial([1])
    for k in range(1, n + 1):
        out = out * q_integer(k)
    return out


def q_binomial(n: int, k: int) -> QPolynomial:
    """[n choose k]_q = [n]! / ([k]! [n-k]!)."""
    if not 0 <= k <= n:
        raise SeriesError(f"q_binomial needs 0 <= k <= n, got n={n}, k={k}")
    return q_factorial(n).exact_div(q_factorial(k) * q_factorial(n - k))


def gl_order(n: int) -> QPolynomial:
    """|GL_n(F_q)| = (q - 1)^n q^C(n,2) [n]!."""
    return QPolynomial([-1, 1]) ** n * QPolynomial.monomial(comb(n, 2)) * q_factorial(n)


def q_multinomial(parts) -> QPolynomial:
    out = q_factorial(sum(parts))
    den = QPolynomial([1])
    for p in parts:
        den = den * q_factorial(p)
    return out.exact_div(den)


def _weight(flavor: str, n: int, i: int, q=None):
    """Structure constant for basis(i) * basis(n - i) (or basis(i) * basis(n / i))."""
    if flavor == "ordinary":
        return 1
    if flavor == "exponential":
        return comb(n, i)
    if flavor == "q-exponential":
        w = q_binomial(n, i)
        return w if q is None else w(q)
    if flavor == "q-cauchy":
        w = QPolynomial.monomial(i * (n - i)) * q_binomial(n, i)
        return w if q is None else w(q)
    if flavor == "dirichlet":
        return 1
    if flavor == "modified-dirichlet":
        return Fraction(factorial(n), factorial(i) * factorial(n // i))
    raise SeriesError(f"unknown flavor {flavor!r}")


class TruncatedSeries:
    """Coefficients a_n (n <= bound) relative to the flavour's basis.

    For q-flavours ``q`` may be a concrete prime power; otherwise q stays
    formal and coefficients are QPolynomials.
    """

    def __init__(self, flavor: str, bound: int, coeffs, q=None):
        if flavor not in FLAVORS:
            raise SeriesError(f"unknown flavor {flavor!r}")
        self.flavor, self.bound, self.q = flavor, bound, q
        self.symbolic = flavor in Q_FLAVORS and q is None
        start = 1 if flavor in DIRICHLET_FLAVORS else 0
        self.indices = tuple(range(start, bound + 1))
        get = coeffs if callable(coeffs) else (lambda n: coeffs.get(n, 0))
        self.coeffs = {n: self._coerce(get(n)) for n in self.indices}

    def _coerce(self, c):
        if self.symbolic:
            return QPolynomial.lift(c)
        if isinstance(c, QPolynomial):
            raise SeriesError("polynomial coefficient in a series with concrete q")
        return Fraction(c)

    def __getitem__(self, n):
        return self.coeffs[n]

    def _compatible(self, other):
        if (self.flavor, self.bound, self.q) != (other.flavor, other.bound, other.q):
            raise SeriesError(f"cannot combine {self.flavor}/{self.bound} with {other.flavor}/{other.bound}")

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.flavor == other.flavor
                and self.bound == other.bound and self.coeffs == other.coeffs)

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"TruncatedSeries({self.flavor}, {self.bound}, {self.coeffs})"

    def to_json_data(self) -> dict:
        rows = []
        for n, c in self.coeffs.items():
            if isinstance(c, QPolynomial):
                rows.append({"n": n, "poly": c.to_json_data()})
            else:
                rows.append({"n": n, "num": c.numerator, "den": c.denominator})
        return {"flavor": self.flavor, "bound": self.bound, "coeffs": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_data(), indent=1)


def unit_series(flavor: str, bound: int, q=None) -> TruncatedSeries:
    first = 1 if flavor in DIRICHLET_FLAVORS else 0
    return TruncatedSeries(flavor, bound, {first: 1}, q)


def zeta_series(flavor: str, bound: int, q=None) -> TruncatedSeries:
    return TruncatedSeries(flavor, bound, lambda _n: 1, q)


def _zero(series):
    return QPolynomial() if series.symbolic else Fraction(0)


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._compatible(b)
    out = {}
    for n in a.indices:
        acc = _zero(a)
        if a.flavor in DIRICHLET_FLAVORS:
            for m in range(1, n + 1):
                if n % m == 0:
                    acc = acc + _weight(a.flavor, n, m) * a[m] * b[n // m]
        else:
            for i in range(n + 1):
                acc = acc + _weight(a.flavor, n, i, a.q) * a[i] * b[n - i]
        out[n] = acc
    return TruncatedSeries(a.flavor, a.bound, out, a.q)


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the leading coefficient must be 1."""
    first = a.indices[0]
    if a[first] != 1:
        raise SeriesError("non-unit leading term: the series is not invertible this way")
    out = {first: a[first]}
    for n in a.indices[1:]:
        acc = _zero(a)
        if a.flavor in DIRICHLET_FLAVORS:
            for m in range(2, n + 1):
                if n % m == 0:
                    acc = acc + _weight(a.flavor, n, m) * a[m] * out[n // m]
        else:
            for i in range(1, n + 1):
                acc = acc + _weight(a.flavor, n, i, a.q) * a[i] * out[n - i]
        out[n] = -acc
    return TruncatedSeries(a.flavor, a.bound, out, a.q)


# registered incidence spaces and how their keys index the series
REGISTERED = {
    "nat-plus": "ordinary",
    "b-species": "exponential",
    "divisibility": "dirichlet",
    "arith-species": "modified-dirichlet",
    "vect-waldhausen": "q-exponential",
    "vect-directsum": "q-cauchy",
}


def key_index(key: str) -> int:
    return int(key[4:]) if key.startswith("dim=") else int(key)


def from_incidence(name: str, bound: int, function=None, q=None) -> TruncatedSeries:
    """Series of an incidence function: delta^n maps to the basis element.

    Without ``function`` the zeta function is used.  A q-flavour series built
    from a concrete incidence function needs the matching concrete ``q``.
    """
    if name not in REGISTERED:
        raise SeriesError(f"{name!r} has no registered series representation")
    flavor = REGISTERED[name]
    if function is None:
        return zeta_series(flavor, bound, q)
    values = {key_index(k): v for k, v in function.values.items()}
    if flavor in Q_FLAVORS and q is None:
        raise SeriesError("a concrete incidence function needs a concrete q")
    return TruncatedSeries(flavor, bound, lambda n: values.get(n, 0), q)
