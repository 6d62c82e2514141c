"""Incidence coalgebras and their convolution algebras, computed exactly.

Every number here is the cardinality of some fiber supplied by a
FiberOracle.  Elements of the coalgebra are IncidenceVectors (finite
combinations of keys); elements of the dual algebra are IncidenceFunctions
on a finite window of keys closed under decomposition.
"""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Iterable

from sympy import Matrix, Rational

from .oracle import FiberOracle, OracleError
from .simplicial import CheckResult, Report

DEFAULT_LENGTH_CAP = 10


class IncidenceError(ValueError):
    """Raised when an incidence computation is undefined or fails."""


class MobiusConditionError(IncidenceError):
    """The length of a key could not be bounded within the resource cap."""


# ---------------------------------------------------------------------------
# value types


class IncidenceVector(dict):
    """Finite formal combination of keys (or of key tuples, for tensors)."""

    def __add__(self, other):
        out = IncidenceVector(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return out.clean()

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return IncidenceVector({k: Fraction(c) * v for k, v in self.items()}).clean()

    def clean(self):
        for k in [k for k, v in self.items() if v == 0]:
            del self[k]
        return self

    @classmethod
    def basis(cls, key):
        return cls({key: Fraction(1)})


class IncidenceFunction:
    """A function from a window of keys to exact rationals."""

    def __init__(self, space: FiberOracle, window: Iterable, values):
        self.space = space
        self.window = tuple(window)
        if callable(values):
            values = {k: Fraction(values(k)) for k in self.window}
        self.values = {k: Fraction(values[k]) for k in self.window}

    def __call__(self, key) -> Fraction:
        try:
            return self.values[key]
        except KeyError:
            raise IncidenceError(f"{key!r} lies outside the window") from None

    def __eq__(self, other):
        return isinstance(other, IncidenceFunction) and self.values == other.values

    def __add__(self, other):
        _same_window(self, other)
        return IncidenceFunction(self.space, self.window, {k: self(k) + other(k) for k in self.window})

    def __sub__(self, other):
        _same_window(self, other)
        return IncidenceFunction(self.space, self.window, {k: self(k) - other(k) for k in self.window})

    def __repr__(self):
        return f"IncidenceFunction({self.values!r})"

    def to_json_data(self) -> list:
        return [{"key": k, "num": v.numerator, "den": v.denominator} for k, v in self.values.items()]


def _same_window(phi, psi):
    if set(phi.window) != set(psi.window):
        raise IncidenceError("incidence functions live on different windows")


class SectionCoefficientTable(dict):
    """Sparse table (f, a, b) -> c^f_{a,b}."""

    def rows(self):
        return sorted(self.items(), key=lambda kv: kv[0])

    def to_csv(self, order: Callable | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f", "a", "b", "num", "den"])
        items = sorted(self.items(), key=(lambda kv: order(kv[0])) if order else (lambda kv: kv[0]))
        for (f, a, b), c in items:
            w.writerow([f, a, b, c.numerator, c.denominator])
        return buf.getvalue()

    def to_json_data(self, order: Callable | None = None) -> list:
        items = sorted(self.items(), key=(lambda kv: order(kv[0])) if order else (lambda kv: kv[0]))
        return [{"f": f, "a": a, "b": b, "num": c.numerator, "den": c.denominator}
                for (f, a, b), c in items]


# ---------------------------------------------------------------------------
# comultiplication


def comultiplication_row(space: FiberOracle, f) -> dict:
    """All nonzero c^f_{a,b}, as a dict (a, b) -> coefficient."""
    return dict(space.fiber(2, f).weights())


def section_coefficient(space: FiberOracle, f, a, b) -> Fraction:
    """Cardinality of the part of fiber(2, f) with principal edges (a, b)."""
    for k in (f, a, b):
        space.check_key(k)
    return comultiplication_row(space, f).get((a, b), Fraction(0))


def section_coefficient_segal(space: FiberOracle, a, b, f=None) -> Fraction:
    """Closed form for Segal spaces.

    Over a locally finite Segal space the pairs (a, b) glue along the
    isomorphisms phi: d0 a -> d1 b.  The coefficient is the number of gluings
    whose composite is isomorphic to f, times |Aut f| / (|Aut a| |Aut b|).
    When every gluing gives the same composite this is the familiar
    |Aut y| |Aut ab| / (|Aut a| |Aut b|); with no gluing it is 0.
    """
    if not space.segal:
        raise IncidenceError(f"{space.name} is not marked as a Segal space")
    gluings = space.segal_gluings(a, b)
    if not gluings:
        return Fraction(0)
    if f is None:
        if len(set(gluings)) > 1:
            raise IncidenceError(f"{a!r} and {b!r} glue to several classes {sorted(set(gluings))}; pass f")
        f = gluings[0]
    hits = sum(1 for g in gluings if g == f)
    return Fraction(hits * space.aut_order(f), space.aut_order(a) * space.aut_order(b))


class DeltaRow(list):
    """Terms ((a, b), c) of a comultiplication; ``complete`` is always exact here."""

    complete = True


def comultiply(space: FiberOracle, f, window=None) -> DeltaRow:
    """The row of Delta(delta_f), sorted by key order."""
    space.check_key(f)
    row = comultiplication_row(space, f)
    if window is not None:
        allowed = set(window)
        row = {ab: c for ab, c in row.items() if ab[0] in allowed and ab[1] in allowed}
    order = space.sort_key
    return DeltaRow(sorted(row.items(), key=lambda kv: (order(kv[0][0]), order(kv[0][1]))))


def comultiply_terms(space: FiberOracle, f) -> list:
    """Fiber-level terms of Delta(delta_f): one per component of fiber(2, f).

    Each entry is ``(a, b, weight)`` with weight 1/|Aut| of that component.
    """
    fib = space.fiber(2, f)
    out = []
    for c in fib.groupoid.components():
        a, b = fib.edges(c.representative)
        out.append((a, b, Fraction(1, c.aut_order)))
    order = space.sort_key
    return sorted(out, key=lambda t: (order(t[0]), order(t[1])))


def delta(space: FiberOracle, vector: IncidenceVector) -> IncidenceVector:
    """Linear extension of the comultiplication to vectors."""
    out = defaultdict(Fraction)
    for f, coeff in vector.items():
        for ab, c in comultiplication_row(space, f).items():
            out[ab] += coeff * c
    return IncidenceVector(out).clean()


def section_table(space: FiberOracle, window) -> SectionCoefficientTable:
    table = SectionCoefficientTable()
    for f in window:
        for (a, b), c in comultiplication_row(space, f).items():
            table[(f, a, b)] = c
    return table


def counit(space: FiberOracle, f) -> Fraction:
    """epsilon(delta_f)."""
    space.check_key(f)
    if not space.is_degenerate(f):
        return Fraction(0)
    if space.complete:
        return Fraction(1)
    if space.base_is_point:
        return Fraction(space.aut_order(f))
    raise IncidenceError("counit undefined: the space is neither complete nor has a point as X_0")


# ---------------------------------------------------------------------------
# convolution algebra


def window_of(space: FiberOracle, window=None) -> tuple:
    if window is None:
        return tuple(space.keys())
    if isinstance(window, int):
        return tuple(space.keys(window))
    return tuple(window)


def _closed_row(space, f, allowed):
    row = comultiplication_row(space, f)
    for a, b in row:
        if a not in allowed or b not in allowed:
            raise IncidenceError(f"window is not closed: {f!r} decomposes through ({a!r}, {b!r})")
    return row


def convolve(space: FiberOracle, phi: IncidenceFunction, psi: IncidenceFunction) -> IncidenceFunction:
    """(phi * psi)(f) = sum of c^f_{a,b} phi(a) psi(b)."""
    _same_window(phi, psi)
    allowed = set(phi.window)
    values = {}
    for f in phi.window:
        values[f] = sum((c * phi(a) * psi(b) for (a, b), c in _closed_row(space, f, allowed).items()),
                        Fraction(0))
    return IncidenceFunction(space, phi.window, values)


def zeta(space: FiberOracle, window=None) -> IncidenceFunction:
    return IncidenceFunction(space, window_of(space, window), lambda _k: 1)


def epsilon(space: FiberOracle, window=None) -> IncidenceFunction:
    return IncidenceFunction(space, window_of(space, window), lambda k: counit(space, k))


def delta_function(space: FiberOracle, key, window=None) -> IncidenceFunction:
    """The dual basis element delta^key."""
    return IncidenceFunction(space, window_of(space, window), lambda k: int(k == key))


def power(space: FiberOracle, phi: IncidenceFunction, n: int) -> IncidenceFunction:
    out = epsilon(space, phi.window)
    for _ in range(n):
        out = convolve(space, out, phi)
    return out


# ---------------------------------------------------------------------------
# nondegenerate simplices and Mobius inversion


def _require_complete(space):
    if not space.complete:
        raise IncidenceError("nondegeneracy undefined: the space is not complete")


def phi(space: FiberOracle, n: int, f) -> Fraction:
    """Cardinality of the nondegenerate n-simplices with long edge f."""
    _require_complete(space)
    space.check_key(f)
    if n == 0:
        return counit(space, f)
    return space.nondegenerate_fiber(n, f).cardinality()


def phi_function(space: FiberOracle, n: int, window=None) -> IncidenceFunction:
    return IncidenceFunction(space, window_of(space, window), lambda k: phi(space, n, k))


def length(space: FiberOracle, f, cap: int = DEFAULT_LENGTH_CAP) -> int:
    """Greatest n with a nondegenerate n-simplex over f.

    Graded spaces certify termination through their length bound.  For the
    others the levels 1..cap are scanned; a nondegenerate simplex in the
    upper half of that range is taken as evidence of unbounded length.
    """
    _require_complete(space)
    space.check_key(f)
    bound = space.length_bound(f)
    if bound is not None:
        top = bound
    else:
        top = cap
    longest = 0
    for n in range(1, top + 1):
        if space.nondegenerate_fiber(n, f).groupoid.objects:
            longest = n
    if bound is None and longest > cap // 2:
        raise MobiusConditionError(
            f"{f!r}: not locally finite length up to bound {cap} (not Mobius up to bound)")
    return longest


def mobius(space: FiberOracle, f, cap: int = DEFAULT_LENGTH_CAP) -> Fraction:
    """mu(f) = sum over n of (-1)^n Phi_n(f)."""
    top = length(space, f, cap)
    return sum(((-1) ** n * phi(space, n, f) for n in range(top + 1)), Fraction(0))


def mobius_function(space: FiberOracle, window=None, cap: int = DEFAULT_LENGTH_CAP) -> IncidenceFunction:
    return IncidenceFunction(space, window_of(space, window), lambda k: mobius(space, k, cap))


def zeta_polynomial(space: FiberOracle, f, r: int) -> Fraction:
    """Cardinality of all r-simplices with long edge f (r >= 0)."""
    if r < 0:
        raise IncidenceError("use zeta_polynomial_expansion for negative r")
    if r == 0:
        return counit(space, f)
    return space.fiber(r, f).cardinality()


def generalized_binomial(r: int, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (r - i) / (i + 1)
    return out


def zeta_polynomial_expansion(space: FiberOracle, f, r: int, cap: int = DEFAULT_LENGTH_CAP) -> Fraction:
    """The polynomial sum_k C(r, k) Phi_k(f), valid for every integer r."""
    top = length(space, f, cap)
    return sum((generalized_binomial(r, k) * phi(space, k, f) for k in range(top + 1)), Fraction(0))


def mobius_via_interpolation(space: FiberOracle, f, cap: int = DEFAULT_LENGTH_CAP) -> Fraction:
    """The zeta polynomial evaluated at r = -1."""
    return zeta_polynomial_expansion(space, f, -1, cap)


def numeric_zeta_inverse(space: FiberOracle, window=None) -> IncidenceFunction:
    """Solve zeta * x = epsilon on a closed window by exact linear algebra."""
    keys = window_of(space, window)
    allowed = set(keys)
    index = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    rows = [[Rational(0)] * n for _ in range(n)]
    rhs = []
    for i, f in enumerate(keys):
        for (a, b), c in _closed_row(space, f, allowed).items():
            rows[i][index[b]] += Rational(c.numerator, c.denominator)
        e = counit(space, f)
        rhs.append(Rational(e.numerator, e.denominator))
    M = Matrix(rows)
    if M.rank() < n:
        raise IncidenceError("singular system: zeta is not invertible on this window")
    sol = M.LUsolve(Matrix(rhs))
    return IncidenceFunction(space, keys, {k: Fraction(int(sol[i].p), int(sol[i].q)) for i, k in enumerate(keys)})


# ---------------------------------------------------------------------------
# verification reports


def _result(check, level, square, ok, witness=""):
    return CheckResult(check, level, square, "pass" if ok else "fail", "" if ok else witness)


def check_mobius_inversion(space: FiberOracle, window=None, cap: int = DEFAULT_LENGTH_CAP) -> Report:
    keys = window_of(space, window)
    z, e = zeta(space, keys), epsilon(space, keys)
    mu = mobius_function(space, keys, cap)
    left, right = convolve(space, z, mu), convolve(space, mu, z)
    rep = Report()
    for f in keys:
        rep.append(_result("mobius-inversion", 1, f"zeta*mu at {f}", left(f) == e(f),
                           f"zeta*mu({f}) = {left(f)}, epsilon = {e(f)}"))
        rep.append(_result("mobius-inversion", 1, f"mu*zeta at {f}", right(f) == e(f),
                           f"mu*zeta({f}) = {right(f)}, epsilon = {e(f)}"))
    return rep


def check_phi_recursion(space: FiberOracle, window=None, n_max: int = 3) -> Report:
    """zeta * Phi_n = Phi_n + Phi_{n+1} and Phi_n = (zeta - epsilon)^n."""
    keys = window_of(space, window)
    z, e = zeta(space, keys), epsilon(space, keys)
    eta = z - e
    rep = Report()
    power_n = e
    for n in range(n_max + 1):
        phin = phi_function(space, n, keys)
        nxt = phi_function(space, n + 1, keys)
        lhs = convolve(space, z, phin)
        rep.append(_result("phi-recursion", n, "zeta*Phi_n = Phi_n + Phi_(n+1)", lhs == phin + nxt,
                           _first_difference(lhs, phin + nxt)))
        rep.append(_result("phi-recursion", n, "Phi_n = (zeta - epsilon)^n", power_n == phin,
                           _first_difference(power_n, phin)))
        power_n = convolve(space, power_n, eta)
    return rep


def _first_difference(u: IncidenceFunction, v: IncidenceFunction) -> str:
    for k in u.window:
        if u(k) != v(k):
            return f"at {k}: {u(k)} != {v(k)}"
    return ""


def coassociativity_report(rows: dict, counits: dict) -> Report:
    """Coassociativity and counit laws for a table f -> {(a, b): c}."""
    rep = Report()
    for f, row in rows.items():
        left, right = defaultdict(Fraction), defaultdict(Fraction)
        missing = ""
        for (a, b), c in row.items():
            if a not in rows or b not in rows:
                missing = f"row of {a if a not in rows else b!r} missing"
                break
            for (a1, a2), c2 in rows[a].items():
                left[(a1, a2, b)] += c * c2
            for (b1, b2), c2 in rows[b].items():
                right[(a, b1, b2)] += c * c2
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        ok = not missing and left == right
        witness = missing
        if not ok and not missing:
            diff = sorted(set(left) ^ set(right) | {k for k in left if left.get(k) != right.get(k)}, key=repr)
            witness = f"term {diff[0]!r}: {left.get(diff[0], 0)} vs {right.get(diff[0], 0)}"
        rep.append(_result("coassociativity", 2, f"Delta at {f}", ok, witness))
        lu, ru = defaultdict(Fraction), defaultdict(Fraction)
        for (a, b), c in row.items():
            lu[b] += c * counits.get(a, 0)
            ru[a] += c * counits.get(b, 0)
        target = {f: Fraction(1)}
        lu = {k: v for k, v in lu.items() if v}
        ru = {k: v for k, v in ru.items() if v}
        rep.append(_result("counit", 1, f"(eps x id) Delta at {f}", lu == target, f"got {lu}"))
        rep.append(_result("counit", 1, f"(id x eps) Delta at {f}", ru == target, f"got {ru}"))
    return rep


def check_coassociativity(space: FiberOracle, window=None) -> Report:
    keys = window_of(space, window)
    rows = {f: comultiplication_row(space, f) for f in keys}
    counits = {f: counit(space, f) for f in keys}
    return coassociativity_report(rows, counits)


# ---------------------------------------------------------------------------
# bialgebras and coalgebra maps


def multiply(space: FiberOracle, u: IncidenceVector, v: IncidenceVector) -> IncidenceVector:
    """Product induced by the monoidal structure: delta_a delta_b = delta_(a.b)."""
    if not space.monoidal:
        raise IncidenceError(f"{space.name} carries no monoidal structure")
    out = defaultdict(Fraction)
    for a, x in u.items():
        for b, y in v.items():
            out[space.tensor(a, b)] += x * y
    return IncidenceVector(out).clean()


def multiply_tensors(space: FiberOracle, u: IncidenceVector, v: IncidenceVector) -> IncidenceVector:
    """Product in the tensor square: (a x b)(c x d) = ac x bd."""
    out = defaultdict(Fraction)
    for (a, b), x in u.items():
        for (c, d), y in v.items():
            out[(space.tensor(a, c), space.tensor(b, d))] += x * y
    return IncidenceVector(out).clean()


def check_bialgebra(space: FiberOracle, window=None) -> Report:
    """Delta(delta_a delta_b) = Delta(delta_a) Delta(delta_b) on the window."""
    keys = window_of(space, window)
    allowed = set(keys)
    rep = Report()
    unit = IncidenceVector.basis(space.unit_key)
    for a in keys:
        ok = multiply(space, unit, IncidenceVector.basis(a)) == IncidenceVector.basis(a)
        rep.append(_result("bialgebra", 1, f"unit times {a}", ok, "unit is not neutral"))
    for a in keys:
        for b in keys:
            ab = space.tensor(a, b)
            if ab not in allowed:
                continue
            lhs = delta(space, IncidenceVector.basis(ab))
            rhs = multiply_tensors(space, delta(space, IncidenceVector.basis(a)),
                                   delta(space, IncidenceVector.basis(b)))
            rep.append(_result("bialgebra", 2, f"Delta({a}.{b})", lhs == rhs, f"{lhs} != {rhs}"))
    return rep


def culf_homomorphism_check(source: FiberOracle, target: FiberOracle, key_map: Callable,
                            window=None) -> Report:
    """(F x F) Delta_source = Delta_target F on the basis of the window."""
    keys = window_of(source, window)
    rep = Report()
    for f in keys:
        pushed = defaultdict(Fraction)
        for (a, b), c in comultiplication_row(source, f).items():
            pushed[(key_map(a), key_map(b))] += c
        pushed = {k: v for k, v in pushed.items() if v}
        expected = comultiplication_row(target, key_map(f))
        rep.append(_result("coalgebra-homomorphism", 1, f"Delta at {f}", pushed == expected,
                           f"{pushed} != {expected}"))
    return rep


def dump_function(fn: IncidenceFunction) -> str:
    return json.dumps(fn.to_json_data(), indent=1)


__all__ = [
    "IncidenceError", "MobiusConditionError", "IncidenceVector", "IncidenceFunction",
    "SectionCoefficientTable", "section_coefficient", "section_coefficient_segal", "comultiply",
    "comultiply_terms", "delta", "counit", "convolve", "zeta", "epsilon", "phi", "phi_function",
    "length", "mobius", "mobius_function", "zeta_polynomial", "zeta_polynomial_expansion",
    "mobius_via_interpolation", "numeric_zeta_inverse", "check_mobius_inversion",
    "check_phi_recursion", "check_coassociativity", "coassociativity_report", "multiply",
    "check_bialgebra", "culf_homomorphism_check", "section_table", "OracleError",
]
