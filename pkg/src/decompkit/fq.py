"""Linear algebra over a prime field F_q at desk scale.

Vectors are tuples of ints mod q, matrices are tuples of rows and act on
column vectors.  Subspaces are stored by their reduced row echelon basis,
which doubles as a canonical label.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def check_prime(q: int) -> None:
    if q < 2 or any(q % p == 0 for p in range(2, q)):
        raise ValueError(f"q = {q} must be prime")


def rref(rows, q: int) -> tuple:
    """Reduced row echelon form, zero rows dropped."""
    rows = [list(r) for r in rows]
    if not rows:
        return ()
    n = len(rows[0])
    out, r = [], 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % q), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], q - 2, q)
        rows[r] = [(v * inv) % q for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % q:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows[:r] if any(row))


def pivots(basis) -> tuple:
    return tuple(next(i for i, v in enumerate(row) if v) for row in basis)


def span(basis, q: int) -> frozenset:
    n = len(basis[0]) if basis else 0
    vecs = set()
    for coeffs in product(range(q), repeat=len(basis)):
        v = [0] * n
        for c, row in zip(coeffs, basis):
            for i in range(n):
                v[i] = (v[i] + c * row[i]) % q
        vecs.add(tuple(v))
    return frozenset(vecs)


@lru_cache(maxsize=None)
def subspaces(n: int, q: int) -> tuple:
    """All subspaces of F_q^n as canonical bases, ordered by dimension."""
    check_prime(q)
    found = {()}
    frontier = [()]
    vectors = [v for v in product(range(q), repeat=n) if any(v)]
    while frontier:
        nxt = []
        for basis in frontier:
            for v in vectors:
                b = rref(basis + (v,), q)
                if len(b) > len(basis) and b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(found, key=lambda b: (len(b), b)))


@lru_cache(maxsize=None)
def subspace_sets(n: int, q: int) -> dict:
    """Map canonical basis -> set of vectors (with the zero space of dim n)."""
    out = {}
    for b in subspaces(n, q):
        out[b] = span(b, q) if b else frozenset({(0,) * n})
    return out


def contained(small, big, n: int, q: int) -> bool:
    sets = subspace_sets(n, q)
    return sets[small] <= sets[big]


def meet_is_zero(u, w, n: int, q: int) -> bool:
    sets = subspace_sets(n, q)
    return len(sets[u] & sets[w]) == 1


def join(u, w, q: int) -> tuple:
    return rref(u + w, q)


def mat_vec(m, v, q: int) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) % q for row in m)


def mat_mul(a, b, q: int) -> tuple:
    """Matrix product ab (apply b first, then a)."""
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % q for col in cols) for row in a)


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def general_linear(n: int, q: int) -> tuple:
    """All invertible n x n matrices over F_q."""
    out = []
    for entries in product(range(q), repeat=n * n):
        m = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if len(rref(m, q)) == n:
            out.append(m)
    return tuple(out)


def mat_inverse(m, q: int) -> tuple:
    n = len(m)
    aug = [list(row) + list(e) for row, e in zip(m, identity_matrix(n))]
    red = rref(aug, q)
    return tuple(tuple(row[n:]) for row in red)


def image(m, basis, q: int) -> tuple:
    """Canonical basis of the image of a subspace under m."""
    return rref([mat_vec(m, row, q) for row in basis], q)


def coordinates_in(basis, v) -> tuple:
    """Coordinates of v in a reduced echelon basis: its pivot entries."""
    return tuple(v[p] for p in pivots(basis))


def quotient_coordinates(basis, v, q: int) -> tuple:
    """Coordinates of v modulo span(basis), read off the non-pivot columns."""
    v = list(v)
    for row, p in zip(basis, pivots(basis)):
        c = v[p]
        if c:
            v = [(a - c * b) % q for a, b in zip(v, row)]
    piv = set(pivots(basis))
    return tuple(v[i] for i in range(len(v)) if i not in piv)
