"""Surjections: the Faa di Bruno space (finite sets and surjections, up to
isomorphism) and its ordered variant (finite ordinals and monotone surjections).
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations, product
from math import factorial

from ..combinat import all_perms, integer_partitions, set_partitions
from ..nerves import FiniteCategory, fat_nerve, nerve
from ..oracle import FiberOracle, discrete_fiber


# ---------------------------------------------------------------------------
# type keys


def type_key(fiber_sizes) -> str:
    """"1^2.2^1" for a surjection with two singleton fibers and one pair."""
    counts = Counter(fiber_sizes)
    if not counts:
        return "1^0"
    return ".".join(f"{j}^{counts[j]}" for j in sorted(counts))


def parse_type(key: str) -> tuple:
    """Fiber sizes in increasing order."""
    if key == "1^0":
        return ()
    sizes = []
    for part in key.split("."):
        j, _, e = part.partition("^")
        j, e = int(j), int(e)
        if j < 1 or e < 1:
            raise ValueError(f"bad surjection type {key!r}")
        sizes.extend([j] * e)
    sizes = tuple(sorted(sizes))
    if type_key(sizes) != key:
        raise ValueError(f"non-canonical surjection type {key!r}")
    return sizes


def surjection_type(f, k: int) -> str:
    counts = Counter(f)
    return type_key([counts[j] for j in range(k)])


def representative_surjection(key: str) -> tuple:
    """The map sending consecutive blocks of [n] onto 0, 1, ..."""
    return tuple(j for j, s in enumerate(parse_type(key)) for _ in range(s))


def type_aut_order(key: str) -> int:
    """prod_j lambda_j! (j!)^lambda_j for the type 1^lambda_1 2^lambda_2 ..."""
    counts = Counter(parse_type(key))
    out = 1
    for j, lam in counts.items():
        out *= factorial(lam) * factorial(j) ** lam
    return out


# ---------------------------------------------------------------------------
# partitions as block labels


def _labels(blocks, n) -> tuple:
    """Block index of each element, blocks ordered by their least element."""
    out = [0] * n
    for idx, block in enumerate(sorted(blocks, key=min)):
        for e in block:
            out[e] = idx
    return tuple(out)


def _refines(p, q) -> bool:
    """Every block of p lies inside a block of q."""
    image = {}
    for a, b in zip(p, q):
        if image.setdefault(a, b) != b:
            return False
    return True


def _step_type(p, q) -> str:
    """Type of the surjection from the blocks of p onto the blocks of q."""
    inside = {}
    for a, b in zip(p, q):
        inside.setdefault(b, set()).add(a)
    return type_key(len(v) for v in inside.values())


class FaaDiBrunoOracle(FiberOracle):
    """Surjections between finite sets up to isomorphism.

    The fiber over f: n -> k is the set of chains of partitions of [n] from
    the discrete partition to the kernel of f; the fiber is discrete since
    an n-simplex over f is determined by its kernel partitions.
    """

    graded = True
    complete = True
    segal = True
    monoidal = True
    base_is_point = False

    def __init__(self, max_size: int = 5):
        super().__init__()
        self.name, self.default_bound = "fdb-surjections", max_size
        self.unit_key = "1^0"

    def _keys(self, bound):
        return [type_key(p) for n in range(bound + 1) for p in integer_partitions(n)]

    def _validate(self, key):
        parse_type(key)
        return True

    def sort_key(self, key):
        sizes = parse_type(key)
        return (sum(sizes), len(sizes), key)

    def degree(self, key):
        sizes = parse_type(key)
        return sum(sizes) - len(sizes)

    def aut_order(self, key):
        return type_aut_order(key)

    def is_degenerate(self, key):
        return all(s == 1 for s in parse_type(key))

    def _refining(self, key):
        f = representative_surjection(key)
        n = len(f)
        blocks = [[e for e in range(n) if f[e] == j] for j in range(len(parse_type(key)))]
        out = []
        for choice in product(*(set_partitions(b) for b in blocks)):
            out.append(_labels([blk for part in choice for blk in part], n))
        return f, out

    def _enumerate(self, r, key, strict):
        f, refining = self._refining(key)
        n = len(f)
        kernel = _labels([[e for e in range(n) if f[e] == j] for j in range(len(set(f)))], n)
        discrete = tuple(range(n))
        if r == 0:
            return discrete_fiber([()] if kernel == discrete else [], lambda _c: ())
        chains = []

        def extend(chain):
            last = chain[-1] if chain else discrete
            if len(chain) == r - 1:
                if not strict or _nblocks(last) > _nblocks(kernel):
                    chains.append(tuple(chain))
                return
            for p in refining:
                if _refines(last, p) and not (strict and _nblocks(p) == _nblocks(last)):
                    extend(chain + [p])

        extend([])

        def edges(chain):
            full = [discrete, *chain, kernel]
            return tuple(_step_type(full[i], full[i + 1]) for i in range(r))
        return discrete_fiber(chains, edges)

    def _fiber(self, r, key):
        return self._enumerate(r, key, False)

    def _nondegenerate_fiber(self, r, key):
        return self._enumerate(r, key, True)

    def segal_gluings(self, a, b):
        fa, fb = representative_surjection(a), representative_surjection(b)
        k = len(parse_type(a))
        if k != len(fb):
            return []
        return [surjection_type(tuple(fb[phi[x]] for x in fa), len(parse_type(b)))
                for phi in all_perms(k)]

    def tensor(self, a, b):
        return type_key(parse_type(a) + parse_type(b))

    def materialize(self, bound, levels):
        bound = 3 if bound is None else bound
        x = fat_nerve(surjections_category(bound), levels, key_of=lambda ch: surjection_arrow_type(ch[1][0]))
        x.name = self.name
        return x


def _nblocks(p):
    return len(set(p))


# ---------------------------------------------------------------------------
# categories of maps between finite sets


def _maps_category(max_size: int, keep, name_of) -> FiniteCategory:
    objects = list(range(max_size + 1))
    arrows = {}
    for a in objects:
        for b in objects:
            for f in product(range(b), repeat=a):
                if keep(f, a, b):
                    arrows[(a, b, f)] = (a, b)
    by_src = {x: [g for g in arrows if g[0] == x] for x in objects}
    comp = {(f, g): (f[0], g[1], tuple(g[2][i] for i in f[2]))
            for f in arrows for g in by_src[f[1]]}
    ids = {x: (x, x, tuple(range(x))) for x in objects}
    return FiniteCategory(objects, arrows, comp, ids, validate=False,
                          names={f: name_of(f) for f in arrows})


def surjections_category(max_size: int) -> FiniteCategory:
    """Sets [0..max_size] and surjections; arrows are ``(a, b, map)``."""
    return _maps_category(max_size, lambda f, a, b: len(set(f)) == b,
                          lambda f: f"{f[0]}->{f[1]}:{''.join(map(str, f[2]))}")


def surjection_arrow_type(arrow) -> str:
    return surjection_type(arrow[2], arrow[1])


def _factors_through(rho, pi, sigma) -> bool:
    """Is there f with f(rho(t)) == pi(sigma(t)) for all t?"""
    f = {}
    for t, block in enumerate(rho):
        if f.setdefault(block, pi[sigma[t]]) != pi[sigma[t]]:
            return False
    return True


def _standard_surjections(max_size):
    return [(n, k, f) for n in range(max_size + 1) for k in range(n + 1)
            for f in product(range(k), repeat=n) if len(set(f)) == k]


def _refinement_category(max_size: int, relabel: bool) -> FiniteCategory:
    objects = _standard_surjections(max_size)
    arrows = {}
    for rho in objects:
        n = rho[0]
        sigmas = all_perms(n) if relabel else [tuple(range(n))]
        for pi in objects:
            if pi[0] != n:
                continue
            for sigma in sigmas:
                if _factors_through(rho[2], pi[2], sigma):
                    arrows[(rho, pi, sigma)] = (rho, pi)
    by_src = {}
    for m in arrows:
        by_src.setdefault(m[0], []).append(m)
    comp = {(m, m2): (m[0], m2[1], tuple(m2[2][i] for i in m[2]))
            for m in arrows for m2 in by_src.get(m[1], ())}
    ids = {x: (x, x, tuple(range(x[0]))) for x in objects}
    return FiniteCategory(objects, arrows, comp, ids, validate=False)


def refinement_category(max_size: int) -> FiniteCategory:
    """Surjections out of the standard sets, with refinement triangles fixing the domain.

    An object is a surjection ``(n, k, map)``; an arrow ``(rho, pi, sigma)`` has
    sigma the identity of the domain.  Equivalent to the partition poset.
    """
    return _refinement_category(max_size, relabel=False)


def relabelled_refinement_category(max_size: int) -> FiniteCategory:
    """As refinement_category, but an arrow may carry any bijection sigma of the domain."""
    return _refinement_category(max_size, relabel=True)


def partition_poset(max_size: int) -> FiniteCategory:
    """Set partitions of the standard sets ordered by refinement."""
    parts = [(n, frozenset(frozenset(b) for b in p)) for n in range(max_size + 1)
             for p in set_partitions(range(n))]

    def finer(a, b):
        return a[0] == b[0] and all(any(x <= y for y in b[1]) for x in a[1])
    return FiniteCategory.from_poset(parts, finer)


def partition_of(surjection) -> tuple:
    n, k, f = surjection
    return (n, frozenset(frozenset(t for t in range(n) if f[t] == b) for b in range(k)))


def injections_category(max_size: int) -> FiniteCategory:
    """Sets [0..max_size] and injections; arrows are ``(a, b, map)``."""
    return _maps_category(max_size, lambda f, a, b: len(set(f)) == a,
                          lambda f: f"{f[0]}->{f[1]}:{''.join(map(str, f[2]))}")


def injection_size_key(arrow) -> str:
    return f"{arrow[0]}->{arrow[1]}"


# ---------------------------------------------------------------------------
# ordered surjections


def composition_key(parts) -> str:
    return "(" + ",".join(str(p) for p in parts) + ")"


def parse_composition(key: str) -> tuple:
    if not (key.startswith("(") and key.endswith(")")):
        raise ValueError(f"not a composition key: {key!r}")
    body = key[1:-1]
    parts = tuple(int(p) for p in body.split(",")) if body else ()
    if any(p < 1 for p in parts) or composition_key(parts) != key:
        raise ValueError(f"not a composition key: {key!r}")
    return parts


def _cuts(parts) -> frozenset:
    out, acc = set(), 0
    for p in parts[:-1]:
        acc += p
        out.add(acc)
    return frozenset(out)


def _from_cuts(cuts, n) -> tuple:
    if n == 0:
        return ()
    points = [0, *sorted(cuts), n]
    return tuple(points[i + 1] - points[i] for i in range(len(points) - 1))


def _ordered_step(fine, coarse, n) -> str:
    """Composition recording how many blocks of ``fine`` lie in each block of ``coarse``."""
    if n == 0:
        return "()"
    points = [0, *sorted(coarse), n]
    return composition_key(tuple(1 + sum(1 for c in fine if points[i] < c < points[i + 1])
                                 for i in range(len(points) - 1)))


class OrderedSurjectionOracle(FiberOracle):
    """Strict nerve of finite ordinals and monotone surjections.

    A monotone surjection n -> k is the composition of n listing its fiber
    sizes; the fiber over it consists of chains of coarsenings of cut sets.
    """

    graded = True
    complete = True
    segal = True
    monoidal = True
    base_is_point = False

    def __init__(self, max_size: int = 5):
        super().__init__()
        self.name, self.default_bound = "ordered-surjections", max_size
        self.unit_key = "()"

    def _keys(self, bound):
        out = ["()"]
        for n in range(1, bound + 1):
            for r in range(n):
                for cuts in combinations(range(1, n), r):
                    out.append(composition_key(_from_cuts(cuts, n)))
        return out

    def _validate(self, key):
        parse_composition(key)
        return True

    def sort_key(self, key):
        parts = parse_composition(key)
        return (sum(parts), len(parts), parts)

    def degree(self, key):
        parts = parse_composition(key)
        return sum(parts) - len(parts)

    def aut_order(self, key):
        self.check_key(key)
        return 1

    def is_degenerate(self, key):
        return all(p == 1 for p in parse_composition(key))

    def _enumerate(self, r, key, strict):
        parts = parse_composition(key)
        n = sum(parts)
        target = _cuts(parts)
        everything = frozenset(range(1, n))
        if r == 0:
            return discrete_fiber([()] if target == everything else [], lambda _c: ())
        free = sorted(everything - target)
        between = [target | frozenset(extra) for k in range(len(free) + 1)
                   for extra in combinations(free, k)]
        chains = []

        def extend(chain):
            last = chain[-1] if chain else everything
            if len(chain) == r - 1:
                if not strict or last != target:
                    chains.append(tuple(chain))
                return
            for c in between:
                if c <= last and not (strict and c == last):
                    extend(chain + [c])

        extend([])

        def edges(chain):
            full = [everything, *chain, target]
            return tuple(_ordered_step(full[i], full[i + 1], n) for i in range(r))
        return discrete_fiber(chains, edges)

    def _fiber(self, r, key):
        return self._enumerate(r, key, False)

    def _nondegenerate_fiber(self, r, key):
        return self._enumerate(r, key, True)

    def segal_gluings(self, a, b):
        pa, pb = parse_composition(a), parse_composition(b)
        if len(pa) != sum(pb):
            return []
        out, i = [], 0
        for size in pb:
            out.append(sum(pa[i:i + size]))
            i += size
        return [composition_key(out)]

    def tensor(self, a, b):
        return composition_key(parse_composition(a) + parse_composition(b))

    def materialize(self, bound, levels):
        bound = 3 if bound is None else bound
        x = nerve(monotone_surjections_category(bound), levels,
                  key_of=lambda ch: monotone_surjection_key(ch[1][0]))
        x.name = self.name
        return x


def monotone_surjections_category(max_size: int) -> FiniteCategory:
    """Ordinals [0..max_size] and monotone surjections."""
    return _maps_category(max_size,
                          lambda f, a, b: len(set(f)) == b and all(x <= y for x, y in zip(f, f[1:])),
                          lambda f: f"{f[0]}->{f[1]}:{''.join(map(str, f[2]))}")


def monotone_surjection_key(arrow) -> str:
    f, k = arrow[2], arrow[1]
    return composition_key(tuple(f.count(j) for j in range(k)))


__all__ = [
    "FaaDiBrunoOracle", "OrderedSurjectionOracle", "composition_key", "injection_size_key",
    "injections_category", "monotone_surjection_key", "monotone_surjections_category", "parse_composition",
    "parse_type", "partition_of", "partition_poset", "refinement_category", "relabelled_refinement_category",
    "representative_surjection", "surjection_arrow_type", "surjection_type", "surjections_category",
    "type_aut_order", "type_key",
]
