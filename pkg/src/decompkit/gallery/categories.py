"""Small categories used as fixtures: the hanger, Leinster's idempotent
example, and root-preserving inclusions of forests.
"""

from __future__ import annotations

from itertools import permutations

from ..nerves import FiniteCategory
from .species import forest_key, labelled_forests, parse_forest


def _table_category(objects, arrows, relations) -> FiniteCategory:
    """Category from arrows {name: (src, tgt)} and non-identity composites.

    Composites with identities are filled in; ``relations`` lists the rest
    as {(first, second): composite}.
    """
    ids = {x: f"id_{x}" for x in objects}
    arrows = dict(arrows)
    for x, i in ids.items():
        arrows[i] = (x, x)
    comp = dict(relations)
    for m, (s, t) in arrows.items():
        comp[(ids[s], m)] = m
        comp[(m, ids[t])] = m
    return FiniteCategory(objects, arrows, comp, ids, names={m: m for m in arrows})


def hanger() -> FiniteCategory:
    """L --a--> T --b--> R with an involution j of T, a;j = a, j;b = b, a;b = f."""
    return _table_category(
        ["L", "T", "R"],
        {"a": ("L", "T"), "b": ("T", "R"), "f": ("L", "R"), "j": ("T", "T")},
        {("a", "j"): "a", ("a", "b"): "f", ("j", "j"): "id_T", ("j", "b"): "b"},
    )


def leinster() -> FiniteCategory:
    """x --r--> y --s--> x with s;r = id_y and the idempotent e = r;s on x.

    Composition is written first-then-second, so s;r means "s, then r".
    """
    return _table_category(
        ["x", "y"],
        {"e": ("x", "x"), "r": ("x", "y"), "s": ("y", "x")},
        {("s", "r"): "id_y", ("r", "s"): "e", ("e", "e"): "e", ("e", "r"): "r", ("s", "e"): "s"},
    )


# ---------------------------------------------------------------------------
# forests


def root_embeddings(small, big) -> list:
    """Injections of node sets preserving parents (roots go to roots)."""
    out = []
    for image in permutations(range(len(big)), len(small)):
        if all((p is None and big[image[v]] is None) or (p is not None and big[image[v]] == image[p])
               for v, p in enumerate(small)):
            out.append(tuple(image))
    return out


def marked_forest_key(forest, marked) -> str:
    """Canonical key of a forest with some nodes marked: marked nodes use []."""
    children = {v: [] for v in range(len(forest))}
    roots = []
    for v, p in enumerate(forest):
        (roots if p is None else children[p]).append(v)

    def code(v):
        inner = "".join(sorted(code(c) for c in children[v]))
        return f"[{inner}]" if v in marked else f"({inner})"
    return "".join(sorted(code(r) for r in roots))


def root_inclusions_op(max_nodes: int) -> FiniteCategory:
    """Opposite of the category of forests (canonical representatives up to
    ``max_nodes`` nodes) and root-preserving embeddings.

    An arrow F -> R is ``(F, R, e)`` where e embeds R into F; the arrow key
    marks the image of e inside F.
    """
    keys = sorted({forest_key(f) for m in range(max_nodes + 1) for f in labelled_forests(m)},
                  key=lambda k: (len(k), k))
    reps = {k: parse_forest(k) for k in keys}
    arrows = {}
    for big in keys:
        for small in keys:
            if len(reps[small]) <= len(reps[big]):
                for e in root_embeddings(reps[small], reps[big]):
                    arrows[(big, small, e)] = (big, small)
    by_src = {k: [a for a in arrows if a[0] == k] for k in keys}
    comp = {(f, g): (f[0], g[1], tuple(f[2][w] for w in g[2])) for f in arrows for g in by_src[f[1]]}
    ids = {k: (k, k, tuple(range(len(reps[k])))) for k in keys}
    names = {a: f"{a[0] or 'empty'}>{a[1] or 'empty'}:{''.join(map(str, a[2]))}" for a in arrows}
    return FiniteCategory(keys, arrows, comp, ids, validate=False, names=names)


def root_inclusion_key(arrow) -> str:
    big, _small, e = arrow
    return marked_forest_key(parse_forest(big), set(e)) or "empty"


__all__ = ["hanger", "leinster", "marked_forest_key", "root_embeddings", "root_inclusion_key",
           "root_inclusions_op"]
