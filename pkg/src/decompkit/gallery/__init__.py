"""Registry of example spaces.

``build(name, **params)`` returns a :class:`GallerySpace` bundling a fiber
oracle, an optional small materialization and the axiom flags the space
claims.  ``verify_flags`` re-checks those claims on the materialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from ..oracle import FatNerveOracle, FiberOracle, CategoryNerveOracle, OracleError
from ..simplicial import (CheckResult, Report, TruncatedSimplicialGroupoid, check_complete,
                          check_decomposition, check_segal)
from .decalage import EXTRA_IDENTIFICATIONS, IDENTIFICATIONS, verify_decalage_identification, verify_faa_di_bruno_chain
from .categories import hanger, leinster, root_inclusion_key, root_inclusions_op
from .linear import DirectSumOracle, WaldhausenOracle, injection_key, linear_injections
from .monoids import (AdditiveMonoidOracle, ArithmeticSpeciesOracle, DivisibilityOracle, bz2_oracle,
                      divisibility_poset, finite_sets_nerve, nat_leq, symmetric_quotient)
from .species import (FiniteSetsOracle, finite_sets, RestrictionSpeciesCallbacks, RestrictionSpeciesOracle, forests, graphs,
                      linear_orders, posets, restriction_species_oracle, species_simplicial_groupoid, words)
from .tensor import (additive_nerve_tensor, check_tensor_culf, fat_nerve_sum, nerve_sum, species_tensor,
                     vector_sum_nerve_tensor)
from .surjections import (FaaDiBrunoOracle, OrderedSurjectionOracle, injection_size_key,
                          injections_category)

AXIOMS = ("segal", "decomposition", "complete", "locally-discrete")


@dataclass
class GallerySpace:
    name: str
    params: dict
    oracle: FiberOracle
    builder: Callable[[int], TruncatedSimplicialGroupoid] | None
    segal: bool
    complete: bool
    graded: bool
    monoidal: bool
    locally_discrete: bool
    description: str = ""
    tensor_model: Callable[[int], Any] | None = field(default=None, repr=False)
    _materialized: dict = field(default_factory=dict, repr=False)

    @property
    def flags(self) -> dict:
        return {"segal": self.segal, "complete": self.complete, "graded": self.graded,
                "monoidal": self.monoidal, "locally-discrete": self.locally_discrete}

    def materialize(self, levels: int = 4) -> TruncatedSimplicialGroupoid:
        """The small simplicial groupoid, levels 0..levels (cached)."""
        if self.builder is None:
            raise OracleError(f"{self.name} has no materialization")
        if levels not in self._materialized:
            self._materialized[levels] = self.builder(levels)
        return self._materialized[levels]

    def expected(self, axiom: str) -> bool:
        if axiom == "decomposition":
            return True
        return self.flags[axiom]

    def verify_flags(self, axioms=AXIOMS, levels: int = 4) -> Report:
        """One line per axiom: pass when the checker agrees with the claimed flag."""
        x = self.materialize(levels)
        rep = Report()
        for axiom in axioms:
            holds, witness = run_axiom(x, axiom)
            agrees = holds == self.expected(axiom)
            detail = "" if agrees else f"claimed {self.expected(axiom)}, checker says {holds}: {witness}"
            rep.append(CheckResult(f"flag:{axiom}", levels, self.name, "pass" if agrees else "fail", detail))
        return rep


def run_axiom(x: TruncatedSimplicialGroupoid, axiom: str) -> tuple[bool, str]:
    """Run one axiom checker on a materialization: (holds, first witness)."""
    if axiom == "segal":
        rep = check_segal(x)
    elif axiom == "decomposition":
        rep = check_decomposition(x)
    elif axiom == "complete":
        ok = check_complete(x)
        return ok, "" if ok else "s0: X_0 -> X_1 is not a monomorphism"
    elif axiom == "locally-discrete":
        for n, level in enumerate(x.levels):
            for c in level.components():
                if c.aut_order != 1:
                    return False, f"level {n}: {c.representative!r} has {c.aut_order} automorphisms"
        return True, ""
    else:
        raise ValueError(f"unknown axiom {axiom!r}; choose from {', '.join(AXIOMS)}")
    bad = rep.failures()
    return not bad, bad[0].witness if bad else ""


def build_restriction_species(cb: RestrictionSpeciesCallbacks, max_size: int,
                              materialize: int | None = None) -> GallerySpace:
    """A GallerySpace from user callbacks.

    Restriction is spot-checked for functoriality first.  Completeness and
    grading hold for every restriction species; Segal and local
    discreteness are read off the materialization (size ``materialize``,
    default one below ``max_size``).
    """
    oracle = restriction_species_oracle(cb, max_size)
    mat = max(max_size - 1, 0) if materialize is None else materialize
    builder = lambda levels: species_simplicial_groupoid(cb, mat, levels)
    probe = builder(3)
    space = GallerySpace(cb.name, {"max_size": max_size, "materialize": mat}, oracle, builder,
                         segal=run_axiom(probe, "segal")[0], complete=True, graded=True,
                         monoidal=cb.union is not None,
                         locally_discrete=run_axiom(probe, "locally-discrete")[0],
                         description="restriction species from callbacks")
    if cb.union is not None:
        space.tensor_model = lambda levels: species_tensor(builder(levels), cb.union)
    return space


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class _Entry:
    size_param: str
    default: int
    cap: int
    materialize_default: int
    make: Callable[[dict], tuple]
    flags: tuple
    description: str
    options: dict = field(default_factory=dict)
    q_param: bool = False


def _from_oracle(oracle, mat_size):
    return oracle, (lambda levels: oracle.materialize(mat_size, levels))


def _species(cb, size, mat_size):
    oracle = restriction_species_oracle(cb, size)
    return _from_oracle(oracle, mat_size)


def _nerve_of(oracle):
    return oracle, (lambda levels: oracle.materialize(None, levels))


_REGISTRY: dict[str, _Entry] = {}


def _register(name, size_param, default, cap, mat, flags, description, options=None, q_param=False):
    def deco(make):
        _REGISTRY[name] = _Entry(size_param, default, cap, mat, make, flags, description,
                                 options or {}, q_param)
        return make
    return deco


# flags: (segal, complete, graded, monoidal, locally discrete)


@_register("nat-plus", "max_degree", 8, 16, 4, (1, 1, 1, 1, 1), "(N, +): binomial-free power series")
def _nat_plus(p):
    return _from_oracle(AdditiveMonoidOracle(1, p["max_degree"]), p["mat"])


@_register("nat-leq", "max_degree", 8, 16, 4, (1, 1, 1, 0, 1), "nerve of the poset (N, <=)")
def _nat_leq(p):
    o = nat_leq(p["max_degree"])
    small = nat_leq(p["mat"])
    return o, (lambda levels: small.materialize(None, levels))


@_register("nat-power", "max_degree", 4, 6, 3, (1, 1, 1, 1, 1), "(N^2, +)")
def _nat_power(p):
    return _from_oracle(AdditiveMonoidOracle(2, p["max_degree"]), p["mat"])


@_register("sym-quotient", "max_degree", 4, 5, 3, (1, 1, 1, 0, 0), "(N^2, +) modulo the coordinate swap")
def _sym_quotient(p):
    o = symmetric_quotient(p["max_degree"])
    return o, (lambda levels: symmetric_quotient(p["mat"], levels).x)


@_register("divisibility", "max_n", 60, 120, 12, (1, 1, 1, 0, 1),
           "multiplicative monoid of positive integers (Dirichlet series)")
def _divisibility(p):
    return _from_oracle(DivisibilityOracle(p["max_n"]), p["mat"])


@_register("divisibility-poset", "max_n", 60, 120, 12, (1, 1, 1, 0, 1), "nerve of the divisibility poset")
def _divisibility_poset(p):
    o = divisibility_poset(p["max_n"])
    small = divisibility_poset(p["mat"])
    return o, (lambda levels: small.materialize(None, levels))


@_register("b-species", "max_size", 6, 6, 3, (1, 1, 1, 1, 0), "finite sets and bijections under disjoint union")
def _b_species(p):
    return FiniteSetsOracle(p["max_size"]), (lambda levels: finite_sets_nerve(p["mat"], levels))


@_register("arith-species", "max_n", 6, 6, 4, (1, 1, 1, 0, 0), "finite sets under cartesian product")
def _arith_species(p):
    return _from_oracle(ArithmeticSpeciesOracle(p["max_n"]), p["mat"])


@_register("shuffles", "max_size", 6, 6, 3, (0, 1, 1, 1, 1), "linear orders: the shuffle coalgebra")
def _shuffles(p):
    return _species(linear_orders(), p["max_size"], p["mat"])


@_register("words", "max_size", 4, 6, 2, (0, 1, 1, 1, 1), "words over an alphabet: shuffle of words",
           options={"alphabet": "ab"})
def _words(p):
    return _species(words(p["alphabet"]), p["max_size"], p["mat"])


@_register("vect-waldhausen", "max_dim", 4, 4, 2, (0, 1, 1, 0, 0),
           "Waldhausen construction of vector spaces over F_q", q_param=True)
def _waldhausen(p):
    return _from_oracle(WaldhausenOracle(p["q"], p["max_dim"]), p["mat"])


@_register("vect-directsum", "max_dim", 4, 4, 2, (1, 1, 1, 1, 0),
           "vector spaces over F_q under direct sum", q_param=True)
def _directsum(p):
    return _from_oracle(DirectSumOracle(p["q"], p["max_dim"]), p["mat"])


@_register("fdb-surjections", "max_size", 5, 6, 3, (1, 1, 1, 1, 0),
           "fat nerve of finite sets and surjections (Faa di Bruno)")
def _fdb(p):
    return _from_oracle(FaaDiBrunoOracle(p["max_size"]), p["mat"])


@_register("ordered-surjections", "max_size", 5, 6, 3, (1, 1, 1, 1, 1),
           "finite ordinals and monotone surjections")
def _ordered(p):
    return _from_oracle(OrderedSurjectionOracle(p["max_size"]), p["mat"])


@_register("schmitt-graphs", "max_vertices", 4, 5, 3, (0, 1, 1, 1, 0),
           "graphs with ordered vertex partitions", options={"max_multiplicity": 1, "loops": False})
def _graphs(p):
    return _species(graphs(p["max_multiplicity"], p["loops"]), p["max_vertices"], p["mat"])


@_register("posets", "max_size", 3, 4, 2, (0, 1, 1, 1, 0), "finite posets as a restriction species")
def _posets(p):
    return _species(posets(), p["max_size"], p["mat"])


@_register("bck-forests", "max_nodes", 3, 4, 2, (0, 1, 1, 1, 0), "rooted forests and admissible cuts")
def _forests(p):
    return _species(forests(), p["max_nodes"], p["mat"])


@_register("hanger", None, 0, 0, 0, (1, 1, 0, 0, 0), "three objects, one involution: coefficient 1/2")
def _hanger(p):
    return _nerve_of(FatNerveOracle(hanger(), "hanger"))


@_register("leinster", None, 0, 0, 0, (1, 1, 0, 0, 1), "a retraction pair: Mobius inversion without finite length")
def _leinster(p):
    return _nerve_of(CategoryNerveOracle(leinster(), "leinster"))


@_register("bg-negative", None, 0, 0, 0, (1, 0, 0, 0, 0), "BZ/2: a decomposition space that is not complete")
def _bg(p):
    o = bz2_oracle(4)
    return o, (lambda levels: o.x if levels == 4 else bz2_oracle(levels).x)


@_register("injections", "max_size", 3, 4, 2, (1, 1, 1, 0, 0), "fat nerve of finite sets and injections")
def _injections(p):
    def make(size):
        return FatNerveOracle(injections_category(size), "injections", key_of=injection_size_key,
                              degree=lambda f: f[1] - f[0])
    small = make(p["mat"])
    return make(p["max_size"]), (lambda levels: small.materialize(None, levels))


@_register("linear-injections", "max_dim", 2, 3, 2, (1, 1, 1, 0, 0),
           "fat nerve of vector spaces and injective linear maps", q_param=True)
def _linear_injections(p):
    def make(size):
        return FatNerveOracle(linear_injections(p["q"], size), "linear-injections", key_of=injection_key,
                              degree=lambda f: f[1] - f[0])
    small = make(p["mat"])
    return make(p["max_dim"]), (lambda levels: small.materialize(None, levels))


@_register("root-inclusions-op", "max_nodes", 2, 3, 2, (1, 1, 1, 0, 0),
           "opposite of forests and root-preserving inclusions")
def _root_inclusions(p):
    def make(size):
        return FatNerveOracle(root_inclusions_op(size), "root-inclusions-op", key_of=root_inclusion_key,
                              degree=lambda f: len(f[0]) // 2 - len(f[1]) // 2)
    small = make(p["mat"])
    return make(p["max_nodes"]), (lambda levels: small.materialize(None, levels))


def _species_sum(make_cb):
    def model(p, builder):
        cb = make_cb(p)
        return lambda levels: species_tensor(builder(levels), cb.union)
    return model


def _on_materialization(tensor):
    return lambda p, builder: (lambda levels: tensor(builder(levels)))


# the monoidal product of each monoidal space, as a map on a strict model;
# finite sets use the coloured-set model, where disjoint union is strict
_TENSOR_MODELS = {
    "nat-plus": _on_materialization(additive_nerve_tensor),
    "nat-power": _on_materialization(additive_nerve_tensor),
    "b-species": lambda p, _b: (lambda levels: species_tensor(
        species_simplicial_groupoid(finite_sets(), p["mat"], levels), finite_sets().union)),
    "shuffles": _species_sum(lambda p: linear_orders()),
    "words": _species_sum(lambda p: words(p["alphabet"])),
    "schmitt-graphs": _species_sum(lambda p: graphs(p["max_multiplicity"], p["loops"])),
    "posets": _species_sum(lambda p: posets()),
    "bck-forests": _species_sum(lambda p: forests()),
    "vect-directsum": lambda p, _b: (lambda levels: vector_sum_nerve_tensor(p["q"], p["mat"], levels)),
    "fdb-surjections": _on_materialization(fat_nerve_sum),
    "ordered-surjections": _on_materialization(nerve_sum),
}


def check_monoidal(space: GallerySpace, levels: int = 3, up_to: int | None = None) -> Report:
    """Is the monoidal product of ``space`` a CULF simplicial map?"""
    if space.tensor_model is None:
        raise OracleError(f"{space.name} has no monoidal product on its materialization")
    return check_tensor_culf(space.tensor_model(levels), up_to)


def list_spaces() -> list[dict]:
    """Name, size parameter, default, cap and claimed flags of every space."""
    out = []
    for name in sorted(_REGISTRY):
        e = _REGISTRY[name]
        out.append({"name": name, "size_param": e.size_param, "default": e.default, "cap": e.cap,
                    "materialize_default": e.materialize_default,
                    "q": [2, 3] if e.q_param else None, "options": dict(e.options),
                    "flags": dict(zip(("segal", "complete", "graded", "monoidal", "locally-discrete"),
                                      map(bool, e.flags))),
                    "description": e.description})
    return out


def size_parameter(name: str) -> str | None:
    return _entry(name).size_param


def _entry(name: str) -> _Entry:
    if name not in _REGISTRY:
        raise OracleError(f"unknown gallery space {name!r}; known: {', '.join(sorted(_REGISTRY))}")
    return _REGISTRY[name]


def build(name: str, **params: Any) -> GallerySpace:
    """Build a registered space.

    The size parameter (``max_vertices``, ``max_dim``, ...) defaults per
    space and may not exceed its cap; ``materialize`` sets the size of the
    materialization, which is capped one below the oracle cap.  ``q`` is
    2 or 3 where it applies.
    """
    e = _entry(name)
    params = dict(params)
    p = dict(e.options)
    if e.size_param is not None:
        size = params.pop(e.size_param, e.default)
        if not isinstance(size, int) or size < 0:
            raise OracleError(f"{name}: {e.size_param} must be a non-negative integer")
        if size > e.cap:
            raise OracleError(f"{name}: {e.size_param}={size} exceeds the cap {e.cap}")
        p[e.size_param] = size
        mat = params.pop("materialize", min(e.materialize_default, size))
        mat_cap = max(e.cap - 1, 0)
        if mat > mat_cap:
            raise OracleError(f"{name}: materialization size {mat} exceeds the cap {mat_cap}")
        p["mat"] = mat
    if e.q_param:
        q = params.pop("q", 2)
        if q not in (2, 3):
            raise OracleError(f"{name}: q must be 2 or 3")
        p["q"] = q
    for k in list(params):
        if k in e.options:
            p[k] = params.pop(k)
    if params:
        raise OracleError(f"{name}: unknown parameters {', '.join(sorted(params))}")
    oracle, builder = e.make(p)
    segal, complete, graded, monoidal, discrete = map(bool, e.flags)
    shown = {k: v for k, v in p.items() if k != "mat"}
    space = GallerySpace(name, shown, oracle, builder, segal, complete, graded, monoidal, discrete,
                         e.description)
    if name in _TENSOR_MODELS:
        space.tensor_model = _TENSOR_MODELS[name](p, builder)
    return space


def space_names() -> list[str]:
    return sorted(_REGISTRY)


__all__ = [
    "AXIOMS", "EXTRA_IDENTIFICATIONS", "GallerySpace", "IDENTIFICATIONS", "RestrictionSpeciesOracle", "build",
    "build_restriction_species", "check_monoidal", "list_spaces", "run_axiom", "size_parameter", "space_names",
    "verify_decalage_identification", "verify_faa_di_bruno_chain",
]
