"""Command line front end.

    decompkit check schmitt-graphs --max-vertices 3 --axioms segal,decomposition --expect segal=fail
    decompkit delta bck-forests --element "(()())" --terms
    decompkit mobius vect-waldhausen --q 2 --max-dim 4
    decompkit zetapoly nat-plus --element 4
    decompkit series b-species --bound 6 --invert
    decompkit verify-all --jobs 4
    decompkit gallery list

Every command writes one report (json, csv or text) to stdout or ``--out``.
The exit code is 0 exactly when every requested check passes or matches
its ``--expect`` entry.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache

from . import acceptance
from .gallery import build, check_monoidal, list_spaces, run_axiom, size_parameter, space_names
from .incidence import (DEFAULT_LENGTH_CAP, IncidenceError, check_bialgebra, check_coassociativity,
                        check_mobius_inversion,
                        comultiply, comultiply_terms, length, mobius, mobius_function, mobius_via_interpolation,
                        numeric_zeta_inverse, zeta_polynomial)
from .oracle import OracleError
from .series import REGISTERED, SeriesError, from_incidence, invert, key_index, zeta_series

SCHEMA = "decomp-kit/1"
SIZE_FLAGS = ("max_degree", "max_n", "max_size", "max_vertices", "max_nodes", "max_dim")
MATERIALIZATION_AXIOMS = ("segal", "decomposition", "complete", "locally-discrete")
ORACLE_AXIOMS = ("mobius-condition", "coassociativity", "mobius-inversion", "bialgebra")
MONOIDAL_AXIOMS = ("monoidal-culf",)


class UsageError(Exception):
    """Bad command line input (reported with exit code 2)."""


# ---------------------------------------------------------------------------
# configuration


def _space_params(args, for_check=False) -> tuple[str, dict]:
    name = args.space or args.space_flag
    if not name:
        raise UsageError("a space name is required (positional or --space)")
    if name not in space_names():
        raise UsageError(f"unknown space {name!r}; run 'gallery list'")
    size_param = size_parameter(name)
    params = {}
    for flag in SIZE_FLAGS:
        value = getattr(args, flag)
        if value is None:
            continue
        if flag != size_param:
            expected = f"--{size_param.replace('_', '-')}" if size_param else "no size flag"
            raise UsageError(f"{name} takes {expected}, not --{flag.replace('_', '-')}")
        params[flag] = value
    if args.window is not None:
        if size_param is None:
            raise UsageError(f"{name} has a fixed window")
        params[size_param] = args.window
    if args.q is not None:
        params["q"] = args.q
    for opt in ("alphabet", "max_multiplicity", "loops"):
        value = getattr(args, opt, None)
        if value not in (None, False):
            params[opt] = value
    if args.materialize is not None:
        params["materialize"] = args.materialize
    elif for_check and size_param in params:
        cap = next(s["cap"] for s in list_spaces() if s["name"] == name)
        params["materialize"] = min(params[size_param], max(cap - 1, 0))
    return name, params


def _build(name, params):
    try:
        return build(name, **params)
    except OracleError as exc:
        raise UsageError(str(exc)) from None


def _parse_expect(entries) -> dict:
    out = {}
    for entry in entries or []:
        for item in entry.split(","):
            if not item:
                continue
            key, sep, value = item.partition("=")
            if not sep or value not in ("pass", "fail"):
                raise UsageError(f"--expect entries look like segal=fail, got {item!r}")
            out[key.strip()] = value
    return out


def _frac(c) -> dict:
    c = Fraction(c)
    return {"num": c.numerator, "den": c.denominator}


def _show(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# parallel per-key work


@lru_cache(maxsize=None)
def _cached_space(name, frozen_params):
    return build(name, **dict(frozen_params))


def _mobius_worker(job):
    name, frozen, key, cap = job
    try:
        return key, mobius(_cached_space(name, frozen).oracle, key, cap), ""
    except IncidenceError as exc:
        return key, None, str(exc)


def _map(fn, jobs_list, jobs):
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, jobs_list))
    return [fn(j) for j in jobs_list]


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> dict:
    name, params = _space_params(args, for_check=True)
    space = _build(name, params)
    axioms = [a.strip() for a in args.axioms.split(",") if a.strip()]
    expect = _parse_expect(args.expect)
    known = MATERIALIZATION_AXIOMS + ORACLE_AXIOMS + MONOIDAL_AXIOMS
    unknown = set(axioms) - set(known)
    if unknown:
        raise UsageError(f"unknown axioms {sorted(unknown)}; choose from {', '.join(known)}")
    for key in expect:
        if key not in axioms:
            raise UsageError(f"--expect names {key!r}, which is not among --axioms")
    rows = []
    for axiom in axioms:
        if axiom in MATERIALIZATION_AXIOMS:
            holds, witness = run_axiom(space.materialize(args.levels), axiom)
        elif axiom == "monoidal-culf":
            holds, witness = _monoidal_axiom(space, args.levels)
        else:
            holds, witness = _oracle_axiom(space.oracle, axiom, args.cap)
        status = "pass" if holds else "fail"
        wanted = expect.get(axiom, "pass")
        rows.append({"axiom": axiom, "status": status.upper(), "expected": wanted,
                     "ok": status == wanted, "witness": witness})
    return {"space": name, "params": space.params | _materialized(params), "rows": rows,
            "ok": all(r["ok"] for r in rows)}


def _materialized(params):
    return {"materialize": params["materialize"]} if "materialize" in params else {}


def _monoidal_axiom(space, levels):
    if space.tensor_model is None:
        raise UsageError(f"{space.name} has no monoidal product to check")
    bad = check_monoidal(space, min(levels, 3)).failures()
    return not bad, f"{bad[0].square}: {bad[0].witness}" if bad else ""


def _oracle_axiom(oracle, axiom, cap):
    if axiom == "mobius-condition":
        try:
            for key in oracle.keys():
                length(oracle, key, cap)
        except IncidenceError as exc:
            return False, str(exc)
        return True, ""
    rep = check_coassociativity(oracle) if axiom == "coassociativity" else None
    if axiom == "bialgebra":
        if not oracle.monoidal:
            raise UsageError(f"{oracle.name} carries no monoidal structure")
        rep = check_bialgebra(oracle)
    if axiom == "mobius-inversion":
        try:
            rep = check_mobius_inversion(oracle, cap=cap)
        except IncidenceError as exc:
            return False, str(exc)
    bad = rep.failures()
    return not bad, f"{bad[0].square}: {bad[0].witness}" if bad else ""


def cmd_delta(args) -> dict:
    name, params = _space_params(args)
    space = _build(name, params)
    o = space.oracle
    if not o.is_key(args.element):
        raise UsageError(f"{args.element!r} is not a key of {name}")
    if args.terms:
        rows = [{"a": a, "b": b} | _frac(w) for a, b, w in comultiply_terms(o, args.element)]
    else:
        rows = [{"a": a, "b": b} | _frac(c) for (a, b), c in comultiply(o, args.element)]
    return {"space": name, "params": space.params, "element": args.element,
            "mode": "terms" if args.terms else "aggregated", "rows": rows, "ok": True}


def cmd_mobius(args) -> dict:
    name, params = _space_params(args)
    space = _build(name, params)
    o = space.oracle
    keys = o.keys()
    if args.numeric:
        try:
            fn = numeric_zeta_inverse(o, keys)
        except IncidenceError as exc:
            return {"space": name, "params": space.params, "rows": [], "ok": False, "error": str(exc)}
        rows = [{"key": k} | _frac(fn(k)) for k in keys]
        return {"space": name, "params": space.params, "method": "numeric", "rows": rows, "ok": True}
    frozen = tuple(sorted(params.items()))
    results = _map(_mobius_worker, [(name, frozen, k, args.cap) for k in keys], args.jobs)
    rows, errors = [], []
    for key, value, err in results:
        if err:
            errors.append(err)
        else:
            rows.append({"key": key} | _frac(value))
    out = {"space": name, "params": space.params, "method": "alternating", "rows": rows, "ok": not errors}
    if errors:
        out["error"] = errors[0]
    return out


def cmd_zetapoly(args) -> dict:
    name, params = _space_params(args)
    space = _build(name, params)
    o = space.oracle
    if not o.is_key(args.element):
        raise UsageError(f"{args.element!r} is not a key of {name}")
    rows = [{"r": r} | _frac(zeta_polynomial(o, args.element, r)) for r in range(args.r_max + 1)]
    try:
        at_minus_one = mobius_via_interpolation(o, args.element, args.cap)
    except IncidenceError as exc:
        return {"space": name, "params": space.params, "element": args.element, "rows": rows,
                "ok": False, "error": str(exc)}
    rows.insert(0, {"r": -1} | _frac(at_minus_one))
    mu = mobius(o, args.element, args.cap)
    return {"space": name, "params": space.params, "element": args.element, "rows": rows,
            "mobius": _frac(mu), "ok": at_minus_one == mu}


def cmd_series(args) -> dict:
    name = args.space or args.space_flag
    if name not in REGISTERED:
        raise UsageError(f"{name!r} has no series representation; choose from {', '.join(sorted(REGISTERED))}")
    flavor = REGISTERED[name]
    if args.q is not None and not flavor.startswith("q-"):
        raise UsageError(f"--q only applies to q-flavoured series, not {flavor}")
    try:
        series = zeta_series(flavor, args.bound, args.q)
        if args.invert:
            series = invert(series)
    except SeriesError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    for n, c in series.coeffs.items():
        rows.append({"n": n, "poly": str(c)} if series.symbolic else {"n": n} | _frac(c))
    out = {"space": name, "series": series.to_json_data(), "inverted": args.invert, "rows": rows, "ok": True}
    if args.invert and not series.symbolic:
        # the same coefficients straight from the incidence algebra
        params = {size_parameter(name): args.bound} | ({"q": args.q} if args.q else {})
        space = _build(name, params)
        keys = [k for k in space.oracle.keys() if key_index(k) <= args.bound]
        direct = from_incidence(name, args.bound, mobius_function(space.oracle, keys), args.q)
        out["matches_incidence"] = direct == series
        out["ok"] = direct == series
    return out


def cmd_verify_all(args) -> dict:
    chosen = None
    if args.criteria:
        chosen = [int(c) for c in args.criteria.split(",")]
        unknown = set(chosen) - set(acceptance.CRITERIA)
        if unknown:
            raise UsageError(f"no such criteria: {sorted(unknown)}")
    expect = _parse_expect(args.expect)
    reports = acceptance.run_all(chosen, args.jobs)
    rows = []
    for n, rep in reports.items():
        status = "pass" if rep.passed else "fail"
        wanted = expect.get(str(n), "pass")
        bad = rep.failures()
        rows.append({"criterion": n, "title": acceptance.CRITERIA[n][0], "status": status.upper(),
                     "expected": wanted, "ok": status == wanted, "checks": len(rep),
                     "witness": f"{bad[0].square}: {bad[0].witness}" if bad else ""})
    return {"rows": rows, "ok": all(r["ok"] for r in rows)}


def cmd_gallery(args) -> dict:
    if args.action != "list":
        raise UsageError("the only gallery action is 'list'")
    rows = []
    for s in list_spaces():
        flags = ",".join(k for k, v in s["flags"].items() if v)
        rows.append({"name": s["name"], "size_param": s["size_param"] or "", "default": s["default"],
                     "cap": s["cap"], "flags": flags, "description": s["description"]})
    return {"rows": rows, "ok": True}


# ---------------------------------------------------------------------------
# output


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=1, sort_keys=True) + "\n"
    rows = report.get("rows", [])
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            columns = list(dict.fromkeys(k for r in rows for k in r))
            w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        return buf.getvalue()
    lines = []
    command = report["command"]
    if "space" in report:
        params = ", ".join(f"{k}={v}" for k, v in sorted(report.get("params", {}).items()))
        lines.append(f"{report['space']}" + (f" ({params})" if params else ""))
    for r in rows:
        lines.append(_text_row(command, r))
    if "mobius" in report:
        lines.append(f"mu = {_show(Fraction(report['mobius']['num'], report['mobius']['den']))}")
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    return "\n".join(lines) + "\n"


def _key(k) -> str:
    return k if k else '""'


def _text_row(command, r) -> str:
    value = _show(Fraction(r["num"], r["den"])) if "num" in r else None
    if command == "check":
        note = "" if r["expected"] == "pass" else f" (expected {r['expected']})"
        return f"{r['axiom']}: {r['status']}{note}" + (f"  {r['witness']}" if r["witness"] else "")
    if command == "delta":
        return f"{value} * {_key(r['a'])} (x) {_key(r['b'])}"
    if command == "mobius":
        return f"mu({r['key']}) = {value}"
    if command == "zetapoly":
        return f"zeta^{r['r']} = {value}"
    if command == "series":
        return f"a_{r['n']} = {value if value is not None else r['poly']}"
    if command == "verify-all":
        note = "" if r["expected"] == "pass" else f" (expected {r['expected']})"
        return f"{r['status']} {r['criterion']:>2} {r['title']}{note}" + (f"  {r['witness']}" if r["witness"] else "")
    if command == "gallery":
        return f"{r['name']:<22} {r['size_param']:<13} default {r['default']:<3} cap {r['cap']:<4} {r['flags']}"
    return str(r)


# ---------------------------------------------------------------------------
# argument parsing


def _common(p, space=True):
    if space:
        p.add_argument("space", nargs="?", help="gallery space name")
        p.add_argument("--space", dest="space_flag", help="gallery space name")
        for flag in SIZE_FLAGS:
            p.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=int)
        p.add_argument("--window", type=int, help="the space's size bound, whatever its name")
        p.add_argument("--materialize", type=int, help="size of the materialization")
        p.add_argument("--q", type=int, choices=(2, 3))
        p.add_argument("--alphabet")
        p.add_argument("--max-multiplicity", dest="max_multiplicity", type=int)
        p.add_argument("--loops", action="store_true")
        p.add_argument("--cap", type=int, default=DEFAULT_LENGTH_CAP, help="length scan bound")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decompkit", description="Incidence algebras of decomposition spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run axiom checks")
    _common(p)
    p.add_argument("--axioms", default="segal,decomposition,complete",
                   help="comma separated, from: " + ", ".join(MATERIALIZATION_AXIOMS + ORACLE_AXIOMS + MONOIDAL_AXIOMS))
    p.add_argument("--expect", action="append", help="axiom=pass|fail, comma separated")
    p.add_argument("--levels", type=int, default=4, help="levels of the materialization")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("delta", help="comultiplication of one element")
    _common(p)
    p.add_argument("--element", required=True)
    p.add_argument("--terms", action="store_true", help="one row per fiber component instead of per (a, b)")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("mobius", help="Mobius function over the window")
    _common(p)
    p.add_argument("--numeric", action="store_true", help="solve zeta * x = epsilon instead")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("zetapoly", help="zeta polynomial of one element")
    _common(p)
    p.add_argument("--element", required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=5)
    p.set_defaults(func=cmd_zetapoly)

    p = sub.add_parser("series", help="zeta series and its inverse")
    _common(p)
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--invert", action="store_true")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    _common(p, space=False)
    p.add_argument("--criteria", help="comma separated criterion numbers")
    p.add_argument("--expect", action="append", help="criterion=pass|fail, e.g. 14=fail")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("gallery", help="list the gallery")
    p.add_argument("action", choices=("list",))
    _common(p, space=False)
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"decompkit: {exc}", file=sys.stderr)
        return 2
    report = {"schema": SCHEMA, "command": args.command} | report
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
