"""Batch command-line front end.

Every run reads JSON inputs, dispatches to the owning module, and prints a
run report to stdout:

    {"schema_version": 1, "tool_version": ..., "input_hash": ..., "result": ...}

The payload is canonical JSON (sorted keys), so identical inputs produce
byte-identical output; wall-clock timing goes to stderr only.  Exit status is
0 on success, 2 on validation/parse errors, 3 on cap or budget errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .binomial import axiom_suite, ring_from_token
from .csa import (
    CsaHom,
    CsaObject,
    base_change_hom,
    hom_generator,
    model_from_dict,
    weil_restrict_obj,
)
from .errors import ParseError, ToolError, ValidationError
from .groups import FiniteGroup, Subgroup, group_from_table, named_group
from .motives import (
    dimension_identity_check,
    exceptional_collection_report,
    make_context,
    restrict_class,
    stabilizer_coverage,
    weil_restrict_sum,
)
from .orbits import burnside_count, orbits
from .polymaps import certify_degree, compose, pointed

SCHEMA_VERSION = 1


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    started = time.monotonic()
    try:
        result, text = _dispatch(ns)
    except ToolError as err:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "error": {"code": err.code, "message": str(err)},
        }
        print(_canonical(payload), file=sys.stderr)
        return err.exit_status
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "input_hash": _input_hash(ns),
        "result": result,
    }
    if ns.format == "json":
        print(_canonical(report))
    else:
        print(text)
    elapsed = (time.monotonic() - started) * 1000.0
    print(f"elapsed_ms={elapsed:.1f}", file=sys.stderr)
    return 0


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _input_hash(ns) -> str:
    record = {"command": ns.command}
    for key, value in sorted(vars(ns).items()):
        if key in ("command", "func", "format"):
            continue
        record[key] = value
    for key in ("context", "model"):
        path = getattr(ns, key, None)
        if path:
            record[f"{key}_file"] = _load_json(path)
    return hashlib.sha256(_canonical(record).encode("utf-8")).hexdigest()


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(
            f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from err


def _require_schema(doc, path):
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(f"{path} must carry \"schema_version\": {SCHEMA_VERSION}")
    return doc


def _group_from_spec(spec) -> FiniteGroup:
    if "table" in spec:
        return group_from_table(spec["table"])
    if "named" in spec:
        named = spec["named"]
        return named_group(str(named["family"]), int(named["n"]))
    raise ValidationError("group spec needs \"table\" or \"named\"")


def load_context(path):
    doc = _require_schema(_load_json(path), path)
    group = _group_from_spec(doc.get("group", {}))
    members = doc.get("H")
    if members is None:
        raise ValidationError(f"{path} misses the subgroup \"H\"")
    return make_context(
        group,
        Subgroup(group, members),
        names=doc.get("names"),
        field_names=doc.get("field_names"),
    )


def load_model(path):
    doc = _require_schema(_load_json(path), path)
    return model_from_dict(doc)


def _parse_class(s: str):
    return Fraction(s) if "/" in s else int(s)


# --- subcommand handlers -------------------------------------------------


def _cmd_orbits(ns):
    ctx = load_context(ns.context)
    oset = orbits(ctx.group, ctx.cs, ns.n, cap=ns.cap)
    records = [
        {
            "rep": list(o.canonical_rep.values),
            "size": o.size,
            "stab": list(o.stabilizer.members),
            "stab_index": ctx.group.order // o.stabilizer.order,
        }
        for o in oset.orbits
    ]
    result = {
        "n": ns.n,
        "degree": ctx.d,
        "orbit_count": len(records),
        "burnside_count": burnside_count(ctx.group, ctx.cs, ns.n),
        "orbits": records,
    }
    lines = [
        f"orbits of G on (G/H -> {{1..{ns.n}}}), degree {ctx.d}: {len(records)}",
    ]
    for rec in records:
        lines.append(
            f"  rep={tuple(rec['rep'])} size={rec['size']} "
            f"stab={rec['stab']} index={rec['stab_index']}"
        )
    return result, "\n".join(lines)


def _motive_result(ms):
    return {"terms": ms.as_rows(), "display": ms.by_display(), "text": ms.render()}


def _cmd_restrict(ns):
    ctx = load_context(ns.context)
    ms = weil_restrict_sum(ctx, ns.n, cap=ns.cap)
    return _motive_result(ms), ms.render()


def _cmd_restrict_class(ns):
    ctx = load_context(ns.context)
    try:
        m = tuple(int(part) for part in ns.m.split(","))
    except ValueError as err:
        raise ValidationError(f"bad multiplicity vector {ns.m!r}") from err
    ms = restrict_class(ctx, m, cap=ns.cap)
    return _motive_result(ms), ms.render()


def _cmd_coverage(ns):
    ctx = load_context(ns.context)
    res = stabilizer_coverage(ctx, ns.n, cap=ns.cap)
    result = {
        "holds": res.holds,
        "witnesses": [
            {
                "field": w.label.display,
                "subgroup": list(w.label.subgroup_class),
                "degree_over_k": w.label.degree_over_k,
                "alpha_prime": list(w.alpha_prime.values),
                "stabilizer_exact": w.stabilizer_exact,
                "orbit_rep": list(w.orbit_rep),
            }
            for w in res.witnesses
        ],
    }
    lines = [f"coverage: {'ok' if res.holds else 'FAILED'}"]
    for w in res.witnesses:
        lines.append(
            f"  {w.label.display} (degree {w.label.degree_over_k}): "
            f"alpha'={tuple(w.alpha_prime.values)} exact={w.stabilizer_exact}"
        )
    return result, "\n".join(lines)


def _cmd_dimcheck(ns):
    ctx = load_context(ns.context)
    check = dimension_identity_check(ctx, ns.n, cap=ns.cap)
    result = {
        "holds": check.holds,
        "total": check.total,
        "expected": check.expected,
        "rows": [{"rep": list(rep), "index": idx} for rep, idx in check.rows],
    }
    text = (
        f"sum of [G:stab] over orbits = {check.total}, "
        f"n^d = {check.expected}: {'ok' if check.holds else 'FAILED'}"
    )
    return result, text


def _cmd_excoll(ns):
    ctx = load_context(ns.context)
    report = exceptional_collection_report(
        ctx, ns.scheme, ns.n, dim_x=ns.dim_x, cap=ns.cap
    )
    lines = [f"{ns.scheme}: {report.motive_sum.render()}"]
    if report.ambient is not None:
        lines.append(
            "direct summand of twists 0.."
            f"{report.extension_degree * (report.dim_x or 0)} "
            "of the listed Artin motives"
        )
    return report.as_dict(), "\n".join(lines)


def _cmd_polymap(ns):
    cert = _certify_expression(ns.map, ns.degree_bound, ns.box, ns.budget)
    result = dict(cert.as_dict(), map=ns.map)
    text = f"{ns.map}: degree {cert.degree} on box {cert.box}"
    return result, text


def _cmd_binom(ns):
    ring = ring_from_token(ns.ring)
    if ns.axioms:
        report = axiom_suite(ring, samples=ns.samples, seed=ns.seed)
        lines = [f"axiom suite for {ring.descriptor}: seed={ns.seed} samples={ns.samples}"]
        for r in report.results:
            status = "pass" if r.passed else f"FAIL ({r.counterexample})"
            lines.append(f"  ({r.axiom}) {status}")
        return report.as_dict(), "\n".join(lines)
    if ns.x is None or ns.n is None:
        raise ValidationError("binom needs either --axioms or both --x and --n")
    x = ring.element(_parse_class(ns.x))
    value = ring.binom(x, ns.n)
    result = {"ring": ring.descriptor, "x": repr(x), "n": ns.n, "value": repr(value)}
    return result, f"binom({ns.x}, {ns.n}) = {value!r} in {ring.descriptor}"


def _link_for(ns, model, links):
    if not links:
        raise ValidationError("model file declares no maps")
    if ns.to is None:
        if len(links) > 1:
            raise ValidationError(f"pick --to among {sorted(links)}")
        return next(iter(links.values()))
    try:
        return links[ns.to]
    except KeyError:
        raise ValidationError(f"no map to {ns.to!r}; have {sorted(links)}") from None


def _cmd_csa_hom(ns):
    model, _ = load_model(ns.model)
    a = CsaObject(model, _parse_class(ns.class_a), ns.deg_a or model.index_of(_parse_class(ns.class_a)))
    b = CsaObject(model, _parse_class(ns.class_b), ns.deg_b or model.index_of(_parse_class(ns.class_b)))
    gen = hom_generator(a, b)
    result = {"generator": gen}
    if ns.multiple is not None:
        hom = CsaHom(a, b, ns.multiple)
        result["multiple"] = hom.multiple
        result["value"] = hom.value
    return result, f"Hom(U(A), U(B)) = {gen}*Z"


def _cmd_csa_restrict(ns):
    model, links = load_model(ns.model)
    link = _link_for(ns, model, links)
    ctx = load_context(ns.context)
    cls = _parse_class(getattr(ns, "class"))
    degree = ns.degree or link.l_model.index_of(cls)
    obj = CsaObject(link.l_model, cls, degree)
    out = weil_restrict_obj(ctx, obj, link)
    result = {
        "field": out.model.field,
        "class": str(out.brauer_class),
        "degree": out.degree,
        "index": out.index,
    }
    return result, f"restricted object: class {out.brauer_class}, degree {out.degree}"


def _cmd_csa_basechange(ns):
    model, links = load_model(ns.model)
    link = _link_for(ns, model, links)
    a = CsaObject(model, _parse_class(ns.class_a), ns.deg_a or model.index_of(_parse_class(ns.class_a)))
    b = CsaObject(model, _parse_class(ns.class_b), ns.deg_b or model.index_of(_parse_class(ns.class_b)))
    f = CsaHom(a, b, ns.multiple)
    out = base_change_hom(f, link)
    result = {
        "value": out.value,
        "generator": out.generator,
        "multiple": out.multiple,
        "field": out.source.model.field,
    }
    return result, f"base change keeps the value {out.value}; new generator {out.generator}"


_BUILTIN_MAPS = {
    "power": lambda args: _power_map(int(args[0]) if args else 1),
    "id": lambda args: _power_map(1),
    "scale": lambda args: _scale_map(int(args[0]) if args else 1),
    "mul": lambda args: _product_map(int(args[0]) if args else 2),
    "zero": lambda args: _zero_map(int(args[0]) if args else 1),
}


def _power_map(d):
    if d < 0:
        raise ValidationError("power exponent must be >= 0")
    return pointed(1, 1, lambda x: (x[0] ** d,), name=f"power:{d}")


def _scale_map(c):
    return pointed(1, 1, lambda x: (c * x[0],), name=f"scale:{c}")


def _product_map(t):
    if t < 1:
        raise ValidationError("mul needs at least one factor")

    def fn(x):
        out = 1
        for v in x:
            out *= v
        return (out,)

    return pointed(t, 1, fn, name=f"mul:{t}")


def _zero_map(r):
    return pointed(r, 1, lambda x: (0,), name=f"zero:{r}")


def _parse_map_expression(text: str):
    text = text.strip()
    if text.startswith("compose(") and text.endswith(")"):
        inner = text[len("compose(") : -1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return ("compose", inner[:i], inner[i + 1 :])
        raise ParseError(f"compose expression needs two arguments: {text!r}")
    name, _, argstr = text.partition(":")
    if name not in _BUILTIN_MAPS:
        raise ParseError(f"unknown map {name!r}; builtins: {sorted(_BUILTIN_MAPS)}")
    args = argstr.split(":") if argstr else []
    return ("leaf", name, args)


def _certify_expression(text, degree_bound, box, budget):
    node = _parse_map_expression(text)
    if node[0] == "compose":
        first = _certify_expression(node[1], degree_bound, box, budget)
        second = _certify_expression(node[2], degree_bound, box, budget)
        return compose(first, second, budget=budget)
    _, name, args = node
    try:
        mapping = _BUILTIN_MAPS[name](args)
    except (ValueError, IndexError) as err:
        raise ParseError(f"bad arguments for {name}: {err}") from err
    return certify_degree(mapping, degree_bound, box, budget=budget)


# --- parser ---------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weilrest",
        description="Exact Weil-restriction decompositions from finite Galois data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, context=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        if context:
            p.add_argument("--context", required=True, help="context JSON file")
            p.add_argument("--cap", type=int, default=10**7, help="enumeration cap")

    p = sub.add_parser("orbits", help="orbit records for G on G/H -> {1..n}")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("restrict", help="decomposition of the n-fold split object")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_restrict)

    p = sub.add_parser("restrict-class", help="degree-d image of a class vector")
    common(p)
    p.add_argument("--m", required=True, help="comma-separated multiplicities")
    p.set_defaults(func=_cmd_restrict_class)

    p = sub.add_parser("coverage", help="stabilizer coverage of intermediate fields")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("dimcheck", help="sum of [G:stab] against n^d")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_dimcheck)

    p = sub.add_parser("excoll", help="exceptional-collection decomposition report")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scheme", default="X")
    p.add_argument("--dim-x", type=int, default=None)
    p.set_defaults(func=_cmd_excoll)

    p = sub.add_parser("polymap", help="certify a built-in or composed map")
    common(p, context=False)
    p.add_argument("--map", required=True, help="e.g. power:3 or compose(power:2,power:2)")
    p.add_argument("--degree-bound", type=int, default=8)
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(func=_cmd_polymap)

    p = sub.add_parser("binom", help="binomial-ring value or axiom suite")
    common(p, context=False)
    p.add_argument("--ring", required=True, help="z | q | zinv:R | zp:P:K[:GUARD]")
    p.add_argument("--x", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--axioms", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_binom)

    p = sub.add_parser("csa", help="central-simple-algebra hom bookkeeping")
    csasub = p.add_subparsers(dest="csa_command", required=True)

    q = csasub.add_parser("hom", help="hom generator between two objects")
    common(q, context=False)
    q.add_argument("--model", required=True, help="model JSON file")
    q.add_argument("--class-a", required=True)
    q.add_argument("--class-b", required=True)
    q.add_argument("--deg-a", type=int, default=None)
    q.add_argument("--deg-b", type=int, default=None)
    q.add_argument("--multiple", type=int, default=None)
    q.set_defaults(func=_cmd_csa_hom, command="csa hom")

    q = csasub.add_parser("restrict", help="Weil restriction of a division object")
    common(q, context=True)
    q.add_argument("--model", required=True, help="base model JSON file with maps")
    q.add_argument("--to", default=None, help="target field of the declared map")
    q.add_argument("--class", required=True)
    q.add_argument("--degree", type=int, default=None)
    q.set_defaults(func=_cmd_csa_restrict, command="csa restrict")

    q = csasub.add_parser("basechange", help="include a hom along restriction")
    common(q, context=False)
    q.add_argument("--model", required=True, help="base model JSON file with maps")
    q.add_argument("--to", default=None)
    q.add_argument("--class-a", required=True)
    q.add_argument("--class-b", required=True)
    q.add_argument("--deg-a", type=int, default=None)
    q.add_argument("--deg-b", type=int, default=None)
    q.add_argument("--multiple", type=int, required=True)
    q.set_defaults(func=_cmd_csa_basechange, command="csa basechange")

    return parser


def _dispatch(ns):
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
