"""Command-line entry point ``sa``.

Every command builds one report dictionary with the keys ``command``,
``config``, ``findings``, ``tables`` and ``witnesses`` and renders it as
text, JSON or CSV.  Exit status is 0 on success, 1 when the run produced a
finding (a collapse, a failed check, a non-flat comparison) and 2 on usage
errors.
"""

import argparse
import contextlib
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__, bialgebra, oracle, repmod, weyl
from .errors import ShapeAlgError
from .freealg import parse_expr
from .presentations import (
    builtin,
    catalog_names,
    load_presentation,
    specialize_q,
    validate_grading,
)
from .rewrite import complete, count_irreducible, reduce

__all__ = ["main", "build_parser", "dispatch", "run_to_string"]

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return n


def _nonneg_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{text} must be nonnegative")
    return n


def _q_value(text):
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number") from None
    if r == 0:
        raise argparse.ArgumentTypeError("q-value must be nonzero")
    return r


def _pair(text):
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not of the form i,j") from None
    if i not in (1, 2) or j not in (1, 2):
        raise argparse.ArgumentTypeError("i and j must be 1 or 2")
    return i, j


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_const", const="json", dest="format",
                     help="emit the JSON report")
    out.add_argument("--csv", action="store_const", const="csv", dest="format",
                     help="emit the report tables as CSV")
    out.add_argument("--format", choices=("text", "json", "csv"), dest="format")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")
    common.add_argument("--q-value", type=_q_value, default=None, metavar="a/b",
                        help="specialize q to this nonzero rational")

    parser = argparse.ArgumentParser(
        prog="sa", description="Shape algebras of SL(3) and its subgroups G1, G0.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def pres_args(p, optional=False):
        p.add_argument("name", nargs="?" if optional else None,
                       help="catalog presentation (" + ", ".join(catalog_names()) + ")")
        p.add_argument("--file", help="load a presentation file instead of a catalog entry")

    p = sub.add_parser("present", parents=[common], help="show a presentation")
    pres_args(p, optional=True)

    p = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    pres_args(p, optional=True)
    p.add_argument("--expr", required=True, help="expression to reduce")
    p.add_argument("--max-deg", type=_positive_int, default=None,
                   help="completion bound (default: degree of the input, at least that of the relations)")

    p = sub.add_parser("complete", parents=[common], help="bounded completion")
    pres_args(p, optional=True)
    p.add_argument("--max-deg", type=_positive_int, default=4)

    p = sub.add_parser("hilbert", parents=[common], help="irreducible-word counts")
    pres_args(p, optional=True)
    p.add_argument("--max-deg", type=_positive_int, default=4)
    p.add_argument("--by", choices=("multidegree", "length"), default="multidegree")
    p.add_argument("--oracle", action="store_true",
                   help="compare with the commutative rank oracle (classical presentations)")
    p.add_argument("--max-len", type=_nonneg_int, default=None,
                   help="length bound for the filtered oracle (default: --max-deg)")
    p.add_argument("--slack", type=_nonneg_int, default=2,
                   help="extra degree for completion and for the filtered oracle when "
                        "relations are inhomogeneous")

    p = sub.add_parser("flatness", parents=[common], help="compare classical and quantum counts")
    p.add_argument("classical")
    p.add_argument("quantum")
    p.add_argument("--max-deg", type=_positive_int, default=4)
    p.add_argument("--by", choices=("multidegree", "length"), default="multidegree")
    p.add_argument("--slack", type=_nonneg_int, default=2,
                   help="extra completion degree for presentations with inhomogeneous relations")

    p = sub.add_parser("orthocells", parents=[common], help="orthocells and effectiveness")
    p.add_argument("--ij", type=_pair, default=None, metavar="i,j")

    p = sub.add_parser("modules", parents=[common], help="module identities")
    p.add_argument("--check", choices=("relations", "span", "r12", "golden", "supplements", "all"),
                   default="all")

    p = sub.add_parser("lemma1", parents=[common], help="sub-bialgebra check")
    p.add_argument("--matrix-check", action="store_true",
                   help="corroborate with matrices on V1 (+) V2 at q = --q-value (default 3/2)")

    p = sub.add_parser("report", parents=[common], help="run every acceptance check")
    p.add_argument("--only", type=_positive_int, action="append", default=None,
                   metavar="N", help="run only criterion N (repeatable)")
    return parser


# ---------------------------------------------------------------------------
# helpers


def _report(args, **config):
    cfg = {"command": args.command}
    for k in ("name", "file", "q_value", "seed"):
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = str(v) if isinstance(v, Fraction) else v
    cfg.update(config)
    return {"command": args.command, "config": cfg, "findings": [], "tables": [],
            "witnesses": [], "text": []}


def _presentation(args, name=None):
    name = name if name is not None else getattr(args, "name", None)
    path = getattr(args, "file", None)
    if path and name:
        raise UsageError("give a presentation name or --file, not both")
    if path:
        pres = load_presentation(path)
    elif name:
        pres = builtin(name)
    else:
        raise UsageError("a presentation name or --file is required")
    if args.q_value is not None:
        pres = specialize_q(pres, args.q_value)
    return pres


def _fmt_table(rows, columns=None):
    if not rows:
        return ["(empty)"]
    columns = columns or list(rows[0])
    cells = [[str(c) for c in columns]]
    for r in rows:
        cells.append([_cell(r.get(c, "")) for c in columns])
    widths = [max(len(row[k]) for row in cells) for k in range(len(columns))]
    return ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]


def _cell(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return ",".join(map(str, v))
    return str(v)


def _count_rows(counts, selector):
    rows = []
    for k, v in counts.items():
        row = {"n1": k[0], "n2": k[1]} if selector == "multidegree" else {"length": k}
        row["count"] = v
        rows.append(row)
    return rows


def _collapse_finding(rep, res):
    if rep.collapse is None:
        return False
    res["findings"].append({"kind": "collapse", "collapse_kind": rep.collapse["kind"],
                            "rule": rep.collapse["rule"]})
    res["witnesses"].append(rep.collapse)
    res["text"].append(f"collapse ({rep.collapse['kind']}): {rep.collapse['rule']}")
    for st in rep.collapse["chain"]:
        src = st.get("word") or st.get("relation")
        res["text"].append(f"  [{st['rid']}] {st['kind']} {src}: {st['reduced']}  =>  {st['result']}")
    return True


# ---------------------------------------------------------------------------
# commands


def cmd_present(args):
    pres = _presentation(args)
    res = _report(args, presentation=pres.name)
    gens = [{"generator": g, "grading": list(d)} for g, d in zip(pres.gens.names, pres.gens.grading)]
    grading = validate_grading(pres)
    rows = []
    for entry, note in zip(grading["relations"], pres.notes):
        rows.append({"index": entry["index"], "relation": entry["relation"],
                     "grading": entry["status"], "note": note})
    res["tables"] += [{"name": "generators", "selector": "generator", "rows": gens},
                      {"name": "relations", "selector": "index", "rows": rows}]
    res["text"].append(f"{pres.name}: {len(pres.gens)} generators, {len(pres.relations)} relations")
    res["text"].append("generators: " + " ".join(
        f"{g['generator']}({g['grading'][0]},{g['grading'][1]})" for g in gens))
    for r in rows:
        flag = "" if r["grading"] == "homogeneous" else f" [{r['grading']}]"
        res["text"].append(f"  [{r['index']:2d}] {r['relation']}{flag}    # {r['note']}")
    for v in grading["violations"]:
        res["findings"].append({"kind": "inhomogeneous relation", "index": v["index"],
                                "relation": v["relation"]})
    return res, EXIT_FINDING if res["findings"] else EXIT_OK


def cmd_nf(args):
    pres = _presentation(args)
    try:
        poly = parse_expr(args.expr, pres.gens)
    except ShapeAlgError as e:
        raise UsageError(f"cannot parse --expr: {e}") from None
    rel_deg = max((r.degree() for r in pres.relations), default=1)
    bound = args.max_deg or max(poly.degree(), rel_deg, 1)
    res = _report(args, presentation=pres.name, expr=args.expr, max_deg=bound)
    rep = complete(pres, bound)
    status = EXIT_OK
    if _collapse_finding(rep, res):
        status = EXIT_FINDING
    nf, factor = reduce(poly, rep, return_factor=True)
    alt, alt_factor = reduce(poly, rep, strategy="random", seed=args.seed, return_factor=True)
    agree = (nf.scale(alt_factor) - alt.scale(factor)).is_zero()
    res["tables"].append({"name": "normal form", "selector": "expr", "rows": [
        {"expr": args.expr, "normal_form": nf.format(), "factor": str(factor),
         "strategies_agree": agree}]})
    if not agree:
        res["findings"].append({"kind": "strategy disagreement", "greedy": nf.format(),
                                "random": alt.format(), "seed": args.seed})
        status = EXIT_FINDING
    res["text"].insert(0, nf.format())
    if str(factor) != "1":
        res["text"].append(f"(normal form of ({factor}) * input)")
    return res, status


def cmd_complete(args):
    pres = _presentation(args)
    res = _report(args, presentation=pres.name, max_deg=args.max_deg)
    rep = complete(pres, args.max_deg)
    js = rep.to_json()
    res["tables"].append({"name": "rules", "selector": "rule",
                          "rows": [{"rule": r} for r in js["rules"]]})
    res["tables"].append({"name": "new rules", "selector": "degree",
                          "rows": [{"degree": int(k), "count": v} for k, v in js["new_rules"].items()]})
    res["text"].append(
        f"{pres.name}: {len(rep.rules)} rules at bound {rep.bound}, "
        f"{rep.ambiguities} ambiguities, {rep.resolved} resolved, "
        f"confluent={'yes' if rep.confluent else 'no'}, "
        f"stabilized={'yes' if rep.stabilized else 'no'}")
    res["text"] += [f"  {r}" for r in js["rules"]]
    status = EXIT_FINDING if _collapse_finding(rep, res) else EXIT_OK
    return res, status


def _counts_for(pres, bound, by, res, slack=2):
    # relations such as t*q3 - 1 shorten words: complete past the bound
    rep = complete(pres, bound + (slack if pres.inhomogeneous else 0))
    if not rep.confluent:
        _collapse_finding(rep, res)
        return None
    if rep.collapse is not None:
        _collapse_finding(rep, res)
    return count_irreducible(rep, by, bound=bound)


def cmd_hilbert(args):
    pres = _presentation(args)
    res = _report(args, presentation=pres.name, max_deg=args.max_deg, by=args.by)
    counts = _counts_for(pres, args.max_deg, args.by, res, args.slack)
    if counts is None:
        res["text"].append("no counts: completion collapsed")
        return res, EXIT_FINDING
    rows = _count_rows(counts, args.by)
    res["tables"].append({"name": "irreducible words", "selector": args.by, "rows": rows})
    res["text"] += _fmt_table(rows)
    status = EXIT_FINDING if res["findings"] else EXIT_OK
    if args.oracle:
        status = max(status, _oracle_compare(args, pres, counts, res))
    return res, status


def _oracle_compare(args, pres, counts, res):
    if not pres.is_classical():
        raise UsageError("--oracle needs a classical presentation (or --q-value 1)")
    if pres.inhomogeneous or args.by == "length":
        L = args.max_len if args.max_len is not None else args.max_deg
        table = oracle.filtered_localized_counts(pres, L, args.slack)
        per_len = count_irreducible(complete(pres, L + args.slack), "length", bound=L)
        mine = oracle.cumulative(oracle.table_from_counts("length", per_len))
    else:
        table = oracle.commutative_dims(pres, args.max_deg)
        mine = oracle.table_from_counts("multidegree", counts)
    res["tables"].append(dict(table.to_json(), name="oracle"))
    diffs = oracle.compare(mine, table)
    unstable = [k for k, v in table.stable.items() if not v]
    for d in diffs:
        res["findings"].append({"kind": "oracle mismatch", "key": str(d["key"]),
                                "rewrite": d["a"], "oracle": d["b"]})
    res["text"].append("oracle: " + ("agrees" if not diffs else f"{len(diffs)} rows differ")
                       + (f", unstable rows {unstable}" if unstable else ""))
    return EXIT_FINDING if diffs else EXIT_OK


def cmd_flatness(args):
    res = _report(args, classical=args.classical, quantum=args.quantum,
                  max_deg=args.max_deg, by=args.by)
    a = _counts_for(_presentation(args, args.classical), args.max_deg, args.by, res, args.slack)
    b = _counts_for(_presentation(args, args.quantum), args.max_deg, args.by, res, args.slack)
    if a is None or b is None:
        res["text"].append("comparison refused: a completion collapsed")
        return res, EXIT_FINDING
    rows = []
    for k in sorted(set(a) | set(b)):
        row = _count_rows({k: a.get(k)}, args.by)[0]
        row["classical"] = row.pop("count")
        row["quantum"] = b.get(k)
        rows.append(row)
    diffs = [r for r in rows if r["classical"] != r["quantum"]]
    res["tables"].append({"name": "flatness", "selector": args.by, "rows": rows})
    res["findings"] += [dict(r, kind="not flat") for r in diffs]
    res["text"] += _fmt_table(rows)
    res["text"].append("flat" if not diffs and not res["findings"] else
                       f"not flat: {len(diffs)} rows differ")
    return res, EXIT_FINDING if res["findings"] else EXIT_OK


def cmd_orthocells(args):
    pairs = [args.ij] if args.ij else [(1, 1), (2, 2), (1, 2), (2, 1)]
    res = _report(args, ij=[f"{i},{j}" for i, j in pairs])
    cells = weyl.enumerate_orthocells()
    sels = {ij: repmod.effective_selection(*ij) for ij in pairs}
    rows = []
    for c in cells:
        row = {"cell": c.name, "members": [str(w) for w in c.sorted_members()],
               "reflection": f"s{c.A[0]}" if c.A else "", "side": c.side if c.A else "",
               "trivial": c.trivial}
        for ij in pairs:
            tag = f"{ij[0]}{ij[1]}"
            wt = repmod.weight_of(repmod.build_e_c(*ij, c))
            row[f"weight_{tag}"] = str(wt)
            row[f"effective_{tag}"] = c.name in sels[ij]["effective"]
        rows.append(row)
    res["tables"].append({"name": "orthocells", "selector": "cell", "rows": rows})
    res["text"].append(f"{len(cells)} small orthocells, {sum(c.trivial for c in cells)} trivial")
    res["text"] += _fmt_table(rows)
    for ij, sel in sels.items():
        res["text"].append(
            f"{ij[0]}{ij[1]}: {sel['distinct_vectors']} distinct vectors, rank {sel['rank']}, "
            f"expected {sel['expected_dim']}, nontrivial kept {','.join(sel['nontrivial']) or '-'}"
            + ("" if sel["agrees_with_printed"] else
               f" (printed list {','.join(sel['printed_keep_list'])})"))
        if sel["rank"] != sel["expected_dim"]:
            res["findings"].append({"kind": "rank", "ij": f"{ij[0]}{ij[1]}", "rank": sel["rank"]})
    return res, EXIT_FINDING if res["findings"] else EXIT_OK


def cmd_modules(args):
    checks = ["relations", "span", "r12", "golden", "supplements"] if args.check == "all" else [args.check]
    res = _report(args, check=args.check)
    r = args.q_value
    for check in checks:
        rows = _MODULE_CHECKS[check](r)
        res["tables"].append({"name": check, "selector": "check", "rows": rows})
        bad = [x for x in rows if not x["pass"]]
        res["findings"] += [dict(x, kind=f"{check} failure") for x in bad]
        res["text"].append(f"{check}: {len(rows) - len(bad)}/{len(rows)} pass")
        for x in bad:
            res["text"].append(f"  FAIL {x['check']}: {x.get('defect', '')}")
    return res, EXIT_FINDING if res["findings"] else EXIT_OK


def _check_relations(r):
    uq = builtin("uq_sl3")
    g1 = builtin("uq_g1")
    mods = [("V1", repmod.V1(), uq), ("V2", repmod.V2(), uq), ("V-1", repmod.Vm1(), g1),
            ("V1(x)V2", repmod.tensor_pair(1, 2), uq), ("V1(x)V1", repmod.tensor_pair(1, 1), uq),
            ("V2(x)V2", repmod.tensor_pair(2, 2), uq)]
    rows = []
    for label, mod, pres in mods:
        if r is not None:
            mod = mod.specialize(r)
        res = repmod.relation_check(mod, pres)
        bad = [x for x in res if not x["zero"]]
        rows.append({"check": f"{pres.name} on {label}", "pass": not bad,
                     "defect": "; ".join(f"{x['relation']}: {x['defect']}" for x in bad)})
    return rows


def _check_span(r):
    from .linalg import SAMPLE_POINTS

    rows = []
    for ij in ((1, 1), (2, 2), (1, 2), (2, 1)):
        sel = repmod.effective_selection(*ij)
        vecs = [repmod.build_e_c(*ij, n) for n in sel["effective"]]
        rank, at = repmod.rank_cross_check(vecs, points=(r,) if r is not None else SAMPLE_POINTS)
        ok = sel["independent"] and rank == sel["expected_dim"] == sel["submodule_dim"]
        ok = ok and all(v == rank for v in at.values())
        rows.append({"check": f"V^{ij[0]}{ij[1]}", "pass": ok, "rank": rank,
                     "expected": sel["expected_dim"],
                     "point_ranks": ",".join(f"{k}:{v}" for k, v in at.items())})
    return rows


def _check_r12(r):
    R = repmod.intertwiner_r12()
    rows = [{"check": f"R(e12_{x['cell']}) = e21_{x['cell']}", "pass": x["holds"],
             "defect": "" if x["holds"] else f"{x['image']} != {x['expected']}"}
            for x in R.checks]
    rows.append({"check": "commutes with every generator", "pass": R.commutation_defect() == 0,
                 "defect": ""})
    rows.append({"check": "one-parameter solution on V^12", "pass": R.restricted_dimension == 1,
                 "defect": f"dimension {R.restricted_dimension}"})
    return rows


def _check_golden(r):
    return [{"check": g["key"], "pass": g["match"],
             "defect": "" if g["match"] else
             f"printed {g['printed']} equals cell(s) {','.join(g['matches_cells']) or 'none'}"}
            for g in repmod.golden_check()]


def _check_supplements(r):
    rows = []
    for ij in ((1, 1), (2, 2), (1, 2), (2, 1)):
        d = repmod.direct_sum_check(*ij)
        plain = repmod.direct_sum_check(*ij, opposite=False)
        rows.append({"check": f"printed supplement of V^{ij[0]}{ij[1]}",
                     "pass": d["direct"] and d["supplement_invariant"],
                     "defect": "" if d["supplement_invariant"] else
                     "not invariant (invariant under the plain coproduct: "
                     f"{'yes' if plain['supplement_invariant'] else 'no'})"})
        d = repmod.direct_sum_check(*ij, which="derived")
        rows.append({"check": f"invariant complement of V^{ij[0]}{ij[1]}",
                     "pass": d["direct"] and d["supplement_invariant"],
                     "defect": "; ".join(d["supplement"])})
    return rows


_MODULE_CHECKS = {
    "relations": _check_relations,
    "span": _check_span,
    "r12": _check_r12,
    "golden": _check_golden,
    "supplements": _check_supplements,
}


def cmd_lemma1(args):
    res = _report(args, matrix_check=args.matrix_check)
    rows = []
    for label, gens in (("uq_g1", bialgebra.UQ_G1_SYMBOLS), ("uq_g0", bialgebra.UQ_G0_SYMBOLS)):
        chk = bialgebra.sub_bialgebra_check(gens)
        rows.append({"algebra": label, "generators": list(gens), "pass": chk["pass"],
                     "witness": ["{}:{}".format(*w) for w in chk["witnesses"]]})
        for g, s in chk["witnesses"]:
            res["witnesses"].append({"algebra": label, "generator": g, "factor": s,
                                     "coproduct": chk["coproducts"][g]})
            res["findings"].append({"kind": "not a sub-bialgebra", "algebra": label,
                                    "generator": g, "factor": s})
    res["tables"].append({"name": "sub-bialgebra", "selector": "algebra", "rows": rows})
    res["text"] += _fmt_table(rows)
    for w in res["witnesses"]:
        res["text"].append(f"{w['algebra']}: Delta({w['generator']}) = {w['coproduct']} "
                           f"uses {w['factor']}")
    if args.matrix_check:
        r = args.q_value if args.q_value is not None else Fraction(3, 2)
        mrows = []
        for label, gens in (("uq_g1", bialgebra.UQ_G1_SYMBOLS), ("uq_g0", bialgebra.UQ_G0_SYMBOLS)):
            for target in ("K2", "K2inv"):
                member, dim = bialgebra.matrix_membership_check(target, gens, r=r)
                mrows.append({"algebra": label, "target": target, "q": str(r),
                              "member": member, "algebra_dim": dim})
        res["tables"].append({"name": "matrix check", "selector": "algebra", "rows": mrows})
        res["text"].append(f"matrix check on V1 (+) V2 at q = {r}:")
        res["text"] += _fmt_table(mrows)
    return res, EXIT_FINDING if res["findings"] else EXIT_OK


def cmd_report(args):
    from .report import run_all

    crits = run_all(args.only)
    res = _report(args, criteria=[c.number for c in crits])
    for c in crits:
        res["text"].append(c.line())
        res["text"] += [f"    note: {x}" for x in c.info]
        for t in c.tables:
            res["tables"].append(dict(t, name=f"criterion {c.number}: {t['name']}"))
        res["findings"] += [dict(f, criterion=c.number) for f in c.findings]
        res["witnesses"] += [{"criterion": c.number, "witness": w} for w in c.witnesses]
    res["tables"].insert(0, {"name": "criteria", "selector": "criterion", "rows": [
        {"criterion": c.number, "title": c.title, "passed": c.passed, "summary": c.summary}
        for c in crits]})
    failed = [c.number for c in crits if not c.passed]
    res["text"].append(f"{len(crits) - len(failed)}/{len(crits)} criteria pass"
                       + (f"; failing: {failed}" if failed else ""))
    return res, EXIT_FINDING if failed else EXIT_OK


COMMANDS = {
    "present": cmd_present,
    "nf": cmd_nf,
    "complete": cmd_complete,
    "hilbert": cmd_hilbert,
    "flatness": cmd_flatness,
    "orthocells": cmd_orthocells,
    "modules": cmd_modules,
    "lemma1": cmd_lemma1,
    "report": cmd_report,
}


# ---------------------------------------------------------------------------
# rendering


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def render(res, fmt):
    if fmt == "json":
        body = {k: res[k] for k in ("command", "config", "findings", "tables", "witnesses")}
        return json.dumps(_jsonable(body), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k, t in enumerate(res["tables"]):
            if k:
                buf.write("\n")
            if len(res["tables"]) > 1:
                buf.write(f"# {t['name']}\n")
            cols = []
            for row in t["rows"]:
                cols += [c for c in row if c not in cols]
            w.writerow(cols)
            for row in t["rows"]:
                w.writerow([_cell(row.get(c, "")) for c in cols])
        return buf.getvalue()
    return "\n".join(res["text"]) + "\n"


def dispatch(args, stdout=None):
    """Run a parsed command; returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        res, status = COMMANDS[args.command](args)
    except (UsageError, ShapeAlgError, OSError) as e:
        print(f"sa {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(render(res, args.format or "text"))
    return status


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return dispatch(args)


def run_to_string(argv):
    """Run the CLI in-process; returns ``(exit status, stdout text)``."""
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        status = main(list(argv))
    return status, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
