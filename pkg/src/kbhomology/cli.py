"""Command-line front end (``kbh``)."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .bracket import kauffman_bracket, kauffman_f, unnormalized_bracket
from .catalog import NAMES, builtin
from .diagram import LinkDiagram, OrientedDiagram, from_braid, orient, parse_braid, parse_pd
from .errors import KBHError, NotAComplex, PDError, UnknownName
from .framedcube import build_framed_complex, framed_homology
from .khovanov import build_khovanov_complex, khovanov_homology, teo1_compare
from .oriented import (
    euler_consistency,
    mod4_vanishing_check,
    odd_vanishing_check,
    oriented_complex,
    oriented_homology,
    tabulated_note,
)
from .twocomplex import euler_char, verify_complex
from .verify import ALL_CHECKS, run_suite

SCHEMA_VERSION = 1


def _load(args) -> tuple[OrientedDiagram | None, LinkDiagram, str | None, str]:
    """Returns ``(oriented or None, diagram, name, orientation note)``."""
    given = [v for v in (args.name, args.pd, args.braid) if v is not None]
    if len(given) != 1:
        raise PDError("give exactly one of --name, --pd, --braid")
    if args.name is not None:
        od = builtin(args.name)
        return od, od.diagram, args.name, "catalog"
    if args.braid is not None:
        word, strands = parse_braid(args.braid)
        od = from_braid(word, strands)
        return od, od.diagram, None, "braid"
    d = parse_pd(args.pd)
    od = orient(d, {(c, 0) for c in range(d.n)})
    if od.diagram == d:
        return od, d, None, "as given"
    return orient(d), d, None, "chosen"


def _diagram_echo(od, d, name, orientation):
    out = {"pd": d.to_pd(), "n": d.n, "free_loops": d.free_loops, "edge_count": d.edge_count,
           "orientation": orientation}
    if name is not None:
        out["name"] = name
    if od is not None:
        out.update({"writhe": od.writhe, "n_plus": od.n_plus, "n_minus": od.n_minus,
                    "components": od.components})
        if orientation == "chosen":
            out["oriented_pd"] = od.to_pd()
    return out


def _table(hom, key_name: str):
    rows = []
    for (i, j), g in hom:
        rows.append({key_name: i, "degree": j, "rank": g.rank, "torsion": list(g.torsion)})
    return rows


def _format_table(rows, key_name: str, prefix: str, corner: str) -> str:
    if not rows:
        return "  (all groups vanish)"
    degrees = sorted({r["degree"] for r in rows})
    keys = sorted({r[key_name] for r in rows}, reverse=True)
    cell = {(r[key_name], r["degree"]): r for r in rows}

    def show(r):
        if r is None:
            return "0"
        parts = []
        if r["rank"]:
            parts.append("Z" if r["rank"] == 1 else f"Z^{r['rank']}")
        counts = {}
        for t in r["torsion"]:
            counts[t] = counts.get(t, 0) + 1
        for t, k in sorted(counts.items()):
            parts.append(f"Z_{t}" if k == 1 else f"Z_{t}^{k}")
        return "+".join(parts)

    header = [corner] + [str(j) for j in degrees]
    body = [[f"{prefix}{k}"] + [show(cell.get((k, j))) for j in degrees] for k in keys]
    widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
    lines = ["  " + "  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in [header] + body]
    return "\n".join(lines)


def _cmd_bracket(args, od, d, report):
    report["bracket"] = {"normalized": str(kauffman_bracket(d)) if d else None,
                         "unnormalized": str(unnormalized_bracket(d))}
    if od is not None:
        report["bracket"]["f_hat"] = str(kauffman_f(od))
    lines = [f"bracket: {report['bracket']['normalized']}",
             f"unnormalized: {report['bracket']['unnormalized']}"]
    if od is not None:
        lines.append(f"f_hat: {report['bracket']['f_hat']}")
    return lines


def _check_complex(x):
    if not verify_complex(x):
        raise NotAComplex("constructed differentials do not square to zero")


def _cmd_framed(args, od, d, report):
    _check_complex(build_framed_complex(d))
    hom = framed_homology(d, args.threads)
    rows = _table(hom, "parity")
    poly = hom.poincare()
    report["homology"] = rows
    report["poincare"] = str(poly)
    report["euler_characteristic"] = str(hom.euler_char())
    report["bracket"] = {"unnormalized": str(unnormalized_bracket(d))}
    if od is not None:
        note = tabulated_note(report["diagram"].get("name", ""), poly, kauffman_f(od))
        if note:
            report["notes"].append(note)
    lines = ["framed homology H^F_{i,j}:", _format_table(rows, "parity", "H_", "i\\j"), f"FKh: {poly}"]
    lines += [f"note: {n['kind']}: tabulated {n['tabulated']} has Euler characteristic "
              f"{n['tabulated_euler']}, expected {n['expected_euler']}" for n in report["notes"]]
    return lines


def _cmd_oriented(args, od, d, report):
    x = oriented_complex(od)
    _check_complex(x)
    hom = oriented_homology(od, args.threads)
    rows = _table(hom, "parity")
    f_hat = kauffman_f(od)
    chi = euler_char(x)
    report["homology"] = rows
    report["poincare"] = str(hom.poincare())
    report["euler_characteristic"] = str(chi)
    report["bracket"] = {"unnormalized": str(unnormalized_bracket(d)), "f_hat": str(f_hat)}
    report["checks"] = {
        "euler_equals_f_hat": chi == f_hat and euler_consistency(hom.poincare(), f_hat),
        "odd_degrees_vanish": odd_vanishing_check(od),
        "mod4_vanishing": mod4_vanishing_check(od, hom),
    }
    lines = ["oriented homology:", _format_table(rows, "parity", "H_", "i\\j"),
             f"Poincare: {report['poincare']}", f"euler characteristic: {chi}", f"f_hat: {f_hat}"]
    lines += [f"{k}: {'ok' if v else 'FAILED'}" for k, v in report["checks"].items()]
    if not all(report["checks"].values()):
        report["mismatch"] = "an oriented-invariant check failed"
    return lines


def _cmd_khovanov(args, od, d, report):
    cx = build_khovanov_complex(od)
    if not cx.is_complex():
        raise NotAComplex("Khovanov differentials do not square to zero")
    kh = khovanov_homology(od)
    rows = _table(kh, "k")
    report["homology"] = rows
    report["poincare"] = str(kh.poincare())
    return ["Khovanov homology H^{k,q}:", _format_table(rows, "k", "H^", "k\\q"), f"Kh: {kh.poincare()}"]


def _cmd_compare(args, od, d, report):
    rep = teo1_compare(od, oriented_homology(od, args.threads))
    report["comparison"] = {
        "parity_offset": rep.parity_offset,
        "components": rep.components,
        "match": rep.match,
        "regrouped_match": rep.regrouped_match,
        "mod4_form_match": rep.mod4_form_match,
        "rows": list(rep.rows),
    }
    lines = [f"n_+ + |s_A| = {rep.parity_offset}, components = {rep.components}"]
    for r in rep.rows:
        flag = "ok" if r["match"] and r["mod4_match"] else "MISMATCH"
        lines.append(f"  (i={r['parity']}, j={r['degree']}): oriented {r['oriented']}"
                     f" | regrouped {r['khovanov']} | mod-4 form {r['khovanov_mod4']}  {flag}")
    lines.append("match" if rep.match else "MISMATCH")
    if not rep.match:
        report["mismatch"] = "regrouped Khovanov homology differs from the oriented invariant"
    return lines


def _cmd_verify(args, report):
    checks = [c.strip().lower() for c in args.moves.split(",") if c.strip()]
    expanded = []
    for c in checks:
        expanded += ["r1+", "r1-"] if c == "r1" else [c]
    bad = [c for c in expanded if c not in ALL_CHECKS]
    if bad:
        raise PDError(f"unknown checks {bad}; choose from r1, {', '.join(ALL_CHECKS)}")
    result = run_suite(expanded, args.trials, args.max_crossings, args.seed)
    report["verification"] = {
        "seed": args.seed, "trials": args.trials, "max_crossings": args.max_crossings,
        "checks": {c: result.count(c) for c in expanded},
        "skipped": result.skipped,
        "failures": [t.__dict__ for t in result.failures()],
        "ok": result.ok,
    }
    lines = [f"{c}: {result.count(c)} trials" for c in expanded]
    lines.append(f"skipped: {result.skipped}")
    for t in result.failures():
        lines.append(f"FAILED {t.check}: {t.before} -> {t.after}")
    lines.append("all invariant" if result.ok else "MISMATCH")
    if not result.ok:
        report["mismatch"] = "an invariance check failed"
    return lines


def _cmd_catalog(args, report):
    entries = []
    for name in NAMES:
        od = builtin(name)
        entries.append({"name": name, "n": od.n, "writhe": od.writhe, "components": od.components,
                        "pd": od.to_pd()})
    report["catalog"] = entries
    return [f"{e['name']:<16} n={e['n']:<3} w={e['writhe']:<3} N={e['components']}" for e in entries]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kbh", description="Framed and classical Khovanov-type homology of links.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_argument_group("diagram")
        src.add_argument("--name", help=f"catalog diagram: {', '.join(NAMES)}")
        src.add_argument("--pd", help="PD code, e.g. 'PD[X(1,4,2,5), ...]'")
        src.add_argument("--braid", help="braid closure, e.g. 'BR[2; 1 1 1]'")
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes for homology (default: KBH_THREADS or 1)")

    for name, text in (("bracket", "Kauffman bracket and f_hat"),
                       ("framed", "framed homology and FKh"),
                       ("oriented", "oriented homology with cross-checks"),
                       ("khovanov", "classical Khovanov homology and Kh"),
                       ("compare", "regrouped Khovanov homology against the oriented invariant")):
        common(sub.add_parser(name, help=text))
    v = sub.add_parser("verify", help="randomized invariance suites")
    v.add_argument("--moves", default="r1,r2,r3,reorder", help="comma list of r1, r1+, r1-, r2, r3, reorder")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--max-crossings", type=int, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    v.add_argument("--timing", action="store_true")
    v.add_argument("--threads", type=int, default=None)
    c = sub.add_parser("catalog", help="list built-in diagrams")
    c.add_argument("--json", action="store_true")
    c.add_argument("--timing", action="store_true")
    c.add_argument("--threads", type=int, default=None)
    return parser


_DIAGRAM_COMMANDS = {
    "bracket": _cmd_bracket,
    "framed": _cmd_framed,
    "oriented": _cmd_oriented,
    "khovanov": _cmd_khovanov,
    "compare": _cmd_compare,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None:
        os.environ["KBH_THREADS"] = str(args.threads)
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "notes": []}
    start = time.perf_counter()
    code = 0
    lines: list[str] = []
    try:
        if args.command in _DIAGRAM_COMMANDS:
            od, d, name, orientation = _load(args)
            report["diagram"] = _diagram_echo(od, d, name, orientation)
            lines = _DIAGRAM_COMMANDS[args.command](args, od, d, report)
        elif args.command == "verify":
            lines = _cmd_verify(args, report)
        else:
            lines = _cmd_catalog(args, report)
    except (PDError, UnknownName) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (NotAComplex, AssertionError, KBHError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=stderr)
        return 1
    if report.get("mismatch"):
        print(f"mismatch: {report['mismatch']}", file=stderr)
        code = 3
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True), file=stdout)
    else:
        for line in lines:
            print(line, file=stdout)
        if args.timing:
            print(f"time: {report['timing']['seconds']} s", file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
