"""Command-line front end.

    halphen count TYPE --index M [--multiple-fiber K] [--json]
    halphen model (--sequence FILE | --table1 TYPE) [--enumerate] [--json]
    halphen tables --which {1,2,3} [--json]
    halphen verify [--bound N] [--json]

Exit codes: 0 success, 1 verification failure, 2 bad arguments or parse
error, 3 model postcondition failure, 4 table mismatch against the golden
copies.
"""

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from halphen.checks import (
    CheckResult,
    fiber_sums_ok,
    gram_ok,
    marks_match_appendix,
    oracle_mismatches,
    projection_independent,
    same_count_function,
    free_degrees_ok,
)
from halphen.polytope import count
from halphen.roots import (
    TYPES13,
    UnsupportedConfiguration,
    appendix_configuration,
    appendix_grading,
    fixture_dir,
)
from halphen.surface import (
    CharacteristicSequence,
    FiniteAbelianGroup,
    ModelError,
    counts_by_twist,
    enumerate_minus_one_curves,
    reconstruct_neg2_curves,
    realizable_counts,
    table1_sequence,
)

EXIT_VERIFY, EXIT_USAGE, EXIT_MODEL, EXIT_DIFF = 1, 2, 3, 4


def load_golden(name: str) -> dict:
    path = resources.files("halphen") / "data" / "golden" / name
    return json.loads(path.read_text(encoding="utf-8"))


def _twist_label(t) -> str:
    return " ".join(f"{x}bar" for x in t) if t else "-"


def _group_label(factors) -> str:
    return str(FiniteAbelianGroup(tuple(factors))) if factors else "0"


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------


def cmd_count(args) -> int:
    try:
        twists = counts_by_twist(args.type, args.index, args.multiple_fiber)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = [tc.to_json() for tc in twists.values()]
    lines = [f"{args.type}  index {args.index}"]
    for tc in twists.values():
        flag = "realizable" if tc.realizable else "excluded (extension needs > 2 generators)"
        lines.append(
            f"  twist {_twist_label(tc.torsion):<12} {tc.count:>5}   extension {_group_label(tc.extension):<14} {flag}"
        )
    _emit(args, {"type": args.type, "index": args.index, "multiple_fiber": args.multiple_fiber, "twists": rows}, "\n".join(lines))
    return 0


def _format_class_rows(classes) -> List[str]:
    return ["  " + " ".join(f"{c:>3}" for c in d.coeffs) for d in classes]


def cmd_model(args) -> int:
    try:
        if args.sequence:
            seq = CharacteristicSequence.parse(Path(args.sequence).read_text(encoding="utf-8"))
        else:
            seq = table1_sequence(args.table1)
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        model = reconstruct_neg2_curves(seq)
        minus_one = enumerate_minus_one_curves(model) if args.enumerate else None
    except (ModelError, UnsupportedConfiguration, ArithmeticError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    lines = [
        f"group          {seq.group}",
        f"sequence       {', '.join(seq.group.format_element(p) for p in seq.points)}",
        f"h              {seq.group.format_element(seq.h)}",
        f"halphen index  {model.index}",
        f"configuration  {model.configuration}",
        f"class group    {model.q_matrix.class_group}",
        f"delta          {model.delta}",
        f"(-2)-curves ({len(model.neg2_curves)}):",
    ]
    lines += _format_class_rows(model.neg2_curves)
    if minus_one is not None:
        lines.append(f"(-1)-curves ({len(minus_one)}), degree then negated multiplicities:")
        lines += _format_class_rows(minus_one)
    _emit(args, model.to_json(minus_one), "\n".join(lines))
    return 0


def _table1_rows() -> List[dict]:
    rows = []
    for name in [r["lattice"] for r in load_golden("table1.json")["rows"]]:
        seq = table1_sequence(name)
        model = reconstruct_neg2_curves(seq)
        g = seq.group
        compact = [
            "".join(map(str, p)) if p != g.zero() else "0" for p in seq.points
        ]
        rows.append(
            {
                "lattice": str(model.configuration),
                "group": str(model.q_matrix.class_group).split(" + ", 1)[1]
                if " + " in str(model.q_matrix.class_group)
                else "0",
                "sequence": "[" + ",".join(compact) + "]",
                "index": model.index,
            }
        )
    return rows


def _table2_rows() -> List[dict]:
    return [{"type": name, "counts": realizable_counts(name, 2)} for name in [r["type"] for r in load_golden("table2.json")["rows"]]]


def _table3_rows() -> List[dict]:
    rows = []
    for name in TYPES13:
        q = appendix_grading(name)
        rows.append(
            {
                "type": name,
                "class_group": str(q.class_group),
                "free": [list(r) for r in q.free_rows],
                "torsion": [list(r) for _, r in q.torsion],
            }
        )
    return rows


def cmd_tables(args) -> int:
    golden_name = f"table{args.which}.json"
    golden = load_golden(golden_name)["rows"]
    notes = []
    try:
        if args.which == 1:
            rows = _table1_rows()
            notes = [f"{r['lattice']}: index {r['index']} (expected 1)" for r in rows if r["index"] != 1]
            rows = [{k: v for k, v in r.items() if k != "index"} for r in rows]
        elif args.which == 2:
            rows = _table2_rows()
        else:
            rows = _table3_rows()
            for name in TYPES13:
                model = reconstruct_neg2_curves(table1_sequence(name))
                if model.q_matrix.class_group != appendix_grading(name).class_group:
                    notes.append(f"{name}: recomputed class group {model.q_matrix.class_group}")
    except (ModelError, UnsupportedConfiguration, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIFF
    diffs = [f"{g} != {r}" for g, r in zip(golden, rows) if g != r]
    if len(golden) != len(rows):
        diffs.append(f"{len(rows)} rows regenerated, {len(golden)} in the golden copy")
    diffs += notes
    if args.json:
        print(json.dumps({"table": args.which, "rows": rows, "diffs": diffs}, indent=2, sort_keys=True))
    else:
        for r in rows:
            if args.which == 1:
                print(f"{r['lattice']:<10} {r['group']:<12} {r['sequence']}")
            elif args.which == 2:
                print(f"{r['type']:<10} {','.join(map(str, r['counts']))}")
            else:
                print(f"{r['type']:<10} {r['class_group']}")
                for row in r["free"]:
                    print("    " + " ".join(f"{x}" for x in row))
                for row in r["torsion"]:
                    print("    " + " ".join(f"{x}" for x in row) + "   (torsion)")
        for d in diffs:
            print(f"MISMATCH {d}", file=sys.stderr)
    return EXIT_DIFF if diffs else 0


def run_checks(bound: int) -> List[CheckResult]:
    results = []
    golden3 = {r["type"]: r for r in load_golden("table3.json")["rows"]}

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # any failure is reported, not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail))

    for name in TYPES13:
        def fixture_check(name=name):
            q = appendix_grading(name)
            g = golden3[name]
            same = (
                [list(r) for r in q.free_rows] == g["free"]
                and [list(r) for _, r in q.torsion] == g["torsion"]
                and str(q.class_group) == g["class_group"]
            )
            ok = same and marks_match_appendix(q, appendix_configuration(name))
            return ok, "" if ok else f"fixture matrix {name} differs from the golden transcription"

        check(f"fixture {name}", fixture_check)

    for name in TYPES13:
        def oracle_check(name=name):
            bad = oracle_mismatches(appendix_grading(name), bound)
            return not bad, "" if not bad else f"matrix {name}: {len(bad)} mismatches, first {bad[0]}"

        check(f"hilbert == polytope {name} (bound {bound})", oracle_check)

    for name in TYPES13:
        def model_check(name=name):
            model = reconstruct_neg2_curves(table1_sequence(name))
            problems = []
            if str(model.configuration) != name:
                problems.append(f"configuration {model.configuration}")
            if model.index != 1:
                problems.append(f"index {model.index}")
            if not (gram_ok(model) and fiber_sums_ok(model) and free_degrees_ok(model)):
                problems.append("Gram/fiber postcondition")
            if not projection_independent(model):
                problems.append("delta depends on the projection class")
            q = appendix_grading(name)
            if not same_count_function(q, model.q_matrix, model.configuration, bound):
                problems.append(f"recomputed matrix {name} disagrees with the fixture")
            return not problems, "; ".join(problems)

        check(f"model {name}", model_check)

    for fname, expected in (("d8_case1.seq", 9), ("d8_case2.seq", 6)):
        def case_check(fname=fname, expected=expected):
            seq = CharacteristicSequence.parse((fixture_dir() / fname).read_text(encoding="utf-8"))
            model = reconstruct_neg2_curves(seq)
            n = len(enumerate_minus_one_curves(model))
            ok = n == expected == count(model.q_matrix, model.delta) and projection_independent(model)
            return ok, "" if ok else f"{n} (-1)-curves, expected {expected}"

        check(f"example {fname}", case_check)
    return results


def cmd_verify(args) -> int:
    if args.bound < 0:
        print("error: bound must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    results = run_checks(args.bound)
    failed = [r for r in results if not r.ok]
    if args.json:
        print(json.dumps({"checks": [vars(r) for r in results], "failed": len(failed)}, indent=2, sort_keys=True))
    else:
        for r in results:
            print(r.line())
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halphen", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count (-1)-curves per torsion twist")
    p.add_argument("type", choices=TYPES13)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--multiple-fiber", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("model", help="reconstruct a surface model from a characteristic sequence")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--sequence")
    src.add_argument("--table1", choices=TYPES13)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("tables", help="regenerate a table and diff it against the golden copy")
    p.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run the oracle-equivalence checks")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "index", 1) is not None and getattr(args, "index", 1) < 1:
        print("error: --index must be positive", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
