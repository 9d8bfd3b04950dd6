"""Command-line surface.

Every checker command reads a JSON input document, runs the check, prints a
human summary (with wall-clock timing) and exits 0 on pass, 1 on fail, 2 on
error.  ``--report PATH`` additionally writes a machine-readable report whose
bytes depend only on the inputs; ``--jobs K`` fans independent configurations
across worker processes with deterministic witness selection; and
``--witness-limit K`` caps how many witnesses are collected.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from itertools import islice
from typing import List, Optional, Sequence, Tuple

from .documents import DocumentError, InputDocument, parse_document, render_document
from .modes import induce_bracket, render_table
from .operators import (
    MatrixDiffOperator,
    SkewSymmetryError,
    _configurations,
    _defect_unchecked,
    evolution_rhs,
    is_hamiltonian_pair,
    iter_schouten_failures,
    iter_skew_failures,
)
from .algebra import gen_name
from .calculus import non_membership_certificate
from .reports import ERROR, FAIL, PASS, Report, input_echo
from .structures import (
    ALGEBRA_CLASSES,
    build_type0_operator,
    build_type1_operator,
    iter_axiom_failures,
)
from .suite import verify_paper_examples


def _chunked(seq: List, size: int):
    for start in range(0, len(seq), size):
        yield seq[start:start + size]


def _closedness_chunk(args) -> List[Tuple]:
    op, configs, limit = args
    failures = []
    for families, parities in configs:
        defect = _defect_unchecked(op, families, parities)
        certificate = non_membership_certificate(defect)
        if certificate is not None:
            base, gradient = certificate
            failures.append((families, parities, gen_name(base), str(gradient)))
            if len(failures) >= limit:
                break
    return failures


def _scan_closedness(op: MatrixDiffOperator, jobs: int, limit: int) -> List[Tuple]:
    """Failing configurations, lexicographically first, at most ``limit``.

    Configurations are independent; with jobs > 1 they are evaluated in
    chunks across processes and the witness list is the lexicographic
    minimum of the union, so the outcome does not depend on scheduling.
    """
    configs = list(_configurations(op.dim))
    if jobs <= 1:
        return _closedness_chunk((op, configs, limit))
    from concurrent.futures import ProcessPoolExecutor

    chunk_size = max(1, (len(configs) + jobs - 1) // jobs)
    tasks = [(op, chunk, limit) for chunk in _chunked(configs, chunk_size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(_closedness_chunk, tasks)
    merged = [w for chunk in results for w in chunk]
    return sorted(merged)[:limit]


def _require_kind(doc: InputDocument, kind: str, path: str) -> None:
    if doc.kind != kind:
        raise DocumentError("kind", f"{path}: expected a {kind} document, got {doc.kind}")


def _cmd_check_algebra(args) -> Report:
    doc = parse_document(args.file)
    _require_kind(doc, "algebra", args.file)
    witnesses = list(islice(iter_axiom_failures(doc.payload, args.algebra_class),
                            args.witness_limit))
    return Report(
        check="check-algebra",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        configuration={"class": args.algebra_class, "input": input_echo(args.file)},
    )


def _cmd_check_skew(args) -> Report:
    doc = parse_document(args.file)
    _require_kind(doc, "operator", args.file)
    witnesses = list(islice(iter_skew_failures(doc.payload), args.witness_limit))
    return Report(
        check="check-skew",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        configuration={"input": input_echo(args.file)},
    )


def _cmd_check_hamiltonian(args) -> Report:
    doc = parse_document(args.file)
    _require_kind(doc, "operator", args.file)
    op = doc.payload
    config = {"input": input_echo(args.file), "jobs": args.jobs}
    skew = list(islice(iter_skew_failures(op), args.witness_limit))
    if skew:
        return Report(check="check-hamiltonian", verdict=FAIL,
                      witnesses=[("skew",) + w for w in skew], configuration=config)
    failures = _scan_closedness(op, args.jobs, args.witness_limit)
    return Report(
        check="check-hamiltonian",
        verdict=PASS if not failures else FAIL,
        witnesses=[("closedness",) + f for f in failures],
        configuration=config,
    )


def _load_operator_pair(args) -> Tuple[MatrixDiffOperator, MatrixDiffOperator]:
    doc_a = parse_document(args.first)
    doc_b = parse_document(args.second)
    _require_kind(doc_a, "operator", args.first)
    _require_kind(doc_b, "operator", args.second)
    return doc_a.payload, doc_b.payload


def _cmd_schouten(args) -> Report:
    op_a, op_b = _load_operator_pair(args)
    witnesses = list(islice(iter_schouten_failures(op_a, op_b), args.witness_limit))
    return Report(
        check="schouten",
        verdict=PASS if not witnesses else FAIL,
        witnesses=witnesses,
        configuration={"first": input_echo(args.first), "second": input_echo(args.second)},
    )


def _cmd_pair(args) -> Report:
    op_a, op_b = _load_operator_pair(args)
    ok, witness = is_hamiltonian_pair(op_a, op_b)
    return Report(
        check="pair",
        verdict=PASS if ok else FAIL,
        witnesses=[] if ok else [witness],
        configuration={"first": input_echo(args.first), "second": input_echo(args.second)},
    )


_BUILDERS = {
    "nx_bialgebra": build_type1_operator,
    "fermionic_novikov": build_type0_operator,
}


def _cmd_build(args) -> Report:
    doc = parse_document(args.file)
    _require_kind(doc, "algebra", args.file)
    operator = _BUILDERS[args.source_class](doc.payload)
    rendered = render_document(InputDocument("operator", operator))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    return Report(
        check="build",
        verdict=PASS,
        configuration={"from": args.source_class, "input": input_echo(args.file),
                       "output": args.output},
        detail={"operator_document": rendered},
    )


def _cmd_induce(args) -> Report:
    doc = parse_document(args.file)
    _require_kind(doc, "linear_operator", args.file)
    table = induce_bracket(doc.payload, args.window)
    return Report(
        check="induce",
        verdict=PASS,
        configuration={"window": args.window, "input": input_echo(args.file)},
        detail={"brackets": render_table(table)},
    )


def _cmd_evolution(args) -> Report:
    op_doc = parse_document(args.file)
    _require_kind(op_doc, "operator", args.file)
    density_doc = parse_document(args.density)
    _require_kind(density_doc, "density", args.density)
    dim, density = density_doc.payload
    if dim != op_doc.payload.dim:
        raise DocumentError("dimension",
                            "operator and density documents disagree on the family count")
    rhs = evolution_rhs(op_doc.payload, density)
    return Report(
        check="evolution",
        verdict=PASS,
        configuration={"operator": input_echo(args.file), "density": input_echo(args.density)},
        detail={"components": {str(fam): str(poly) for fam, poly in sorted(rhs.items())}},
    )


def _cmd_verify_examples(args) -> Report:
    results = verify_paper_examples(jobs=args.jobs)
    failing = [(name, witness) for name, verdict, witness in results if verdict != PASS]
    return Report(
        check="verify-paper-examples",
        verdict=PASS if not failing else FAIL,
        witnesses=failing,
        configuration={"jobs": args.jobs},
        detail={"entries": [{"name": name, "verdict": verdict,
                             "witness": witness} for name, verdict, witness in results]},
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svarcalc",
        description="Exact checks for Hamiltonian superoperators, the algebra "
                    "classes attached to them, and their induced mode superalgebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--report", metavar="PATH",
                       help="write a machine-readable JSON report here")
        p.add_argument("--jobs", type=int, default=1, metavar="K",
                       help="worker processes for independent configurations")
        p.add_argument("--witness-limit", dest="witness_limit", type=int, default=1,
                       metavar="K", help="collect at most K witnesses")

    p = sub.add_parser("check-algebra", help="check the axioms of an algebra class")
    p.add_argument("--class", dest="algebra_class", required=True, choices=ALGEBRA_CLASSES)
    p.add_argument("file")
    common(p)
    p.set_defaults(handler=_cmd_check_algebra)

    p = sub.add_parser("check-skew", help="check super skew-symmetry of an operator")
    p.add_argument("file")
    common(p)
    p.set_defaults(handler=_cmd_check_skew)

    p = sub.add_parser("check-hamiltonian", help="full Hamiltonian superoperator test")
    p.add_argument("file")
    common(p)
    p.set_defaults(handler=_cmd_check_hamiltonian)

    p = sub.add_parser("schouten", help="check the Schouten bracket of two operators "
                                        "vanishes modulo total derivatives")
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(handler=_cmd_schouten)

    p = sub.add_parser("pair", help="check two operators form a Hamiltonian pair")
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(handler=_cmd_pair)

    p = sub.add_parser("build", help="build the operator attached to an algebra spec")
    p.add_argument("--from", dest="source_class", required=True, choices=sorted(_BUILDERS))
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the operator document here")
    common(p)
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("induce", help="induce the mode bracket table of a linear operator")
    p.add_argument("--window", type=int, required=True, metavar="W")
    p.add_argument("file")
    common(p)
    p.set_defaults(handler=_cmd_induce)

    p = sub.add_parser("evolution", help="evolution right side for an operator and a density")
    p.add_argument("file", help="operator document")
    p.add_argument("--density", required=True, help="density document")
    common(p)
    p.set_defaults(handler=_cmd_evolution)

    p = sub.add_parser("verify-paper-examples",
                       help="run the bundled example suite end to end")
    common(p)
    p.set_defaults(handler=_cmd_verify_examples)

    return parser


def _print_human(report: Report, elapsed: float) -> None:
    print(f"[{report.check}] verdict: {report.verdict} ({elapsed:.2f}s)")
    for witness in report.witnesses:
        print(f"  witness: {witness}")
    if report.detail:
        if "brackets" in report.detail:
            for line in report.detail["brackets"]:
                print(f"  {line}")
        if "components" in report.detail:
            for fam, poly in report.detail["components"].items():
                print(f"  d/dt phi{fam} = {poly}")
        if "entries" in report.detail:
            for entry in report.detail["entries"]:
                mark = "ok" if entry["verdict"] == PASS else "FAILED"
                print(f"  {entry['name']}: {mark}")
        if "operator_document" in report.detail:
            sys.stdout.write(report.detail["operator_document"])


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        report = args.handler(args)
    except DocumentError as exc:
        report = Report(check=args.command, verdict=ERROR,
                        witnesses=[{"location": exc.location, "message": exc.message}])
    except (SkewSymmetryError, ValueError) as exc:
        report = Report(check=args.command, verdict=ERROR, witnesses=[str(exc)])
    elapsed = time.monotonic() - start
    _print_human(report, elapsed)
    if getattr(args, "report", None):
        path = _report_path(args.report)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
    return report.exit_code()


def _report_path(path: str) -> str:
    """Resolve a report path against the optional directory override.

    A relative ``--report`` path is placed under $SVARCALC_REPORT_DIR when
    that variable is set; absolute paths are used as given.
    """
    directory = os.environ.get("SVARCALC_REPORT_DIR")
    if directory and not os.path.isabs(path):
        return os.path.join(directory, path)
    return path


if __name__ == "__main__":
    sys.exit(main())
