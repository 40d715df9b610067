"""Command-line front end.

Exit codes: 0 success, 1 a condition, axiom or refutation failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Callable

from .algebra import (
    AlgebraError,
    CosetRelationAlgebra,
    bits_of,
    check_axioms,
    decompose,
    is_simple,
    measurability_report,
    verify_block_structure,
    verify_converse,
    verify_partition,
)
from .document import DocumentError, dumps, load_document, to_document
from .frame import (
    ValidationReport,
    check_coset_conditions,
    check_semi_frame,
    is_simple_frame,
)
from .groups import FiniteGroup, GroupError, cyclic_group, direct_product
from .nonrep import SearchError, VERTICES, build_pentagon, generalized_pentagon, refute

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class Output:
    """Collects text for stdout or ``--out`` and the machine-format report."""

    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []
        self.report: dict = {"command": args.command}
        self.started = time.perf_counter()

    def line(self, s: str = ""):
        self.lines.append(s)

    def finish(self, code: int) -> int:
        if self.args.timing:
            self.report["timing_seconds"] = round(time.perf_counter() - self.started, 3)
        self.report["exit_code"] = code
        if self.args.format == "machine":
            text = json.dumps(self.report, indent=2) + "\n"
        else:
            if self.args.timing:
                self.lines.append(f"time  {self.report['timing_seconds']:.3f}s")
            text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.args.out:
            Path(self.args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return code


def _report_lines(out: Output, rep: ValidationReport):
    for name, ok in rep.summary().items():
        n = sum(1 for c in rep.checks if c.condition == name)
        tail = ""
        if not ok:
            bad = rep.first_failure(name)
            tail = f"  at ({','.join(str(v) for v in bad.instance)})"
            if bad.detail:
                tail += f": {bad.detail}"
        out.line(f"{'pass' if ok else 'FAIL'}  {name}  [{n} checked]{tail}")


def _load(path: str):
    try:
        return load_document(path)
    except (DocumentError, GroupError) as exc:
        raise InputError(str(exc)) from exc


def _algebra(path: str) -> CosetRelationAlgebra:
    t = _load(path)
    try:
        return CosetRelationAlgebra(t)
    except AlgebraError as exc:
        raise InputError(str(exc)) from exc


def cmd_validate(args, out: Output) -> int:
    t = _load(args.path)
    rep = check_semi_frame(t)
    rep.extend(check_coset_conditions(t, require_semi_frame=False))
    _report_lines(out, rep)
    out.line(f"verdict  {'valid' if rep.ok else 'invalid'}")
    out.report.update(rep.to_dict())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_build(args, out: Output) -> int:
    alg = _algebra(args.path)
    reps = [verify_partition(alg), verify_converse(alg), verify_block_structure(alg)]
    ok = all(r.ok for r in reps)
    counts = {"indices": len(alg.indices), "blocks": len(alg.blocks), "atoms": alg.n,
              "subidentity_atoms": len(alg.subidentity_atoms()),
              "semi_frame": alg.semi_frame}
    for k, v in counts.items():
        out.line(f"{k}  {v}")
    for r in reps:
        out.line(f"{'pass' if r.ok else 'FAIL'}  {r.title}  [{len(r.checks)} checked]")
    out.report.update({"counts": counts, "checks": {r.title: r.ok for r in reps}, "ok": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _atoms_tsv(alg: CosetRelationAlgebra) -> list[str]:
    rows = ["index\tx\ty\talpha\tpairs"]
    for i, a in enumerate(alg.atoms):
        rows.append(f"{i}\t{a.x}\t{a.y}\t{a.alpha}\t{alg.concrete(1 << i).count()}")
    return rows


def _fmt_bits(bits: int) -> str:
    return ",".join(str(i) for i in bits_of(bits))


def _table_tsv(alg: CosetRelationAlgebra, op: str) -> list[str]:
    if op == "converse":
        return ["atom\tconverse"] + [f"{i}\t{j}" for i, j in enumerate(alg.converse_table)]
    if op == "otimes":
        rows = ["left\tright\tresult"]
        for i in range(alg.n):
            row = alg.otimes_table[i]
            for j in range(alg.n):
                rows.append(f"{i}\t{j}\t{_fmt_bits(row[j])}")
        return rows
    rows = ["left\tright\tin_algebra\tresult"]
    for i in range(alg.n):
        for j in range(alg.n):
            if alg.atoms[i].y != alg.atoms[j].x:
                rows.append(f"{i}\t{j}\tyes\t")
                continue
            raw = alg.compose_concrete(i, j)
            e = alg.try_abstract(raw)
            if e is None:
                rows.append(f"{i}\t{j}\tno\t{raw.count()} pairs")
            else:
                rows.append(f"{i}\t{j}\tyes\t{_fmt_bits(e.bits)}")
    return rows


def cmd_atoms(args, out: Output) -> int:
    alg = _algebra(args.path)
    rows = _atoms_tsv(alg)
    if args.format == "machine":
        out.report["atoms"] = [dict(zip(rows[0].split("\t"), r.split("\t"))) for r in rows[1:]]
    for r in rows:
        out.line(r)
    return EXIT_OK


def cmd_table(args, out: Output) -> int:
    alg = _algebra(args.path)
    rows = _table_tsv(alg, args.op)
    if args.format == "machine":
        out.report["op"] = args.op
        out.report["rows"] = [r.split("\t") for r in rows[1:]]
        out.report["header"] = rows[0].split("\t")
    for r in rows:
        out.line(r)
    return EXIT_OK


def cmd_axioms(args, out: Output) -> int:
    alg = _algebra(args.path)
    rep = check_axioms(alg, jobs=args.jobs)
    _report_lines(out, rep)
    out.report.update(rep.to_dict())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_measure(args, out: Output) -> int:
    alg = _algebra(args.path)
    m = measurability_report(alg)
    out.line("index\tmeasure\tsquare_pairs\tsquare_is_block\tbijective_atoms\tok")
    for e in m.entries:
        out.line(f"{e.index}\t{e.measure}\t{e.square_pairs}\t{str(e.square_is_block).lower()}\t"
                 f"{e.atoms_in_square if e.all_bijective else 0}\t{str(e.ok).lower()}")
    out.report["measures"] = [e.__dict__ | {"ok": e.ok} for e in m.entries]
    out.report["ok"] = m.ok
    return EXIT_OK if m.ok else EXIT_FAIL


def cmd_decompose(args, out: Output) -> int:
    alg = _algebra(args.path)
    simple = is_simple(alg)
    frame_simple = is_simple_frame(alg.triple)
    dec = decompose(alg)
    out.line(f"simple  {str(simple).lower()}")
    out.line(f"simple_frame  {str(frame_simple).lower()}")
    out.line(f"components  {len(dec.factors)}")
    for n, fac in enumerate(dec.factors):
        out.line(f"component {n}  indices={','.join(fac.indices)}  atoms={fac.n}")
    _report_lines(out, dec.report)
    ok = dec.ok and simple == frame_simple
    out.report.update({
        "simple": simple, "simple_frame": frame_simple,
        "components": [{"indices": list(f.indices), "atoms": f.n} for f in dec.factors],
        "correspondence_ok": dec.ok, "ok": ok,
    })
    return EXIT_OK if ok else EXIT_FAIL


def _parse_base(text: str) -> tuple[FiniteGroup, list[dict]]:
    """``Z2``, ``Z3``, ``Z2xZ2`` ... -> the base group and its document entries."""
    parts = text.replace("×", "x").split("x")
    try:
        orders = [int(p[1:]) for p in parts if p[:1] in ("Z", "z")]
    except ValueError:
        orders = []
    if len(orders) != len(parts) or not orders or any(n < 2 for n in orders):
        raise InputError(f"base must look like Z2, Z3 or Z2xZ2, got {text!r}")
    base = cyclic_group(orders[0])
    for n in orders[1:]:
        base = direct_product(base, cyclic_group(n))
    defs = [{"name": f"Z{n}", "kind": "cyclic", "n": n} for n in sorted(set(orders))]
    factors = [f"Z{n}" for n in orders] * 3
    defs += [{"name": x, "kind": "product", "factors": factors} for x in VERTICES]
    return base, defs


def cmd_pentagon(args, out: Output) -> int:
    base, defs = _parse_base(args.base)
    try:
        if args.base in ("Z2", "z2") and args.choice == 0 and args.shift is None:
            t = build_pentagon()
        else:
            t = generalized_pentagon(base, shift=args.shift, choice=args.choice)
    except (SearchError, GroupError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    text = dumps(to_document(t, defs))
    if args.out:
        Path(args.out).write_text(text)
        args.out = None
        out.line(f"wrote frame document for base {args.base}")
        out.report["written"] = True
    else:
        out.lines.append(text.rstrip("\n"))
    return EXIT_OK


def cmd_refute(args, out: Output) -> int:
    alg = _algebra(args.path)
    triangle = tuple(args.triangle.split(","))
    if len(triangle) != 3 or any(x not in alg.indices for x in triangle):
        raise InputError(f"triangle must name three indices of the frame, got {args.triangle!r}")
    try:
        summary = refute(alg, triangle)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    outdir = Path(args.dir)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "certificates.jsonl", "w") as fh:
        for n, c in enumerate(summary.certificates):
            fh.write(json.dumps({"scaffold": n} | c.to_dict(), sort_keys=False) + "\n")
    s = summary.to_dict()
    (outdir / "summary.json").write_text(json.dumps(s, indent=2) + "\n")
    for k, v in s.items():
        out.line(f"{k}  {str(v).lower() if isinstance(v, bool) else v}")
    out.report.update(s)
    return EXIT_OK if summary.all_refuted else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    common.add_argument("--timing", action="store_true", help="report wall-clock time")

    parser = argparse.ArgumentParser(
        prog="cosetra", description="Build and check coset relation algebras of group triples.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str, path: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if path:
            p.add_argument("path", help="frame document (JSON)")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check semi-frame and coset conditions")
    add("build", cmd_build, "build the algebra and check partition and converse")
    add("atoms", cmd_atoms, "list atoms as a table")
    t = add("table", cmd_table, "export an operation table")
    t.add_argument("--op", choices=("otimes", "compose", "converse"), required=True)
    add("axioms", cmd_axioms, "check the relation algebra axioms")
    add("measure", cmd_measure, "measures of the subidentity atoms")
    add("decompose", cmd_decompose, "simplicity and the component factors")
    p = add("pentagon", cmd_pentagon, "write the pentagon frame document", path=False)
    p.add_argument("--base", default="Z2", help="abelian base group such as Z2, Z3, Z2xZ2")
    p.add_argument("--shift", type=int, default=None, help="representative of C_pqr")
    p.add_argument("--choice", type=int, default=0, help="which coherent iso system to use")
    r = add("refute", cmd_refute, "enumerate scaffolds and write chase certificates")
    r.add_argument("--triangle", default="p,q,r")
    r.add_argument("--dir", required=True, metavar="DIR", help="directory for certificates")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    out = Output(args)
    try:
        code = args.fn(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return out.finish(code)


if __name__ == "__main__":
    sys.exit(main())
