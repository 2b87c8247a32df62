"""Command-line front end: ``shadowtrace {check,normalize,trace,transfer,corpus}``.

Exit status is 0 when every task is Proved or Pass, 1 when some task
fails, and 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .bimod import (
    Algebra,
    Bimodule,
    DualityCheckFailed,
    InvalidPresentation,
    NotFree,
    evaluate_trace,
    hattori_stallings_oracle,
    hh0_of_algebra,
)
from .dsl import DslDocument, ExprDecl, Goal, ModelDecl, ParseError, parse_dsl
from .engine import StepMismatch, search_equal, verify_script
from .groups import (
    FiniteGroup,
    GroupError,
    NotASubgroup,
    becker_gottlieb_composite,
    build_cover,
    coset_sum_oracle,
    cross_model_check,
    euler_composite,
    loop_transfer,
    parse_subgroup,
)
from .linalg import fmt
from .normal import normalize
from .rules import builtin_rules
from .terms import TypeCheckError, render
from .tracelib import CORPUS_FILES, shipped_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GOOD = ("Proved", "Pass")


class UsageError(Exception):
    pass


@dataclass
class TaskResult:
    name: str
    kind: str
    verdict: str  # Proved | Unknown | Pass | Fail
    seconds: float
    detail: str = ""
    artifact: Optional[dict] = None


@dataclass
class RunReport:
    source: str
    tasks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.verdict in GOOD for t in self.tasks)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.ok else EXIT_FAIL

    def first_failure(self) -> Optional[TaskResult]:
        return next((t for t in self.tasks if t.verdict not in GOOD), None)

    def to_json(self) -> dict:
        return {"source": self.source, "ok": self.ok,
                "tasks": [asdict(t) for t in self.tasks]}

    def to_text(self) -> str:
        lines = []
        for t in self.tasks:
            extra = f"  {t.detail}" if t.detail else ""
            lines.append(f"{t.verdict:<7} {t.kind:<8} {t.name}  ({t.seconds:.2f}s){extra}")
        return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------- model loading


def _read_json(path: str, base: str):
    full = path if os.path.isabs(path) else os.path.join(base, path)
    with open(full, encoding="utf-8") as fh:
        return json.load(fh)


class ModelContext:
    """Resolves model declarations of one document by name, loading each at most once."""

    def __init__(self, doc: DslDocument, base: str):
        self.decls = {m.name: m for m in doc.models}
        self.base = base
        self.cache: dict = {}

    def data(self, decl: ModelDecl):
        return decl.data if decl.path is None else _read_json(decl.path, self.base)

    def get(self, name: str):
        if name in self.cache:
            return self.cache[name]
        if name not in self.decls:
            raise InvalidPresentation(f"unknown model {name!r}")
        d = self.decls[name]
        if d.kind == "algebra":
            obj = Algebra.from_json(self.data(d))
        elif d.kind == "bimodule":
            algs = {n: self.get(n) for n, m in self.decls.items() if m.kind == "algebra"}
            obj = Bimodule.from_json(self.data(d), algs)
        elif d.kind == "group":
            obj = FiniteGroup.from_json(self.data(d))
        else:
            G = self.get(d.group)
            obj = build_cover(G, parse_subgroup(G, d.subgroup))
        self.cache[name] = obj
        return obj


# ---------------------------------------------------------------- tasks


def _trace_matrix_json(name: str, M: Bimodule) -> dict:
    HA, HR = hh0_of_algebra(M.left), hh0_of_algebra(M.right)
    tr = evaluate_trace(M, hh_left=HA, hh_right=HR)
    orc = hattori_stallings_oracle(M, HA, HR)
    return {
        "bimodule": name,
        "rows": [M.right.basis[i] for i in HR.representatives],
        "cols": [M.left.basis[i] for i in HA.representatives],
        "entries": [[fmt(x) for x in row] for row in tr.matrix.rows()],
        "oracle_agrees": tr.matrix == orc,
    }


def run_task(doc: DslDocument, item, ctx: ModelContext) -> TaskResult:
    t0 = time.perf_counter()
    kind = item.kind
    try:
        verdict, detail, art = _run(doc, item, ctx)
    except (StepMismatch, TypeCheckError) as exc:
        verdict, detail, art = "Fail", str(exc), None
    except (InvalidPresentation, NotFree, DualityCheckFailed, GroupError, NotASubgroup,
            OSError, ValueError) as exc:
        verdict, detail, art = "Fail", f"{type(exc).__name__}: {exc}", None
    return TaskResult(item.name, kind, verdict, time.perf_counter() - t0, detail, art)


def _run(doc: DslDocument, item, ctx: ModelContext):
    sig = doc.sig
    if isinstance(item, Goal):
        rules = builtin_rules(sig)
        if item.kind == "prove":
            verify_script(sig, rules, item.script())
            return "Proved", f"{len(item.steps)} steps", None
        cert = search_equal(sig, rules, item.lhs, item.rhs, max_nodes=item.budget or 100_000,
                            max_depth=item.depth if item.depth is not None else 8)
        return cert.verdict, f"{cert.nodes} nodes", None
    obj = ctx.get(item.name)
    if item.kind in ("algebra", "group"):
        size = obj.dim if item.kind == "algebra" else obj.order
        return "Pass", f"valid, size {size}", None
    if item.kind == "bimodule":
        if obj.free_basis is None:
            return "Pass", "valid (no freeness witness, trace not computed)", None
        art = _trace_matrix_json(item.name, obj)
        return ("Pass" if art["oracle_agrees"] else "Fail"), "trace agrees with the oracle", art
    T = loop_transfer(obj)
    ok = T.entries == coset_sum_oracle(obj) and becker_gottlieb_composite(obj) == obj.index
    return ("Pass" if ok else "Fail"), f"index {obj.index}", T.to_json()


def _worker(text: str, base: str, index: int) -> TaskResult:
    doc = parse_dsl(text)
    items = [b for b in doc.body if not isinstance(b, ExprDecl)]
    return run_task(doc, items[index], ModelContext(doc, base))


def run_document(text: str, base: str, source: str, jobs: int = 1) -> RunReport:
    doc = parse_dsl(text)
    items = [b for b in doc.body if not isinstance(b, ExprDecl)]
    report = RunReport(source)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_worker, text, base, i) for i in range(len(items))]
            report.tasks = [f.result() for f in futs]  # input order
    else:
        ctx = ModelContext(doc, base)
        report.tasks = [run_task(doc, it, ctx) for it in items]
    return report


# ---------------------------------------------------------------- subcommands


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit_report(report: RunReport, fmt_: str, out) -> int:
    if fmt_ == "json":
        out.write(json.dumps(report.to_json()) + "\n")
    else:
        out.write(report.to_text())
    bad = report.first_failure()
    if bad is not None:
        sys.stderr.write(f"first failing task: {bad.name} ({bad.verdict})\n")
    return report.exit_code


def cmd_check(args, out) -> int:
    text = _read_text(args.file)
    report = run_document(text, os.path.dirname(os.path.abspath(args.file)), args.file, args.jobs)
    return _emit_report(report, args.format, out)


def cmd_corpus(args, out) -> int:
    report = RunReport("corpus")
    for fname in CORPUS_FILES:
        sub = run_document(shipped_text(fname), ".", fname, args.jobs)
        for t in sub.tasks:
            t.name = f"{fname[:-3]}/{t.name}"
        report.tasks.extend(sub.tasks)
    return _emit_report(report, args.format, out)


def cmd_normalize(args, out) -> int:
    doc = parse_dsl(_read_text(args.file))
    exprs = doc.exprs
    goals = {g.name: g for g in doc.goals}
    if args.expr in exprs:
        nf = normalize(doc.sig, exprs[args.expr])
        out.write(render(nf, unicode=args.unicode) + "\n")
        return EXIT_OK
    if args.expr in goals:
        g = goals[args.expr]
        l, r = normalize(doc.sig, g.lhs), normalize(doc.sig, g.rhs)
        out.write(render(l, unicode=args.unicode) + "\n")
        out.write(render(r, unicode=args.unicode) + "\n")
        out.write(("equal" if l == r else "different") + "\n")
        return EXIT_OK
    raise UsageError(f"no expression or goal named {args.expr!r}")


def cmd_trace(args, out) -> int:
    if args.model != "bimod":
        raise UsageError("only --model bimod is available")
    text = _read_text(args.file)
    base = os.path.dirname(os.path.abspath(args.file))
    if args.file.endswith(".json"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.file}: invalid JSON ({exc.msg})") from None
        mods = [("bimodule", Bimodule.from_json(obj, {}))]
    else:
        doc = parse_dsl(text)
        ctx = ModelContext(doc, base)
        names = [m.name for m in doc.models if m.kind == "bimodule"]
        if args.bimodule:
            if args.bimodule not in names:
                raise UsageError(f"no bimodule named {args.bimodule!r}")
            names = [args.bimodule]
        mods = [(n, ctx.get(n)) for n in names]
    status = EXIT_OK
    for name, M in mods:
        art = _trace_matrix_json(name, M)
        if not art["oracle_agrees"]:
            status = EXIT_FAIL
            sys.stderr.write(f"first failing task: {name} (trace differs from the oracle)\n")
        if args.format == "json":
            out.write(json.dumps(art) + "\n")
        else:
            out.write(f"{name}: HH0({len(art['cols'])}) -> HH0({len(art['rows'])})\n")
            out.write(_table(art["rows"], art["cols"], art["entries"]))
    return status


def _table(rows, cols, entries) -> str:
    head = [""] + list(cols)
    body = [[r] + [str(x) for x in row] for r, row in zip(rows, entries)]
    widths = [max(len(line[c]) for line in [head] + body) for c in range(len(head))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip()
                     for line in [head] + body) + "\n"


def cmd_transfer(args, out) -> int:
    try:
        obj = json.loads(_read_text(args.group))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.group}: invalid JSON ({exc.msg})") from None
    G = FiniteGroup.from_json(obj)
    cover = build_cover(G, parse_subgroup(G, args.subgroup))
    T = loop_transfer(cover)
    if args.format == "json":
        out.write(T.dumps())
        note = sys.stderr
    else:
        out.write(T.to_table())
        note = out
    status = EXIT_OK
    if args.check_bg:
        bg = becker_gottlieb_composite(cover)
        ok = bg == cover.index
        note.write(f"Becker-Gottlieb composite = {bg} (index {cover.index}): {'Pass' if ok else 'Fail'}\n")
        status = status if ok else EXIT_FAIL
    if args.check_euler:
        E = euler_composite(cover)
        n = cover.index
        if G.is_abelian():
            ok = E == [[n if i == j else 0 for j in range(len(E))] for i in range(len(E))]
            note.write(f"Euler composite = {n} * I: {'Pass' if ok else 'Fail'}\n")
            status = status if ok else EXIT_FAIL
        else:
            note.write(f"Euler composite (non-abelian group, no scalar check): {E}\n")
    if args.cross_model:
        rep = cross_model_check(cover)
        note.write(f"cross-model check: {'Pass' if rep.passed else 'Fail'} ({rep.message})\n")
        status = status if rep.passed else EXIT_FAIL
    return status


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shadowtrace", description="Traces in shadowed bicategories and their models.")
    p.add_argument("--version", action="version", version=f"shadowtrace {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("check", help="typecheck a document and verify all of its tasks")
    c.add_argument("file")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--format", choices=("text", "json"), default="text")

    n = sub.add_parser("normalize", help="print the normal form of a named expression")
    n.add_argument("file")
    n.add_argument("--expr", required=True)
    n.add_argument("--unicode", action="store_true")

    t = sub.add_parser("trace", help="HH0 trace matrix of the bimodules in a document")
    t.add_argument("file")
    t.add_argument("--model", default="bimod")
    t.add_argument("--bimodule")
    t.add_argument("--format", choices=("table", "json"), default="table")

    g = sub.add_parser("transfer", help="conjugacy-class transfer of a finite cover")
    g.add_argument("--group", required=True)
    g.add_argument("--subgroup", required=True)
    g.add_argument("--check-bg", action="store_true")
    g.add_argument("--check-euler", action="store_true")
    g.add_argument("--cross-model", action="store_true")
    g.add_argument("--format", choices=("table", "json"), default="table")

    k = sub.add_parser("corpus", help="verify the shipped theorem corpus")
    k.add_argument("--jobs", type=int, default=1)
    k.add_argument("--format", choices=("text", "json"), default="text")
    return p


COMMANDS = {"check": cmd_check, "corpus": cmd_corpus, "normalize": cmd_normalize,
            "trace": cmd_trace, "transfer": cmd_transfer}


def main(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"shadowtrace: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write(f"shadowtrace: parse error: {exc}\n")
        return EXIT_USAGE
    except (GroupError, NotASubgroup, InvalidPresentation, NotFree) as exc:
        sys.stderr.write(f"shadowtrace: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
