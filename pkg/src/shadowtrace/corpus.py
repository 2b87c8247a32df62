"""Generator for the shipped theorem files under ``theorems/``.

Each file is produced by building its proof with :class:`ScriptBuilder`
and printing the resulting document, so the files are in canonical
printed form and re-parse to the same document.
"""

from __future__ import annotations

from .dsl import DslDocument, Goal, parse_dsl, parse_expr, parse_word, print_dsl
from .engine import ScriptBuilder
from .rules import builtin_rules
from .terms import Coev, Eval, OneCell, SComp, SId, Theta
from .tracelib import (
    build_trace,
    compose_dual_pairs,
    declared_pair,
    trace_of_identity,
    triangle_goals,
    unit_pair,
)

BASE = """\
0cell B, E;
1cell S_f : B -> E;
1cell fS : E -> B;
1cell DS_f : E -> B;
dualpair pf : (fS, S_f);
dualpair pS : (S_f, DS_f);
shadow;
symmetric B;
"""


def _doc(header: str, sig_text: str, goals: list) -> str:
    doc = parse_dsl(sig_text)
    lines = tuple("# " + h if h else "#" for h in header.strip().splitlines())
    return print_dsl(DslDocument(doc.sig, goals, lines))


def theta_squared() -> str:
    text = "0cell A, B;\n1cell X : A -> B;\n1cell Y : B -> A;\nshadow;\n"
    sig = parse_dsl(text).sig
    rules = builtin_rules(sig)
    lhs = parse_expr("theta[X, Y] ; theta[Y, X]", sig)
    rhs = parse_expr("sid[X (x) Y]", sig)
    A = OneCell.unit("A")
    X, Y = parse_word("X", sig), parse_word("Y", sig)
    b = ScriptBuilder(sig, rules, lhs).at("R3", 0, X=A, Y=X, Z=Y).at("R4b", 0, X=X * Y)
    goals = [
        Goal("prove", "theta_squared", lhs, rhs, tuple(b.script(rhs).steps)),
        Goal("search", "theta_squared_search", lhs, rhs, budget=100000, depth=8),
    ]
    return _doc("The cyclic rotation is an involution.", text, goals)


def unit_trace() -> str:
    text = "0cell A;\nshadow;\n"
    sig = parse_dsl(text).sig
    rules = builtin_rules(sig)
    lhs = trace_of_identity(sig, unit_pair(sig, "A"))
    rhs = SId(OneCell.unit("A"))
    b = ScriptBuilder(sig, rules, lhs).nf().at("R4a", 0, X=OneCell.unit("A"))
    goals = [Goal("prove", "unit_trace", lhs, rhs, tuple(b.script(rhs).steps))]
    return _doc("The trace of the unit pair is the identity shadow morphism.", text, goals)


def pretransfer() -> str:
    sig = parse_dsl(BASE).sig
    rules = builtin_rules(sig)
    first = (
        "coev[pS] ; id[S_f] (x) coev[pf] (x) id[DS_f] ; "
        "gamma[S_f (x) fS, S_f (x) DS_f]"
    )
    six = parse_expr(
        first + " ; id[S_f (x) DS_f (x) S_f] (x) coev[pf] (x) id[fS]"
        " ; id[S_f] (x) eval[pS] (x) id[fS (x) S_f (x) fS]"
        " ; eval[pf] (x) id[S_f (x) fS]", sig)
    five = parse_expr(first + " ; id[S_f] (x) eval[pS] (x) id[fS]", sig)
    b = ScriptBuilder(sig, rules, six).flat()
    b.swap(3)
    b.find("R2[pf]", W1=OneCell.unit("B"), W2=parse_word("fS", sig))
    goals = [Goal("prove", "pretransfer", six, five, tuple(b.script(five).steps))]
    header = (
        "Six-stage and five-stage forms of the pretransfer agree.\n"
        "B is the base, E the total space; gamma is the symmetry at B."
    )
    return _doc(header, BASE, goals)


def theta_triangle() -> str:
    sig = parse_dsl(BASE).sig
    rules = builtin_rules(sig)
    lhs = parse_expr("theta[S_f (x) fS (x) S_f, DS_f] ; theta[DS_f (x) S_f (x) fS, S_f]", sig)
    rhs = parse_expr("theta[S_f (x) fS, S_f (x) DS_f]", sig)
    w = lambda t: parse_word(t, sig)  # noqa: E731
    b = ScriptBuilder(sig, rules, lhs).at("R3", 0, X=w("S_f (x) fS"), Y=w("S_f"), Z=w("DS_f"))
    goals = [Goal("prove", "theta_triangle", lhs, rhs, tuple(b.script(rhs).steps))]
    return _doc("Two rotations of a three-fold word compose to a single rotation.", BASE, goals)


def reidemeister_chase() -> str:
    sig = parse_dsl(BASE).sig
    rules = builtin_rules(sig)
    right = parse_expr(
        "sh[coev[pS]] ; sh[id[S_f] (x) coev[pf] (x) id[DS_f]] ; "
        "theta[S_f (x) fS, S_f (x) DS_f] ; sh[id[S_f] (x) eval[pS] (x) id[fS]]", sig)
    left = parse_expr(
        "sh[coev[pS]] ; theta[S_f, DS_f] ; sh[eval[pS]] ; sh[coev[pf]] ; theta[fS, S_f]", sig)
    w = lambda t: parse_word(t, sig)  # noqa: E731
    b = ScriptBuilder(sig, rules, right).flat()
    b.at("R3", 2, inverse=True, X=w("S_f (x) fS"), Y=w("S_f"), Z=w("DS_f"))
    b.find("R7a", g=Coev("pf"), Y=w("DS_f"))
    b.find("R7a", inverse=True, g=Eval("pS"), Y=w("S_f"))
    b.swap(2)
    goals = [Goal("prove", "reidemeister_chase", right, left, tuple(b.script(left).steps))]
    header = (
        "The transfer square closes: rotating after the inner coevaluation\n"
        "equals evaluating first and coevaluating the other pair."
    )
    return _doc(header, BASE, goals)


FUNCT = """\
0cell A, B, C;
1cell X1 : A -> B;
1cell Y1 : B -> A;
1cell X2 : B -> C;
1cell Y2 : C -> B;
dualpair p1 : (X1, Y1);
dualpair p2 : (X2, Y2);
shadow;
"""


def trace_functoriality() -> str:
    sig = parse_dsl(FUNCT).sig
    rules = builtin_rules(sig)
    h1, h2 = declared_pair(sig, "p1"), declared_pair(sig, "p2")
    h = compose_dual_pairs(sig, h1, h2)
    lhs = trace_of_identity(sig, h)
    rhs = SComp(trace_of_identity(sig, h1), trace_of_identity(sig, h2))
    w = lambda t: parse_word(t, sig)  # noqa: E731
    b = ScriptBuilder(sig, rules, lhs).flat()
    i = next(k for k, it in enumerate(b.items) if isinstance(it, Theta))
    b.at("R9", i + 1, inverse=True, X=w("Y2 (x) Y1 (x) X1"), Y=w("X2"))
    b.at("R3", i, X=w("X1"), Y=w("X2"), Z=w("Y2 (x) Y1"))
    b.find("R7b", X=w("X1"), g=Coev("p2"))
    b.find("R7b", inverse=True, X=w("X2"), g=Eval("p1"))
    b.swap(i)
    goals = [Goal("prove", "trace_functoriality", lhs, rhs, tuple(b.script(rhs).steps))]
    for k, (l, r) in enumerate(triangle_goals(h), start=1):
        goals.append(Goal("prove", f"composite_triangle_{k}", l, r, tuple(h.certificates[k - 1].steps)))
        goals.append(Goal("search", f"composite_triangle_{k}_search", l, r, budget=100000, depth=8))
    header = (
        "The trace of the identity of a composite pair is the composite of the traces,\n"
        "and the composite pair satisfies both triangle identities."
    )
    return _doc(header, FUNCT, goals)


GENERATORS = {
    "theta_squared.st": theta_squared,
    "unit_trace.st": unit_trace,
    "pretransfer.st": pretransfer,
    "theta_triangle.st": theta_triangle,
    "reidemeister_chase.st": reidemeister_chase,
    "trace_functoriality.st": trace_functoriality,
}


def build_corpus() -> dict[str, str]:
    return {name: fn() for name, fn in GENERATORS.items()}


if __name__ == "__main__":  # pragma: no cover
    import pathlib

    out = pathlib.Path(__file__).parent / "theorems"
    for name, text in build_corpus().items():
        (out / name).write_text(text, encoding="utf-8")
        print("wrote", out / name)
