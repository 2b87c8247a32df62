"""Build the trace of an identity 2-cell and prove facts about it.

Run with ``python demos/trace_of_identity.py``.
"""

from __future__ import annotations

from shadowtrace.dsl import parse_dsl
from shadowtrace.engine import search_equal, verify_script
from shadowtrace.terms import Id, OneCell, SId, render, render_1cell
from shadowtrace.tracelib import (
    build_trace,
    compose_dual_pairs,
    declared_pair,
    rules_for,
    unit_pair,
)

SIG = parse_dsl("""\
0cell A, B, C;
1cell X : A -> B;
1cell Y : B -> A;
1cell V : B -> C;
1cell W : C -> B;
dualpair p : (X, Y);
dualpair q : (V, W);
shadow;
""").sig


def main() -> None:
    p = declared_pair(SIG, "p")
    tr = build_trace(SIG, p, Id(p.x))
    print("trace of id[X], stage by stage:")
    print("  " + render(tr.result, unicode=True))

    # The unit pair contributes nothing: its trace reduces to the identity.
    u = unit_pair(SIG, "A")
    unit_tr = build_trace(SIG, u, Id(OneCell.unit("A"))).result
    cert = search_equal(SIG, rules_for(SIG), unit_tr, SId(OneCell.unit("A")))
    print(f"\ntrace of the unit pair == sid[U[A]]: {cert.verdict} "
          f"({cert.nodes} nodes, depth {cert.depth})")
    print(cert.script.to_text())

    # Composite pairs carry their own triangle certificates.
    h = compose_dual_pairs(SIG, p, declared_pair(SIG, "q"))
    rules = rules_for(SIG, h)
    print(f"\ncomposite pair {h.name}: X = {render_1cell(h.x)}, Y = {render_1cell(h.y)}")
    for n, script in enumerate(h.certificates, 1):
        ok = verify_script(SIG, rules, script).proved
        print(f"  triangle {n}: {len(script.steps)} steps, replays: {ok}")


if __name__ == "__main__":
    main()
