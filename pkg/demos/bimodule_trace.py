"""Traces of bimodules at the level of HH_0.

Three small cases, each printed next to the direct oracle.
Run with ``python demos/bimodule_trace.py``.
"""

from __future__ import annotations

import random

from shadowtrace.bimod import (
    cyclic_group_algebra,
    evaluate_trace,
    hattori_stallings_oracle,
    matrix_json,
    random_free_bimodule,
    regular_bimodule,
    truncated_poly,
)
from shadowtrace.groups import build_cover, cyclic_group, group_bimodule, parse_subgroup


def show(label, M) -> None:
    res = evaluate_trace(M)
    oracle = hattori_stallings_oracle(M)
    print(f"{label}: HH0 dims {res.hh_left.dim} -> {res.hh_right.dim}")
    print(f"  composite: {matrix_json(res.matrix)}")
    print(f"  oracle:    {matrix_json(oracle)}")
    print(f"  agree: {res.matrix == oracle}")


def main() -> None:
    show("Q[x]/x^2 over itself", regular_bimodule(truncated_poly(2)))
    show("QZ3 over itself", regular_bimodule(cyclic_group_algebra(3)))
    G = cyclic_group(4)
    _A, _R, M = group_bimodule(build_cover(G, parse_subgroup(G, "{0,2}")))
    show("QZ4 over (QZ4, QZ2)", M)
    rng = random.Random(0)
    show("a random free bimodule", random_free_bimodule(rng, 3, 3, 6))


if __name__ == "__main__":
    main()
