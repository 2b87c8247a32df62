"""The loop transfer of a finite cover and the identities it satisfies.

Run with ``python demos/covering_transfer.py``.
"""

from __future__ import annotations

from shadowtrace.groups import (
    becker_gottlieb_composite,
    build_cover,
    cross_model_check,
    cyclic_group,
    euler_composite,
    loop_transfer,
    parse_subgroup,
    symmetric_group,
    transfer_chain,
)


def report(G, spec: str) -> None:
    cover = build_cover(G, parse_subgroup(G, spec))
    T = loop_transfer(cover)
    print(f"{G.name} / {spec}  (index {cover.index})")
    print(T.to_table(), end="")
    print(f"  Becker-Gottlieb composite: {becker_gottlieb_composite(cover)}")
    print(f"  Euler composite: {euler_composite(cover)}")
    print(f"  agrees with the bimodule model: {cross_model_check(cover).passed}\n")


def main() -> None:
    report(cyclic_group(4), "{0,2}")
    # non-abelian: the Euler composite is no longer a multiple of the identity
    report(symmetric_group(3), "a3")
    G = symmetric_group(4)
    K, H = parse_subgroup(G, "<(12)(34)>"), parse_subgroup(G, "a4")
    direct, via = transfer_chain(G, K, H)
    print(f"S4 > A4 > <(12)(34)>: direct == through A4: {direct == via}")


if __name__ == "__main__":
    main()
