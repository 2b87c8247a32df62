"""Acceptance criteria, each at its stated tolerance (all exact) and time limit.

Each criterion is one test named ``test_criterion_<n>_...``; the terminal
summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import json
import random
import time
from pathlib import Path

from gen import SIG, apply_all, random_expr, random_tree_step, random_window_step
from shadowtrace.bimod import (
    direct_sum,
    evaluate_trace,
    hattori_stallings_oracle,
    random_free_bimodule,
    random_free_family,
)
from shadowtrace.dsl import parse_dsl
from shadowtrace.engine import search_equal, verify_script
from shadowtrace.groups import (
    abelian_group,
    becker_gottlieb_composite,
    build_cover,
    cross_model_check,
    cyclic_group,
    euler_composite,
    loop_transfer,
    parse_subgroup,
    random_group,
    random_subgroup,
    rechoose,
    subgroups_of_cyclic,
    symmetric_group,
    transfer_chain,
)
from shadowtrace.normal import normalize
from shadowtrace.rules import builtin_rules
from shadowtrace.terms import typecheck
from shadowtrace.tracelib import CORPUS_FILES, shipped_text, shipped_theorems

GOLDEN = Path(__file__).parent / "golden" / "s3_a3_transfer.json"


def _abelian_covers():
    """Every cyclic group of order <= 64 with every subgroup, plus 50 random non-cyclic pairs."""
    covers = []
    for n in range(1, 65):
        G = cyclic_group(n)
        covers.extend(build_cover(G, K) for K in subgroups_of_cyclic(n))
    rng = random.Random(1)
    shapes = [s for s in _noncyclic_shapes() if _prod(s) <= 64]
    for _ in range(50):
        G = abelian_group(rng.choice(shapes))
        covers.append(build_cover(G, random_subgroup(rng, G, 3)))
    return covers


def _noncyclic_shapes():
    out = []
    for a in range(2, 9):
        for b in range(2, 33):
            if _gcd(a, b) > 1 and a <= b:
                out.append((a, b))
                for c in range(2, 5):
                    out.append((a, b, c))
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _prod(xs):
    p = 1
    for x in xs:
        p *= x
    return p


def _degree_ok(cover) -> bool:
    n = cover.index
    T = loop_transfer(cover)
    for w, cls in enumerate(cover.g_classes):
        meets = cls.rep in set(cover.K)
        if sum(row[w] for row in T.entries) != (n if meets else 0):
            return False
    E = euler_composite(cover)
    m = len(cover.k_classes)
    return E == [[n if i == j else 0 for j in range(m)] for i in range(m)]


def test_criterion_1_covering_space_degrees():
    t0 = time.perf_counter()
    covers = _abelian_covers()
    bad = [(c.G.name, c.K) for c in covers if not _degree_ok(c)]
    elapsed = time.perf_counter() - t0
    print(f"criterion 1: {len(covers)} covers, {len(bad)} failures, {elapsed:.2f}s")
    assert not bad
    assert elapsed < 10.0


def test_criterion_2_s3_a3_golden():
    G = symmetric_group(3)
    T = loop_transfer(build_cover(G, parse_subgroup(G, "a3")))
    assert T.rows == ["e", "(123)", "(132)"]
    assert T.cols == ["e", "(23)", "(123)"]
    # [e] -> 2[e]; [3-cycle] -> [(123)] + [(132)]; [transposition] -> 0
    assert T.entries == [[2, 0, 0], [0, 0, 1], [0, 0, 1]]
    assert T.dumps().encode() == GOLDEN.read_bytes()


def test_criterion_3_becker_gottlieb():
    t0 = time.perf_counter()
    rng = random.Random(3)
    nonabelian = 0
    bad = []
    for _ in range(100):
        G = random_group(rng, 200, abelian=False if rng.random() < 0.7 else None)
        K = random_subgroup(rng, G)
        cover = build_cover(G, K)
        nonabelian += not G.is_abelian()
        if becker_gottlieb_composite(cover) != cover.index:
            bad.append((G.name, G.order, K))
    elapsed = time.perf_counter() - t0
    print(f"criterion 3: 100 covers ({nonabelian} non-abelian), {len(bad)} failures, {elapsed:.2f}s")
    assert nonabelian > 0
    assert not bad
    assert elapsed < 30.0


def test_criterion_4_trace_equals_oracle():
    t0 = time.perf_counter()
    rng = random.Random(4)
    mismatches = 0
    for _ in range(200):
        M = random_free_bimodule(rng, max_dim_a=4, max_dim_r=4, max_dim_m=8)
        assert M.left.dim <= 4 and M.right.dim <= 4 and M.dim <= 8
        if evaluate_trace(M).matrix != hattori_stallings_oracle(M):
            mismatches += 1
    small = [c for c in _abelian_covers() if c.G.order <= 24]
    failed = [(c.G.name, c.K) for c in small if not cross_model_check(c).passed]
    elapsed = time.perf_counter() - t0
    print(f"criterion 4: 200 bimodules ({mismatches} mismatches), {len(small)} covers "
          f"({len(failed)} cross-model failures), {elapsed:.2f}s")
    assert mismatches == 0
    assert not failed
    assert elapsed < 60.0


def test_criterion_5_additivity_and_functoriality():
    rng = random.Random(5)
    for _ in range(100):
        M, N = random_free_family(rng, 2, max_dim_m=4)
        S = direct_sum(M, N)
        assert evaluate_trace(S).matrix == evaluate_trace(M).matrix + evaluate_trace(N).matrix
    chains = 0
    while chains < 50:
        G = random_group(rng, 120)
        H = random_subgroup(rng, G)
        K = G.generated(rng.sample(H, min(len(H), rng.randint(0, 2))))
        direct, via = transfer_chain(G, K, H)
        assert direct == via, (G.name, H, K)
        chains += 1


def test_criterion_6_symbolic_corpus():
    t0 = time.perf_counter()
    thms = shipped_theorems()
    for t in thms:
        assert verify_script(t.sig, t.rules, t.script).proved, t.name
    names = {t.name for t in thms}
    assert {"theta_squared", "pretransfer", "theta_triangle", "unit_trace",
            "trace_functoriality", "composite_triangle_1", "composite_triangle_2"} <= names
    searched = set()
    for fname in CORPUS_FILES:
        doc = parse_dsl(shipped_text(fname))
        rules = builtin_rules(doc.sig)
        for g in doc.goals:
            if g.kind != "search":
                continue
            cert = search_equal(doc.sig, rules, g.lhs, g.rhs, max_nodes=100_000, max_depth=8)
            assert cert.proved, g.name
            assert cert.nodes <= 100_000 and cert.depth <= 8
            verify_script(doc.sig, rules, cert.script)
            searched.add(g.name)
    assert searched == {"theta_squared_search", "composite_triangle_1_search",
                        "composite_triangle_2_search"}
    elapsed = time.perf_counter() - t0
    print(f"criterion 6: {len(thms)} scripts, {len(searched)} searches, {elapsed:.2f}s")
    assert elapsed < 20.0


def test_criterion_7_engine_soundness():
    rng = random.Random(7)
    rules = builtin_rules(SIG)
    tree_steps = window_steps_applied = 0
    for _ in range(10_000):
        e = random_expr(rng)
        b = typecheck(SIG, e)
        st = random_tree_step(rng, e)
        e2 = apply_all(rules, e, [st])
        assert typecheck(SIG, e2) == b
        tree_steps += 1
        ws = random_window_step(rng, rules, e)
        if ws is not None:
            assert typecheck(SIG, apply_all(rules, e, ws)) == b
            window_steps_applied += 1
        nf = normalize(SIG, e)
        assert normalize(SIG, nf) == nf
        assert typecheck(SIG, nf) == b
    assert window_steps_applied > 1000
    # representative independence of the transfer
    covers = [build_cover(symmetric_group(3), parse_subgroup(symmetric_group(3), "a3"))]
    for _ in range(10):
        G = random_group(rng, 60)
        covers.append(build_cover(G, random_subgroup(rng, G)))
    for cover in covers:
        base = loop_transfer(cover).entries
        for _ in range(100):
            other = rechoose(cover, rng)
            reps = [rng.choice(c.members) for c in cover.g_classes]
            assert loop_transfer(other, reps).entries == base
    print(f"criterion 7: {tree_steps} tree steps, {window_steps_applied} window rewrites, "
          f"{len(covers)} covers x 100 re-choices")


def test_golden_is_valid_json():
    json.loads(GOLDEN.read_text())
