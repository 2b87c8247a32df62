from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from gen import SIG, apply_all, random_expr, random_tree_step, random_window_step
from shadowtrace.dsl import parse_dsl, parse_expr, parse_steps
from shadowtrace.engine import (
    ProofScript,
    ScriptBuilder,
    Step,
    StepMismatch,
    search_equal,
    verify_script,
)
from shadowtrace.normal import flatten, normalize
from shadowtrace.rules import builtin_rules
from shadowtrace.tracelib import shipped_text, shipped_theorems
from shadowtrace.terms import Gen, Id, OneCell, TypeCheckError, VComp, render, typecheck

TEXT = """\
0cell A, B;
1cell X : A -> B;
1cell Y : B -> A;
2cell f : X => X;
2cell g : X => X;
dualpair p : (X, Y);
shadow;
"""
DOC = parse_dsl(TEXT)
S = DOC.sig
RULES = builtin_rules(S)
X = S.word("X")


def e(text):
    return parse_expr(text, S)


class TestBuiltinRules:
    def test_no_shadow_means_no_shadow_axioms(self):
        sig = parse_dsl("0cell A, B;\n1cell X : A -> B;\n1cell Y : B -> A;\ndualpair p : (X, Y);\n").sig
        names = set(builtin_rules(sig).names())
        assert {"R1[p]", "R2[p]", "R5", "R5x", "R6.vl", "R6.hr"} <= names
        assert not any(n.startswith(("R3", "R4", "R7", "R9")) for n in names)

    def test_shadow_axioms_present(self):
        names = set(RULES.names())
        assert {"R3", "R4a", "R4b", "R7a", "R7b"} <= names
        assert RULES["R9"].derived and RULES["R9"].certificate is not None

    def test_symmetry_rules_per_flagged_zero_cell(self):
        sig = parse_dsl("0cell A, B;\n1cell X : A -> B;\nsymmetric B;\n").sig
        names = builtin_rules(sig).names()
        assert "R8[B].sym" in names and "R8[B].hexX" in names
        assert not any(n.startswith("R8[A]") for n in names)

    def test_derived_theta_squared_certificate_replays(self):
        fname, goal = RULES["R9"].certificate
        assert f"prove {goal} :" in shipped_text(fname)
        thm = next(t for t in shipped_theorems() if t.name == goal)
        assert verify_script(thm.sig, thm.rules, thm.script).proved
        used = {s.rule for s in thm.script.steps}
        assert used <= {"FLAT", "NF", "COH", "R3", "R4a", "R4b"}


class TestVerify:
    def test_unit_law(self):
        script = ProofScript((VComp(Id(X), Id(X)), Id(X)), [Step.make("R6.vl", (), {"f": Id(X)})])
        assert verify_script(S, RULES, script).proved

    def test_triangle_identity(self):
        lhs = e("(coev[p] (x) id[X]) ; (id[X] (x) eval[p])")
        steps = parse_steps("R1[p] @ / { W1=U[A], W2=U[B] }", S, RULES)
        assert verify_script(S, RULES, ProofScript((lhs, Id(X)), steps)).proved

    def test_no_redex(self):
        lhs = e("f ; g")
        steps = parse_steps("R1[p] @ / { W1=U[A], W2=U[B] }", S, RULES)
        with pytest.raises(StepMismatch) as exc:
            verify_script(S, RULES, ProofScript((lhs, Id(X)), steps))
        assert exc.value.index == 0 and "no redex" in exc.value.reason

    def test_wrong_final_expression(self):
        script = ProofScript((VComp(Id(X), Gen("f")), Gen("g")), [Step.make("R6.vl", (), {"f": Gen("f")})])
        with pytest.raises(StepMismatch) as exc:
            verify_script(S, RULES, script)
        assert exc.value.index == 1

    def test_goal_boundaries_must_agree(self):
        with pytest.raises(TypeCheckError):
            verify_script(S, RULES, ProofScript((Id(X), e("id[U[A]]")), []))

    def test_unknown_rule_and_metavariable(self):
        with pytest.raises(StepMismatch, match="unknown rule"):
            verify_script(S, RULES, ProofScript((Id(X), Id(X)), [Step.make("R42", (), {})]))
        with pytest.raises(StepMismatch, match="no metavariable"):
            verify_script(S, RULES, ProofScript((Id(X), Id(X)), [Step.make("R6.vl", (), {"q": Id(X)})]))

    def test_bad_position(self):
        with pytest.raises(StepMismatch, match="bad position"):
            verify_script(S, RULES, ProofScript((Id(X), Id(X)), [Step.make("NF", (3, 1), {})]))

    def test_coh_needs_equal_normal_forms(self):
        ok = ProofScript((e("f ; id[X]"), Gen("f")), [Step.make("COH", (), {"to": Gen("f")})])
        assert verify_script(S, RULES, ok).proved
        bad = ProofScript((Gen("f"), Gen("g")), [Step.make("COH", (), {"to": Gen("g")})])
        with pytest.raises(StepMismatch, match="coherence"):
            verify_script(S, RULES, bad)

    def test_inverse_step(self):
        script = ProofScript((Gen("f"), VComp(Id(X), Gen("f"))),
                             [Step.make("R6.vl", (), {"f": Gen("f")}, inverse=True)])
        assert verify_script(S, RULES, script).proved

    def test_step_text_round_trip(self):
        st_ = Step.make("R1[p]", (0, 1), {"W1": OneCell.unit("A"), "W2": OneCell.unit("B")}, True)
        assert st_.to_text() == "R1[p]^-1 @ /0/1 { W1=U[A], W2=U[B] }"
        assert parse_steps(st_.to_text(), S, RULES) == [st_]

    def test_replay_does_not_mutate(self):
        lhs = e("(coev[p] (x) id[X]) ; (id[X] (x) eval[p])")
        script = ProofScript((lhs, Id(X)), parse_steps("R1[p] @ / { W1=U[A], W2=U[B] }", S, RULES))
        before = (render(lhs), script.to_text())
        verify_script(S, RULES, script)
        verify_script(S, RULES, script)
        assert (render(lhs), script.to_text()) == before


class TestSearch:
    def test_theta_squared(self):
        lhs, rhs = e("theta[X, Y] ; theta[Y, X]"), e("sid[X (x) Y]")
        cert = search_equal(S, RULES, lhs, rhs, max_depth=6)
        assert cert.proved and cert.depth <= 6
        verify_script(S, RULES, cert.script)

    def test_identical_sides(self):
        cert = search_equal(S, RULES, Gen("f"), Gen("f"))
        assert cert.proved and cert.script.steps == []

    def test_free_generators_unknown(self):
        assert search_equal(S, RULES, Gen("f"), Gen("g")).verdict == "Unknown"

    def test_budget_exhaustion_is_unknown(self):
        lhs, rhs = e("theta[X, Y] ; theta[Y, X]"), e("sid[X (x) Y]")
        assert search_equal(S, RULES, lhs, rhs, max_nodes=2).verdict == "Unknown"

    def test_symmetry(self):
        pairs = [
            (e("theta[X, Y] ; theta[Y, X]"), e("sid[X (x) Y]")),
            (Gen("f"), Gen("g")),
            (e("(coev[p] (x) id[X]) ; (id[X] (x) eval[p])"), Id(X)),
        ]
        for lhs, rhs in pairs:
            a = search_equal(S, RULES, lhs, rhs)
            b = search_equal(S, RULES, rhs, lhs)
            assert a.verdict == b.verdict
            if a.proved:
                verify_script(S, RULES, a.script)
                verify_script(S, RULES, b.script)


class TestNormalize:
    def test_examples(self):
        assert normalize(S, e("f ; id[X]")) == Gen("f")
        assert normalize(S, e("id[U[A]] (x) f")) == Gen("f")
        assert normalize(S, e("f ; (g ; f)")) == e("f ; g ; f")

    def test_interchange_normal_form(self):
        a = normalize(S, e("(f (x) id[Y]) ; (id[X] (x) id[Y])"))
        b = normalize(S, e("f (x) id[Y]"))
        assert a == b


class TestBuilder:
    def test_swap_and_script(self):
        sig = parse_dsl("0cell A;\n1cell X : A -> A;\n2cell f : X => X;\n2cell g : X => X;\n").sig
        rules = builtin_rules(sig)
        lhs = parse_expr("f (x) g", sig)
        b = ScriptBuilder(sig, rules, lhs).flat()
        b.swap(0)
        rhs = b.expr
        assert rhs != lhs
        assert verify_script(sig, rules, b.script(rhs)).proved


@given(st.randoms(use_true_random=False))
def test_rule_instances_preserve_boundaries(rng):
    e_ = random_expr(rng)
    b = typecheck(SIG, e_)
    assert typecheck(SIG, apply_all(builtin_rules(SIG), e_, [random_tree_step(rng, e_)])) == b
    ws = random_window_step(rng, builtin_rules(SIG), e_)
    if ws is not None:
        assert typecheck(SIG, apply_all(builtin_rules(SIG), e_, ws)) == b


@given(st.randoms(use_true_random=False))
def test_normalize_idempotent_and_flatten_sound(rng):
    e_ = random_expr(rng)
    nf = normalize(SIG, e_)
    assert normalize(SIG, nf) == nf
    assert typecheck(SIG, flatten(SIG, e_)) == typecheck(SIG, e_)
    assert normalize(SIG, flatten(SIG, e_)) == nf


def test_normalize_stable_under_signature_reordering():
    rng = random.Random(5)
    text = parse_dsl("""\
0cell B, A;
1cell Z : A -> A;
1cell Y : B -> A;
1cell X : A -> B;
2cell k : Y (x) X => U[B];
2cell h : Z => Z (x) Z;
2cell g : X (x) Y => Z;
2cell f : X => X;
dualpair p : (X, Y);
shadow;
symmetric A;
""").sig
    for _ in range(100):
        ex = random_expr(rng)
        assert normalize(text, ex) == normalize(SIG, ex)
