from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from gen import SIG, random_expr
from shadowtrace.dsl import parse_dsl, parse_expr, print_expr
from shadowtrace.terms import (
    BoundaryMismatch,
    Coev,
    Eval,
    Gamma,
    Gen,
    HComp,
    Id,
    OneCell,
    SComp,
    Sh,
    ShadowDisabled,
    ShadowOnNonEndo,
    SId,
    Signature,
    SymmetryNotDeclared,
    Theta,
    UnknownName,
    VComp,
    render,
    typecheck,
    typecheck_2cell,
    typecheck_shadow,
    validate_signature,
)

X = OneCell("A", "B", ("X",))
Y = OneCell("B", "A", ("Y",))
UA, UB = OneCell.unit("A"), OneCell.unit("B")


def _sig(**kw):
    base = dict(
        zero_cells=("A", "B"),
        one_cell_gens=(("X", "A", "B"), ("Y", "B", "A")),
        dual_pairs=(("p", X, Y),),
        shadow_enabled=True,
    )
    base.update(kw)
    return Signature(**base)


class TestOneCell:
    def test_unit_is_endo(self):
        assert UA.is_unit and UA.is_endo and len(UA) == 0

    def test_composition_concatenates(self):
        assert (X * Y) == OneCell("A", "A", ("X", "Y"))
        assert UA * X == X and X * UB == X

    def test_composition_checks_boundary(self):
        with pytest.raises(BoundaryMismatch):
            X * X


class TestValidateSignature:
    def test_well_typed_pair(self):
        assert validate_signature(_sig()) == []

    def test_pair_boundary_mismatch(self):
        bad = _sig(one_cell_gens=(("X", "A", "B"), ("Y", "A", "B")),
                   dual_pairs=(("p", X, OneCell("A", "B", ("Y",))),))
        msgs = [d.message for d in validate_signature(bad)]
        assert msgs == ["dual pair boundary mismatch"]

    def test_duplicate_generator(self):
        bad = _sig(one_cell_gens=(("X", "A", "B"), ("Y", "B", "A"), ("X", "A", "B")))
        msgs = [d.message for d in validate_signature(bad)]
        assert msgs == ["duplicate generator"]

    def test_undeclared_zero_cell(self):
        bad = _sig(symmetric_endo_homs=frozenset({"C"}))
        assert [d.location for d in validate_signature(bad)] == ["symmetric C"]


class TestTypecheck:
    def test_identity_of_unit(self):
        assert typecheck_2cell(_sig(), Id(UA)) == (UA, UA)

    def test_coev_whiskered(self):
        assert typecheck_2cell(_sig(), HComp(Coev("p"), Id(X))) == (X, X * Y * X)

    def test_eval_then_coev_mismatch(self):
        with pytest.raises(BoundaryMismatch) as exc:
            typecheck_2cell(_sig(), VComp(Eval("p"), Coev("p")))
        assert exc.value.position == ()

    def test_error_position_points_into_term(self):
        e = VComp(Id(X), VComp(Eval("p"), Coev("p")))
        with pytest.raises(BoundaryMismatch) as exc:
            typecheck_2cell(_sig(), e)
        assert exc.value.position == (1,)

    def test_unknown_generator(self):
        with pytest.raises(UnknownName):
            typecheck_2cell(_sig(), Gen("nope"))

    def test_gamma_needs_symmetric_flag(self):
        with pytest.raises(SymmetryNotDeclared):
            typecheck_2cell(_sig(), Gamma(X * Y, X * Y))
        sig = _sig(symmetric_endo_homs=frozenset({"A"}))
        assert typecheck_2cell(sig, Gamma(X * Y, UA)) == (X * Y, X * Y)

    def test_shadow_of_unit_identity(self):
        assert typecheck_shadow(_sig(), Sh(Id(UA))) == (UA, UA)

    def test_theta_boundary(self):
        assert typecheck_shadow(_sig(), Theta(X, Y)) == (X * Y, Y * X)

    def test_shadow_on_non_endo(self):
        with pytest.raises(ShadowOnNonEndo):
            typecheck_shadow(_sig(), Sh(Id(X)))
        with pytest.raises(ShadowOnNonEndo):
            typecheck_shadow(_sig(), SId(X))

    def test_shadow_disabled(self):
        with pytest.raises(ShadowDisabled):
            typecheck_shadow(_sig(shadow_enabled=False), SId(UA))

    def test_shadow_composite_chains(self):
        u = SComp(Theta(X, Y), Theta(Y, X))
        assert typecheck_shadow(_sig(), u) == (X * Y, X * Y)
        with pytest.raises(BoundaryMismatch):
            typecheck_shadow(_sig(), SComp(Theta(X, Y), Theta(X, Y)))


@given(st.randoms(use_true_random=False))
def test_typing_is_deterministic_and_unit_insensitive(rng):
    e = random_expr(rng)
    b = typecheck(SIG, e)
    assert typecheck(SIG, e) == b
    if not isinstance(e, (Sh, Theta, SComp, SId)):
        s, t = b
        padded = VComp(Id(s), HComp(Id(OneCell.unit(s.src)), e))
        assert typecheck(SIG, padded) == b


@given(st.randoms(use_true_random=False))
def test_render_parse_round_trip(rng):
    e = random_expr(rng)
    assert parse_expr(print_expr(e), SIG) == e
    assert parse_expr(render(e, unicode=True), SIG) == e


def test_render_parenthesizes_right_nesting():
    f = Gen("f")
    sig = parse_dsl("0cell A, B;\n1cell X : A -> B;\n2cell f : X => X;\n").sig
    assert render(VComp(f, VComp(f, f))) == "f ; (f ; f)"
    assert render(VComp(VComp(f, f), f)) == "f ; f ; f"
    assert parse_expr("f ; (f ; f)", sig) == VComp(f, VComp(f, f))


def test_random_expressions_are_well_typed():
    rng = random.Random(11)
    for _ in range(200):
        typecheck(SIG, random_expr(rng))
