from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shadowtrace.bimod import (
    Bimodule,
    InvalidPresentation,
    NotFree,
    cyclic_group_algebra,
    direct_sum,
    dualize,
    evaluate_trace,
    free_from_rep,
    hattori_stallings_oracle,
    hh0_of_algebra,
    matrix_algebra,
    random_free_bimodule,
    rationals,
    regular_bimodule,
    shadow_hh0,
    swap_map,
    tensor_over,
    truncated_poly,
)
from shadowtrace.groups import (
    build_cover,
    cyclic_group,
    group_bimodule,
    parse_subgroup,
    rechoose,
    symmetric_group,
)
from shadowtrace.linalg import LinMap

ONE = Fraction(1)


def ident_rep(A, k):
    """``A`` acting on ``R^k`` by scalars, for ``A = Q``."""
    return [[[{0: ONE} if a == b else {} for b in range(k)] for a in range(k)]]


def qn(n):
    Q = rationals()
    return free_from_rep(Q, Q, ident_rep(Q, n)) if n else Bimodule(Q, Q, 0, [[]], [[]], [])


def scalar(n):
    return LinMap.from_rows([[n]])


class TestTensor:
    def test_q2_tensor_q3(self):
        Q = rationals()
        M = free_from_rep(Q, Q, ident_rep(Q, 2))
        N = free_from_rep(Q, Q, ident_rep(Q, 3))
        assert tensor_over(Q, M, N).bimodule.dim == 6

    def test_group_algebra_over_subgroup(self):
        G = cyclic_group(4)
        _A, R, M = group_bimodule(build_cover(G, parse_subgroup(G, "{0,2}")))
        T = tensor_over(R, M, regular_bimodule(R))
        assert T.bimodule.dim == 4
        general = Bimodule(M.left, M.right, M.dim, M.left_action, M.right_action, None)
        assert tensor_over(R, general, regular_bimodule(R)).bimodule.dim == 4

    def test_unit_law_dimension(self):
        A = truncated_poly(3)
        M = regular_bimodule(A)
        assert tensor_over(A, M, regular_bimodule(A)).bimodule.dim == M.dim

    def test_result_is_a_valid_bimodule(self):
        rng = random.Random(2)
        for _ in range(10):
            M = random_free_bimodule(rng, 3, 3, 6)
            D = dualize(M)
            D.coev_tensor.bimodule.validate()
            D.eval_tensor.bimodule.validate()


class TestHH0:
    def test_rationals(self):
        assert hh0_of_algebra(rationals()).dim == 1

    def test_symmetric_group_algebra_counts_classes(self):
        G = symmetric_group(3)
        A, _R, M = group_bimodule(build_cover(G, parse_subgroup(G, "whole")))
        assert shadow_hh0(A, M).dim == 3

    def test_commutative_algebra(self):
        assert hh0_of_algebra(truncated_poly(2)).dim == 2
        assert hh0_of_algebra(cyclic_group_algebra(4)).dim == 4

    def test_matrix_algebra_is_one_dimensional(self):
        assert hh0_of_algebra(matrix_algebra(2)).dim == 1

    def test_representatives_are_pivot_minimal(self):
        H = hh0_of_algebra(matrix_algebra(2))
        assert H.representatives == [0]


class TestDuality:
    def test_regular_is_self_dual(self):
        A = truncated_poly(2)
        D = dualize(regular_bimodule(A))
        assert D.DM.dim == A.dim
        assert D.coev_tensor.bimodule.dim == A.dim == D.eval_tensor.bimodule.dim

    def test_q3_coevaluation(self):
        D = dualize(qn(3))
        assert D.coev_tensor.bimodule.dim == 9
        # coev(1) = sum_i e_i (x) e_i^*: three nonzero coordinates, each 1
        assert sorted(D.coev_map.cols[0].values()) == [ONE] * 3
        # eval pairs e_i^* with e_j to delta_ij
        assert D.eval_map.rows() == [[ONE if j in (0, 4, 8) else 0 for j in range(9)]]

    def test_s3_over_a3_with_chosen_reps(self):
        G = symmetric_group(3)
        K = parse_subgroup(G, "a3")
        cover = build_cover(G, K, reps=[G.identity, G.element("(12)")])
        _A, _R, M = group_bimodule(cover)
        D = dualize(M)
        assert D.witness.k == 2

    def test_bad_witness_rejected(self):
        A = truncated_poly(2)
        M = regular_bimodule(A)
        broken = Bimodule(A, A, M.dim, M.left_action, M.right_action, [{1: ONE}])
        with pytest.raises(NotFree):
            dualize(broken)

    def test_missing_witness(self):
        G = cyclic_group(4)
        _A, _R, M = group_bimodule(build_cover(G, parse_subgroup(G, "{0,2}")))
        M = Bimodule(M.left, M.right, M.dim, M.left_action, M.right_action, None)
        with pytest.raises(NotFree):
            evaluate_trace(M)

    def test_invalid_presentation(self):
        Q = rationals()
        with pytest.raises(InvalidPresentation):
            Bimodule(Q, Q, 1, [[{}]], [[{0: ONE}]], None).validate()


class TestTrace:
    @pytest.mark.parametrize("n", [0, 1, 2, 5])
    def test_free_rational_module_gives_rank(self, n):
        M = qn(n)
        assert evaluate_trace(M).matrix == scalar(n)
        assert hattori_stallings_oracle(M) == scalar(n)

    @pytest.mark.parametrize("A", [rationals(), truncated_poly(2), cyclic_group_algebra(3), matrix_algebra(2)],
                             ids=lambda a: a.name)
    def test_regular_bimodule_gives_identity(self, A):
        M = regular_bimodule(A)
        k = hh0_of_algebra(A).dim
        assert hattori_stallings_oracle(M) == LinMap.identity(k)
        assert evaluate_trace(M).matrix == LinMap.identity(k)

    def test_theta_is_an_involution(self):
        rng = random.Random(9)
        for _ in range(10):
            M = random_free_bimodule(rng, 3, 3, 6)
            D = dualize(M)
            HT = shadow_hh0(M.left, D.coev_tensor.bimodule)
            HS = shadow_hh0(M.right, D.eval_tensor.bimodule)
            there = swap_map(D.coev_tensor, HT, D.eval_tensor, HS)
            back = swap_map(D.eval_tensor, HS, D.coev_tensor, HT)
            assert back @ there == LinMap.identity(HT.dim)
            assert there @ back == LinMap.identity(HS.dim)

    def test_witness_independence(self):
        rng = random.Random(4)
        G = symmetric_group(4)
        cover = build_cover(G, parse_subgroup(G, "a4"))
        base = evaluate_trace(group_bimodule(cover)[2]).matrix
        for _ in range(3):
            assert evaluate_trace(group_bimodule(rechoose(cover, rng))[2]).matrix == base

    def test_functoriality_under_tensor(self):
        A, R, C = cyclic_group_algebra(2), truncated_poly(2), rationals()
        zero, one = {}, {0: ONE}
        # z acts on R^2 by swapping coordinates
        M = free_from_rep(A, R, [[[one, zero], [zero, one]], [[zero, one], [one, zero]]])
        # x acts on Q^2 nilpotently
        N = free_from_rep(R, C, [[[one, zero], [zero, one]], [[zero, one], [zero, zero]]])
        assert M.right is N.left
        MN = tensor_over(R, M, N).bimodule
        assert evaluate_trace(MN).matrix == evaluate_trace(N).matrix @ evaluate_trace(M).matrix


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_oracle_equivalence(seed):
    M = random_free_bimodule(random.Random(seed), 2, 2, 3)
    assert evaluate_trace(M).matrix == hattori_stallings_oracle(M)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_additivity(seed):
    from shadowtrace.bimod import random_free_family

    M, N = random_free_family(random.Random(seed), 2, max_dim_m=4)
    assert evaluate_trace(direct_sum(M, N)).matrix == evaluate_trace(M).matrix + evaluate_trace(N).matrix
