from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonef.degeneration import (
    F_SIDE,
    P_SIDE,
    B,
    LimitPair,
    NotDivisible,
    RuledClass,
    S,
    fibre,
    kernel_system,
    limit_pair,
    limit_pair_induction,
    limit_pair_m2,
    normal_bundle,
    normal_bundle_displayed,
    q_stack,
    refined_matching,
    restriction_degree,
    restriction_on_thrown_curve,
    twisted_restriction,
)
from nonef.lattice import DivisorClass, LatticeError, parse_class, simple_point_count, xi_class


def cls(text: str) -> DivisorClass:
    return parse_class(text)


# -- limit pairs ------------------------------------------------------------------------

@pytest.mark.parametrize(
    "d, k, t, LP, LF",
    [
        (4, 4, 1, "13;8,4^6", "16;13,4^6"),
        (4, 3, 0, "9;6,3^6", "12;9,3^6"),
        (5, 4, 1, "17;12,4^8", "20;17,4^8"),
    ],
)
def test_limit_pair_m2_examples(d, k, t, LP, LF):
    pair = limit_pair_m2(d, k, t)
    assert (pair.L_P, pair.L_F) == (cls(LP), cls(LF))
    assert pair.point_split == (2 * (d - 1) + 1, 2 * (d - 1))


def test_restriction_degrees_on_examples():
    pair = limit_pair_m2(4, 4, 1)
    assert restriction_degree(pair, P_SIDE) == restriction_degree(pair, F_SIDE) == 13
    pair = limit_pair_m2(4, 3, 0)
    assert restriction_degree(pair, P_SIDE) == restriction_degree(pair, F_SIDE) == 9


def test_restriction_degree_rejects_unknown_side():
    with pytest.raises(ValueError):
        restriction_degree(limit_pair_m2(4, 1, 0), "Q")


def test_restrictions_agree_over_replay_grid():
    for d in range(4, 10):
        for k in range(1, 13):
            for t in range(k // (d - 1) + 2):
                pair = limit_pair_m2(d, k, t)
                assert restriction_degree(pair, P_SIDE) == restriction_degree(pair, F_SIDE)
                # points: p_0 and 2n on P, 2n on F, 4n simple in total
                assert pair.point_split[0] - 1 + pair.point_split[1] == simple_point_count(d, 2)
    for d in range(4, 10):
        for m in range(3, d - 1):
            for k in range(1, 4):
                pair = limit_pair_induction(d, m, k)
                assert restriction_degree(pair, P_SIDE) == restriction_degree(pair, F_SIDE)


def test_mismatched_restrictions_are_rejected():
    with pytest.raises(LatticeError):
        LimitPair(cls("5;1"), cls("4;4"), 0, (2, 0))


def test_twist_moves_degree_between_components():
    # general degree 12, vertex multiplicity on F equals the degree on P
    pair = limit_pair(12, 6, (3,) * 6, (3,) * 6, -3)
    assert pair.L_P.degree == 9 == pair.L_F.mults[0]


def test_limit_pair_m2_preconditions():
    for bad in [(3, 1, 0), (4, 0, 0), (4, 1, -1)]:
        with pytest.raises(LatticeError):
            limit_pair_m2(*bad)


def test_limit_pair_induction_examples():
    pair = limit_pair_induction(6, 4, 1)
    assert pair.L_P == cls("4;2,1^12") == xi_class(4, 2)
    assert pair.L_F == cls("6;4,1^20") == xi_class(6, 2)
    pair = limit_pair_induction(5, 3, 2)
    assert pair.L_P == cls("6;4,2^5") == xi_class(3, 1, 2)
    assert pair.L_F == cls("10;6,2^16")


def test_point_count_identity():
    for d in range(5, 23):
        for m in range(3, d - 1):
            assert (m - 2) * (2 * d - m - 2) + 4 * d - 4 == m * (2 * d - m)


def test_limit_pair_induction_preconditions():
    for bad in [(6, 2, 1), (6, 5, 1), (6, 4, 0)]:
        with pytest.raises(LatticeError):
            limit_pair_induction(*bad)


def test_kernel_systems():
    pair = limit_pair_m2(4, 4, 1)
    assert kernel_system(pair, P_SIDE) == cls("12;8,4^6")
    assert kernel_system(pair, F_SIDE) == cls("16;14,4^6")
    assert restriction_degree(pair, P_SIDE) - 1 == kernel_system(pair, P_SIDE).degree


def test_kernel_on_P_for_pencil_case():
    for d in range(5, 10):
        for k in range(1, 4):
            pair = limit_pair_induction(d, 3, k)
            ker = kernel_system(pair, P_SIDE)
            assert ker == DivisorClass(k * (d - 2) - 1, (k * (d - 3),) + (k,) * (2 * d - 5))


# -- ruled surfaces -----------------------------------------------------------------------

@given(st.integers(0, 12))
def test_section_pairings(i):
    assert S(i).dot(S(i)) == i
    assert S(i).dot(B(i)) == 0
    assert B(i).dot(B(i)) == -i
    assert B(i).dot(fibre(i)) == 1
    assert fibre(i).dot(fibre(i)) == 0


def test_classes_on_different_surfaces_do_not_mix():
    with pytest.raises(LatticeError):
        B(1) + B(2)


def test_q_stack_examples():
    assert q_stack(2) == [(RuledClass(0, -1, -1), 2), (RuledClass(1, -2, -2), 1)]
    assert q_stack(4)[2] == (RuledClass(2, -2, -3), 2)
    assert q_stack(3)[2] == (RuledClass(2, -2, -3), 1)
    with pytest.raises(LatticeError):
        q_stack(1)


def test_solved_normal_bundles_match_closed_forms():
    for m in range(2, 13):
        for i in range(m):
            assert normal_bundle(m, i) == normal_bundle_displayed(m, i), (m, i)


def test_normal_bundle_at_one_extends_middle_formula():
    for m in range(3, 13):
        assert normal_bundle(m, 1) == RuledClass(1, -2, -2)


def test_central_fibre_restricts_trivially():
    # oracle: sum over components of multiplicity * restriction, computed from the stack alone
    for m in range(2, 13):
        stack = q_stack(m)
        for i in range(m):
            total = RuledClass(i)
            total = total + (B(0) if i == 0 else (m - i + 1) * B(i))
            if i < m - 1:
                total = total + (m - i - 1) * S(i)
            total = total + m * fibre(i) + (m - i) * stack[i][0]
            assert total.normalized().is_zero(), (m, i)


def test_twisted_restriction_examples():
    assert twisted_restriction(3, 2, 0) == RuledClass(0, 2, 0)
    assert twisted_restriction(4, 1, 2).is_zero()
    assert twisted_restriction(5, 3, 4).is_zero()


def test_twisted_restriction_grid():
    for m in range(2, 13):
        for h in range(1, 7):
            assert twisted_restriction(m, h, 0) == h * B(0)
            for i in range(1, m):
                assert twisted_restriction(m, h, i).is_zero(), (m, h, i)


def test_twisted_restriction_has_integer_coefficients():
    for m in range(2, 13):
        for i in range(m):
            c = twisted_restriction(m, 1, i)
            assert isinstance(c.b_coeff, int) and isinstance(c.f_coeff, int)
            assert not isinstance(normal_bundle(m, i).b_coeff, Fraction)


def test_thrown_curve_restriction_is_trivial():
    for s in range(1, 20):
        assert restriction_on_thrown_curve(s) == 0


# -- refined matching -----------------------------------------------------------------------

def test_refined_matching_examples():
    for n in range(3, 9):
        for t in range(1, 4):
            match = refined_matching(t * (n - 1), n - 1)
            assert match.h == t and match.chain_type == (t, n - 1)
            assert match.correspondence_conditions == t * (n - 2)
    match = refined_matching(6, 3)
    assert (match.h, match.m, len(match.points)) == (2, 3, 3)
    with pytest.raises(NotDivisible):
        refined_matching(3, 2)


@given(st.integers(1, 40), st.integers(1, 12))
def test_refined_matching_counts(h, m):
    match = refined_matching(h * m, m)
    assert match.s == h * m
    assert match.correspondence_conditions == h * (m - 1)
    assert match.chain_rows_per_point == m * h * (h + 1) // 2


@given(st.integers(1, 200), st.integers(2, 12))
def test_refined_matching_rejects_nondivisible(s, m):
    if s % m:
        with pytest.raises(NotDivisible):
            refined_matching(s, m)


def test_refined_matching_domain():
    for bad in [(0, 1), (-2, 1), (2, 0)]:
        with pytest.raises(LatticeError):
            refined_matching(*bad)
