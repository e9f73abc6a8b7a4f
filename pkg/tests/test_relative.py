import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from futaki.bundle import CentralFiber, derive_invariants
from futaki.exactnum import Poly, Q, RatFunc
from futaki.moments import moment_table_closed, moment_table_direct
from futaki.relative import (
    Sign,
    Verdict,
    WrongArity,
    a_matrix,
    classical_futaki,
    extremal_residual,
    futaki_ell1_closed,
    futaki_ell2_factorized,
    futaki_value,
    relative_futaki,
    sign_at,
    solve_extremal,
)
from futaki.linsolve import leading_minors

C = Poly.var()


def inv_of(genus, *pairs):
    return derive_invariants(CentralFiber.from_pairs(genus, list(pairs)))


def fibres(min_parts=2, max_parts=4, genera=(1, 3)):
    return st.builds(
        lambda g, pairs: inv_of(g, *pairs),
        st.integers(*genera),
        st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3)), min_size=min_parts, max_size=max_parts),
    )


offsets = st.builds(Q, st.integers(1, 30), st.integers(1, 5))


def test_ell1_worked_instance():
    # rank 2 degree 0 bundle, destabilized by a line of degree -1, genus 2
    inv = inv_of(2, (1, 1), (1, -1))
    assert futaki_ell1_closed(inv, 1) == 1
    assert futaki_value(moment_table_closed(inv))(Q(1)) == 1
    assert futaki_value(moment_table_closed(inv)) == RatFunc.coerce(futaki_ell1_closed(inv))


def test_ell1_closed_equal_slopes_vanishes():
    assert futaki_ell1_closed(inv_of(1, (2, 2), (1, 1))).is_zero()


def test_ell1_closed_leading_coefficient():
    assert futaki_ell1_closed(inv_of(1, (1, 1), (1, -1))).lead() > 0
    assert futaki_ell1_closed(inv_of(1, (1, -1), (1, 1))).lead() < 0


def test_wrong_arity():
    with pytest.raises(WrongArity):
        futaki_ell1_closed(inv_of(1, (1, 0), (1, 0), (1, 0)))
    with pytest.raises(WrongArity):
        futaki_ell2_factorized(inv_of(1, (1, 0), (1, 0)))
    with pytest.raises(WrongArity):
        futaki_value(moment_table_closed(inv_of(1, (2, 0))))


def test_extremal_equal_slopes():
    inv = inv_of(1, (1, 1), (2, 2), (1, 1), (3, 3))
    t = moment_table_closed(inv, 3)
    sol = solve_extremal(t)
    assert sol.a == (0, 0)
    assert sol.a0 == 2 * t.beta0 / t.alpha0


def test_extremal_residual_example():
    t = moment_table_closed(inv_of(1, (1, 1), (1, -1), (1, 0)), 2)
    assert extremal_residual(t, solve_extremal(t)) == [0, 0]


def test_ell1_extremal_is_scalar():
    t = moment_table_closed(inv_of(2, (1, 1), (1, -1)), 3)
    sol = solve_extremal(t)
    assert sol.a == () and sol.a0 == 2 * t.beta0 / t.alpha0


def test_report_verdicts():
    rep = relative_futaki(moment_table_closed(inv_of(2, (1, 1), (1, -1)), 2))
    assert rep.sign is Sign.POSITIVE and rep.verdict is Verdict.NOT_DESTABILIZED and rep.ok
    rep = relative_futaki(moment_table_closed(inv_of(2, (1, -1), (1, 1)), 2))
    assert rep.sign is Sign.NEGATIVE and rep.verdict is Verdict.DESTABILIZED
    rep = relative_futaki(moment_table_closed(inv_of(2, (1, 0), (1, 0), (2, 1)), 2))
    assert rep.sign is Sign.ZERO and rep.verdict is Verdict.BORDERLINE


def test_symbolic_report_needs_point_for_sign():
    t = moment_table_closed(inv_of(1, (1, 1), (1, -1), (1, 0)))
    assert relative_futaki(t).sign is None
    assert relative_futaki(t, at=Q(5, 2)).sign is Sign.POSITIVE


def test_sign_at_handles_kinds():
    assert sign_at(Q(-2), 0) is Sign.NEGATIVE
    assert sign_at(C - 3, 2) is Sign.NEGATIVE
    assert sign_at(RatFunc(C, C - 1), 2) is Sign.POSITIVE


def test_ell2_factorization_example():
    inv = inv_of(1, (1, 1), (1, -1), (1, 0))
    fac = futaki_ell2_factorized(inv)
    assert fac.slope_gap == 2
    assert fac.lhs == fac.gamma0 * fac.slope_gap
    F = futaki_value(moment_table_closed(inv))
    for c in (Q(11, 10), Q(2), Q(9)):
        assert sign_at(F, c) is Sign.POSITIVE
        assert fac.gamma0(c) > 0


def test_ell2_equal_slopes_zero_product():
    fac = futaki_ell2_factorized(inv_of(2, (1, 1), (2, 2), (1, -1)))
    assert fac.lhs.is_zero()


def test_printed_constant_disagrees_beyond_rank_two():
    # the extra factorial factor is invisible when every rank is at most two
    assert futaki_ell2_factorized(inv_of(1, (2, 1), (1, 0), (2, -1))).printed_matches
    fac = futaki_ell2_factorized(inv_of(1, (3, 1), (1, 0), (2, -1)))
    assert not fac.printed_matches
    assert fac.gamma1_printed == fac.gamma1 * 2**4


def test_classical_factorization():
    inv = inv_of(1, (1, 2), (1, 0), (1, 0))
    res = classical_futaki(moment_table_closed(inv), inv)
    assert res.factorization_holds
    # equal mu_1 and mu_2 does not make the classical term vanish
    assert not res.value.is_zero()
    assert res.printed_form_holds is False


def test_classical_equals_relative_for_two_summands():
    inv = inv_of(3, (2, 1), (1, -2))
    t = moment_table_closed(inv)
    assert RatFunc.coerce(classical_futaki(t, inv).value) == futaki_value(t)


def test_classical_equal_slopes():
    inv = inv_of(1, (1, 1), (2, 2), (1, 1))
    assert classical_futaki(moment_table_closed(inv, 2), inv, 2).value == 0


@given(fibres(), offsets)
@settings(max_examples=60, deadline=None)
def test_a_matrix_positive_definite(inv, off):
    t = moment_table_closed(inv, inv.max_slope + off)
    A = a_matrix(t)
    n = len(A)
    assert all(A[i][j] == A[j][i] for i in range(n) for j in range(n))
    assert all(m > 0 for m in leading_minors(A))


@given(fibres(), offsets)
@settings(max_examples=60, deadline=None)
def test_routes_and_certificates(inv, off):
    c = inv.max_slope + off
    rep = relative_futaki(moment_table_direct(inv, c))
    assert rep.ok
    assert rep.value == relative_futaki(moment_table_closed(inv, c)).value


@given(fibres(min_parts=2, max_parts=2, genera=(0, 3)))
@settings(max_examples=40, deadline=None)
def test_ell1_general_matches_closed(inv):
    assert futaki_value(moment_table_closed(inv)) == RatFunc.coerce(futaki_ell1_closed(inv))


@given(fibres(min_parts=3, max_parts=3), offsets)
@settings(max_examples=40, deadline=None)
def test_ell2_sign_follows_slope_gap(inv, off):
    fac = futaki_ell2_factorized(inv)
    c = inv.max_slope + off
    assert sign_at(futaki_value(moment_table_closed(inv)), c) is Sign.of(fac.slope_gap)


@given(fibres(min_parts=4, max_parts=5), st.randoms(use_true_random=False), offsets)
@settings(max_examples=30, deadline=None)
def test_relabeling_tail_summands(inv, rnd, off):
    pairs = list(zip(inv.ranks, inv.degrees))
    tail = pairs[2:]
    rnd.shuffle(tail)
    other = inv_of(inv.genus, *(pairs[:2] + tail))
    c = inv.max_slope + off
    assert futaki_value(moment_table_closed(inv, c)) == futaki_value(moment_table_closed(other, c))
