import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from futaki.bundle import CentralFiber, derive_invariants
from futaki.equirr import (
    NORMALIZED_RATIO,
    WeightVector,
    algebraic_relative_futaki,
    chern_identity_case,
    hilbert_dk,
    hilbert_dk_poly,
    sym_power_chern,
    sym_power_chern_poly,
    tilde_coefficients,
    weight_pairwise,
    weight_wk,
    weight_wk_poly,
)
from futaki.exactnum import Q, binomial
from futaki.moments import moment_table_closed
from futaki.relative import Sign


def inv_of(genus, *pairs):
    return derive_invariants(CentralFiber.from_pairs(genus, list(pairs)))


fibres = st.builds(
    lambda g, pairs: inv_of(g, *pairs),
    st.integers(0, 3),
    st.lists(st.tuples(st.integers(1, 3), st.integers(-3, 3)), min_size=2, max_size=4),
)
offsets = st.builds(Q, st.integers(1, 20), st.integers(1, 4))


def test_sym_power_examples():
    assert sym_power_chern(2, 3).rank == 4
    assert sym_power_chern(2, 2).c1 == 3
    s = sym_power_chern(2, 1)
    assert (s.rank, s.c1, s.ch2) == (2, 1, (1, 0))


def test_sym_power_rejects_bad_input():
    with pytest.raises(ValueError):
        sym_power_chern(0, 2)
    with pytest.raises(ValueError):
        sym_power_chern(2, -1)


@pytest.mark.parametrize("r", range(1, 9))
def test_identity_case(r):
    assert chern_identity_case(r)


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8])
def test_polynomial_form_agrees(r):
    sp = sym_power_chern_poly(r)
    for k in range(1, 9):
        s = sym_power_chern(r, k)
        assert sp.rank(Q(k)) == s.rank and sp.c1(Q(k)) == s.c1
        assert tuple(x(Q(k)) for x in sp.ch2) == s.ch2
        assert tuple(x(Q(k)) for x in sp.ch3) == s.ch3


def test_rank_is_stars_and_bars():
    for r in range(1, 11):
        for k in range(0, 11):
            assert sym_power_chern(r, k).rank == binomial(r - 1 + k, k)


def test_hilbert_example():
    assert hilbert_dk(inv_of(1, (1, 1), (1, -1)), 1, 1) == 2


@given(fibres, offsets)
@settings(max_examples=40, deadline=None)
def test_hilbert_poly_matches_formula(inv, off):
    m = inv.max_slope + off
    p = hilbert_dk_poly(inv, m)
    assert all(p(Q(k)) == hilbert_dk(inv, m, k) for k in range(1, 6))


@given(fibres, offsets, st.data())
@settings(max_examples=40, deadline=None)
def test_weight_poly_matches_formula(inv, off, data):
    m = inv.max_slope + off
    rho = WeightVector(tuple(data.draw(st.lists(st.integers(-2, 2), min_size=inv.ell + 1, max_size=inv.ell + 1))))
    p = weight_wk_poly(inv, m, rho)
    assert all(p(Q(k)) == weight_wk(inv, m, rho, k) for k in range(1, 7))


def test_weight_vector_length_checked():
    with pytest.raises(ValueError):
        weight_wk_poly(inv_of(1, (1, 0), (1, 0)), 2, WeightVector((1, 0, 0)))


def test_diagonal_action_ignores_individual_slopes():
    diag = WeightVector((1, 1))
    a = weight_wk_poly(inv_of(1, (1, 1), (1, -1)), 3, diag)
    b = weight_wk_poly(inv_of(1, (1, 0), (1, 0)), 3, diag)
    assert a == b


def test_pairwise_example():
    inv = inv_of(1, (1, 0), (1, 0))
    assert weight_pairwise(inv, 1, 1, 1) == Q(1, 3)
    assert weight_pairwise(inv, 1, 0, 1) == weight_pairwise(inv, 1, 1, 0)


def test_ell1_algebraic_value():
    inv = inv_of(2, (1, 1), (1, -1))
    t = moment_table_closed(inv, 3)
    res = algebraic_relative_futaki(inv, 3)
    assert res.value == (t.b(1) - t.a(1) * t.beta0 / t.alpha0) / (2 * inv.pi_R)
    assert res.match


@given(fibres, offsets)
@settings(max_examples=40, deadline=None)
def test_tilde_identifications(inv, off):
    m = inv.max_slope + off
    assert tilde_coefficients(inv, m).matches(moment_table_closed(inv, m), inv.pi_R)


@given(fibres, offsets)
@settings(max_examples=40, deadline=None)
def test_cross_check(inv, off):
    m = inv.max_slope + off
    res = algebraic_relative_futaki(inv, m)
    assert res.a_tilde_quarter
    assert Sign.of(res.value) == Sign.of(res.differential)
    if res.value != 0:
        assert res.ratio == 2 * inv.pi_R * moment_table_closed(inv, m).alpha0
        assert res.normalized_ratio == NORMALIZED_RATIO
    assert res.match
