import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from futaki.exactnum import Poly, Q, RatFunc
from futaki.linsolve import SingularSystem, determinant, leading_minors, solve

C = Poly.var()
small = st.builds(Q, st.integers(-9, 9), st.integers(1, 4))


def test_solve_small():
    assert solve([[2, 1], [1, 3]], [Q(3), Q(5)]) == [Q(4, 5), Q(7, 5)]


def test_zero_pivot_swaps_rows():
    assert solve([[0, 1], [1, 0]], [Q(2), Q(3)]) == [3, 2]


def test_singular():
    with pytest.raises(SingularSystem):
        solve([[1, 2], [2, 4]], [Q(1), Q(1)])
    assert determinant([[1, 2], [2, 4]]) == 0


def test_empty_system():
    assert solve([], []) == []
    assert determinant([]) == 1


def test_shape_checked():
    with pytest.raises(ValueError):
        solve([[1, 2]], [Q(1)])


def test_determinant_and_minors():
    m = [[Q(2), Q(1), Q(0)], [Q(1), Q(2), Q(1)], [Q(0), Q(1), Q(2)]]
    assert determinant(m) == 4
    assert leading_minors(m) == [2, 3, 4]
    assert determinant([[0, 1], [1, 0]]) == -1


def test_symbolic_solve():
    x = solve([[C, Poly((1,))], [Poly((1,)), C]], [Poly((1,)), Poly((0,))])
    assert x[0] == RatFunc(C, C * C - 1)
    assert x[1] == RatFunc(Poly((-1,)), C * C - 1)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(small, min_size=n, max_size=n),
)))
@settings(max_examples=80)
def test_solution_satisfies_system(data):
    m, b = data
    try:
        x = solve(m, b)
    except SingularSystem:
        assert determinant(m) == 0
        return
    for row, bi in zip(m, b):
        assert sum((a * xi for a, xi in zip(row, x)), Q(0)) == bi
    assert determinant(m) != 0
