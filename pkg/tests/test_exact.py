from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from projquant.errors import InconsistentSystem, SingularSystem
from projquant.exact import LinearSystem, Poly, Universe, as_rational, solve_linear

U = Universe(2)
x1, x2, xi1 = U.x(0), U.x(1), U.xi(0)

terms = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 4),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=4,
)
polys = terms.map(lambda t: Poly(4, t))


def test_as_rational_rejects_float():
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_basic_arithmetic():
    p = (x1 + x2) ** 2
    assert p == x1 * x1 + x2 * x2 + x1 * x2 * 2
    assert p - p == 0
    assert (x1 * 3 + 1).constant_term() == 1
    assert not U.zero
    assert U.const(Fraction(1, 2)) == Fraction(1, 2)


def test_diff_and_degrees():
    p = x1**3 * x2 + xi1 * x1
    assert p.diff(0) == x1**2 * x2 * 3 + xi1
    assert U.dxi(p, 0) == x1
    assert U.xi_degree(p) == 1
    assert U.x_degree(p) == 4
    assert U.at_fiber_origin(p) == x1**3 * x2
    assert not U.is_base(p)


def test_substitute_and_restrict():
    p = x1 * x2 + x1
    assert p.substitute([x2, x1, U.xi(0), U.xi(1)]) == x1 * x2 + x2
    assert p.restrict({0: Fraction(2)}) == x2 * 2 + 2
    assert p.evaluate([Fraction(1), Fraction(3), 0, 0]) == 4


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(polys, st.integers(0, 3), st.integers(0, 3))
def test_partials_commute(p, i, j):
    assert p.diff(i).diff(j) == p.diff(j).diff(i)


@given(polys, polys, st.integers(0, 3))
def test_leibniz(a, b, i):
    assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_solve_diagonal_example():
    sol = solve_linear(LinearSystem([[2, 0], [0, 3]], [x1, U.const(6)], ["a", "b"]))
    assert sol == {"a": x1 / 2, "b": 2}


def test_singular_and_inconsistent():
    with pytest.raises(SingularSystem):
        solve_linear(LinearSystem([[1, 1], [2, 2]], [Fraction(1), Fraction(2)]))
    with pytest.raises(InconsistentSystem):
        solve_linear(LinearSystem([[1], [1]], [Fraction(1), Fraction(2)]))


@given(
    st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3),
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=3, max_size=3),
)
def test_solve_residual_zero(M, target):
    rhs = [sum(Fraction(a) * t for a, t in zip(row, target)) for row in M]
    try:
        sol = solve_linear(LinearSystem(M, rhs))
    except SingularSystem:
        return
    assert [sol[i] for i in range(3)] == target
