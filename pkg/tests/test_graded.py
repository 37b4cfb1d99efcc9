from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from projquant.graded import GradedElement, ValueSpec, ad_exp_neg, bracket, rho_star

q = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def element(m):
    return st.builds(
        lambda v, A, xi: GradedElement(tuple(v), tuple(tuple(r) for r in A), tuple(xi)),
        st.lists(q, min_size=m, max_size=m),
        st.lists(st.lists(q, min_size=m, max_size=m), min_size=m, max_size=m),
        st.lists(q, min_size=m, max_size=m),
    )


@given(element(2), element(2), element(2))
def test_jacobi(a, b, c):
    total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert total.is_zero()


@given(element(3), element(3))
def test_antisymmetry(a, b):
    assert (bracket(a, b) + bracket(b, a)).is_zero()


@given(element(2))
def test_matrix_round_trip(a):
    b = GradedElement.from_matrix(a.matrix())
    assert (a - b).is_zero()


def test_abelian_parts_and_grading():
    m = 3
    for i in range(m):
        for j in range(m):
            assert bracket(GradedElement.basis_vector(m, i), GradedElement.basis_vector(m, j)).is_zero()
            assert bracket(GradedElement.basis_covector(m, i), GradedElement.basis_covector(m, j)).is_zero()
            b = bracket(GradedElement.basis_covector(m, i), GradedElement.basis_vector(m, j))
            assert (b - b.part(0)).is_zero()


def test_covector_vector_bracket_example():
    # [h, e_j] = -(e_j h + h_j Id) on g_0
    m = 2
    h = GradedElement.covector((Fraction(2), Fraction(3)))
    e0 = GradedElement.basis_vector(m, 0)
    A = bracket(h, e0).A
    assert A == ((-4, -3), (0, -2))


def test_ad_exp_neg_series():
    m = 2
    xi = GradedElement.covector((Fraction(1), Fraction(-1)))
    y = GradedElement.basis_vector(m, 1)
    out = ad_exp_neg(xi, y)
    expected = y - bracket(xi, y) + bracket(xi, bracket(xi, y)).scale(Fraction(1, 2))
    assert (out - expected).is_zero()
    assert (out.part(-1) - y).is_zero()


def test_rho_star_identity_on_density():
    lam = Fraction(2, 5)
    ident = GradedElement.endo(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))
    out = rho_star(ident, ValueSpec.density(lam))({(): Fraction(1)})
    assert out == {(): -lam * 2}


def test_rho_star_on_weighted_vector():
    delta = Fraction(1, 3)
    A = ((Fraction(1), Fraction(2)), (Fraction(0), Fraction(3)))
    v = {(0,): Fraction(5), (1,): Fraction(7)}
    out = rho_star(GradedElement.endo(A), ValueSpec.symbol(1, delta))(v)
    tr = 4
    assert out[(0,)] == 5 + 2 * 7 - delta * tr * 5
    assert out[(1,)] == 3 * 7 - delta * tr * 7


def test_rho_star_g1_part_acts_trivially():
    h = GradedElement.basis_covector(2, 0) + GradedElement.basis_vector(2, 1)
    assert rho_star(h, ValueSpec.symbol(2, 1))({(0, 1): Fraction(1)}) == {}


@given(
    st.lists(st.lists(q, min_size=2, max_size=2), min_size=2, max_size=2),
    st.lists(st.lists(q, min_size=2, max_size=2), min_size=2, max_size=2),
    st.sampled_from(["u", "d", "ud", "uu", ""]),
    q,
)
def test_rho_star_is_lie_homomorphism(A, B, slots, w):
    a = GradedElement.endo(tuple(map(tuple, A)))
    b = GradedElement.endo(tuple(map(tuple, B)))
    spec = ValueSpec(slots, w)
    T = {idx: Fraction(len(idx) + 1 + sum(idx)) for idx in _tuples(2, len(slots))}
    ra, rb = rho_star(a, spec), rho_star(b, spec)
    lhs = rho_star(bracket(a, b), spec)(T)
    ab, ba = ra(rb(T)), rb(ra(T))
    rhs = {k: ab.get(k, 0) - ba.get(k, 0) for k in set(ab) | set(ba)}
    rhs = {k: v for k, v in rhs.items() if v}
    assert lhs == rhs


def _tuples(m, n):
    from itertools import product

    return list(product(range(m), repeat=n))
