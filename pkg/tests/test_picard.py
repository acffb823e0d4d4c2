import itertools

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, linsolve, symbols

from halphen.picard import (
    E,
    E8_BASIS,
    E8_GRAM,
    E8Class,
    K,
    L,
    ZERO,
    DivisorClass,
    e8_lift,
    e8_project,
    e8_root_classes,
    gram,
    intersect,
    is_minus_one_class,
    is_root,
)

coeff = st.integers(-6, 6)
divisors = st.lists(coeff, min_size=10, max_size=10).map(lambda c: DivisorClass(tuple(c)))


def perp_classes():
    # K^perp is spanned by the root basis together with K
    return st.tuples(st.lists(coeff, min_size=8, max_size=8), coeff).map(
        lambda t: e8_lift(E8Class(tuple(t[0]))) + t[1] * K
    )


def sympy_project(c):
    """Solve c = sum x_i r_i + k K over the rationals."""
    xs = symbols("x0:9")
    cols = [list(r.coeffs) for r in E8_BASIS] + [list(K.coeffs)]
    a = Matrix(cols).T
    (sol,) = linsolve((a, Matrix(c.coeffs)), *xs)
    assert all(v.is_integer for v in sol)
    return tuple(int(v) for v in sol[:8])


def test_basic_intersections():
    assert intersect(L, L) == 1
    assert intersect(E[1], E[1]) == -1
    assert intersect(K, K) == 0
    assert intersect(L, K) == -3
    assert intersect(E[4], K) == -1


def test_gram_is_negated_e8_cartan():
    # diagonal -2, exactly 7 edges forming a tree, node 1 (L-E1-E2-E3) meets node 4 (E3-E4)
    assert all(E8_GRAM[i][i] == -2 for i in range(8))
    edges = {(i, j) for i in range(8) for j in range(i + 1, 8) if E8_GRAM[i][j]}
    assert all(E8_GRAM[i][j] == 1 for i, j in edges)
    assert len(edges) == 7
    assert (0, 3) in edges
    assert int(Matrix(E8_GRAM).det()) == 1


def test_project_simple_root_is_unit_vector():
    assert e8_project(E[1] - E[2]) == E8Class((0, 1, 0, 0, 0, 0, 0, 0))
    assert e8_project(L - E[1] - E[2] - E[3]) == E8Class((1, 0, 0, 0, 0, 0, 0, 0))


def test_project_e8_minus_e9_matches_rational_solve():
    x = e8_project(E[8] - E[9])
    assert x.coords == sympy_project(E[8] - E[9])
    assert x.coords == (-3, -2, -4, -6, -5, -4, -3, -2)
    assert gram(x, x) == -2


def test_project_kills_k():
    assert e8_project(K) == E8Class((0,) * 8)


def test_project_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        e8_project(L)


@given(perp_classes(), perp_classes())
def test_projection_is_an_isometry_on_k_perp(a, b):
    assert gram(e8_project(a), e8_project(b)) == intersect(a, b)


@given(perp_classes())
def test_lift_is_a_section(c):
    assert e8_project(e8_lift(e8_project(c))) == e8_project(c)
    assert e8_project(c) == E8Class(sympy_project(c))


def test_root_classes_give_all_240_roots():
    roots = e8_root_classes()
    assert len(roots) == 240
    assert all(is_root(r) for r in roots)
    images = {e8_project(r) for r in roots}
    assert len(images) == 240
    assert all(gram(x, x) == -2 for x in images)


def test_highest_root_coordinates_are_the_marks():
    images = {e8_project(r).coords for r in e8_root_classes()}
    # in Bourbaki labelling the highest root is (2,3,4,6,5,4,3,2); our node
    # order is (r1 = branch node neighbour, r2..r8 along the long chain)
    top = max(images, key=sum)
    assert sorted(abs(c) for c in top) == [2, 2, 3, 3, 4, 4, 5, 6]


def test_minus_one_classes():
    assert is_minus_one_class(E[9])
    assert is_minus_one_class(L - E[1] - E[2])
    assert is_minus_one_class(DivisorClass.from_multiplicities(2, (1, 1, 1, 1, 1, 0, 0, 0, 0)))
    assert not is_minus_one_class(L)
    assert not is_root(E[1])


@given(divisors, divisors)
def test_intersection_is_symmetric_and_bilinear(a, b):
    assert intersect(a, b) == intersect(b, a)
    assert intersect(a + b, a) == intersect(a, a) + intersect(b, a)
    assert intersect(3 * a, b) == 3 * intersect(a, b)


def test_string_and_json_forms():
    d = DivisorClass.from_multiplicities(3, (2, 1, 1, 1, 1, 1, 1, 1, 0))
    assert str(d) == "(3; 2,1,1,1,1,1,1,1,0)"
    assert DivisorClass.from_json(d.to_json()) == d
    assert d.multiplicities == (2, 1, 1, 1, 1, 1, 1, 1, 0)
    assert -ZERO == ZERO


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        DivisorClass((1, 2, 3))
    with pytest.raises(ValueError):
        E8Class((1,))


def test_all_ordered_pairs_project_to_distinct_roots():
    pairs = list(itertools.permutations(range(1, 10), 2))
    assert len({e8_project(E[i] - E[j]) for i, j in pairs}) == 72
