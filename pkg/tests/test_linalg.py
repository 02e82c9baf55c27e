"""Exact linear algebra: frozen oracles first, then property invariants."""

import doctest
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import strat_ic.linalg as linalg
from strat_ic.linalg import (
    CochainComplex,
    ExactMatrix,
    FGAbelianGroup,
    kernel_basis,
    rank,
    rref,
    smith_normal_form,
    solve,
    tensor_complex,
    tor1,
)


def test_doctests():
    failures, _ = doctest.testmod(linalg)
    assert failures == 0


# ---------------------------------------------------------------- oracles

def test_identity_rank():
    for n in (0, 1, 5):
        assert rank(ExactMatrix.identity(n)) == n


def test_zero_rank():
    assert rank(ExactMatrix.zeros(4, 7)) == 0


def test_circle_coboundary_rank_and_kernel():
    # triangle circle: vertices 0,1,2; edges (0,1),(0,2),(1,2)
    d0 = ExactMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    assert rank(d0) == 2
    ker = kernel_basis(d0)
    assert len(ker) == 1
    # the kernel is spanned by the constant function
    v = ker[0]
    assert v[0] == v[1] == v[2] != 0


def test_circle_complex_betti():
    d0 = ExactMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    c = CochainComplex({0: 3, 1: 3}, {0: d0})
    assert c.betti_numbers() == {0: 1, 1: 1}
    assert c.euler_characteristic() == 0


def test_rref_is_canonical():
    m = ExactMatrix.from_rows([[2, 4, 6], [1, 2, 4]])
    r, pivots = rref(m)
    assert pivots == [0, 2]
    assert r.entry(0, 0) == 1 and r.entry(0, 1) == 2 and r.entry(0, 2) == 0
    assert r.entry(1, 2) == 1


def test_solve_consistent_and_inconsistent():
    m = ExactMatrix.from_rows([[1, 1], [0, 1]])
    x = solve(m, (Fraction(3), Fraction(1)))
    assert m.apply(x) == (Fraction(3), Fraction(1))
    bad = ExactMatrix.from_rows([[1, 1], [2, 2]])
    assert solve(bad, (Fraction(0), Fraction(1))) is None


def test_snf_2x2():
    m = ExactMatrix.from_rows([[1, 2], [3, 4]])
    d, u, v, vinv = smith_normal_form(m)
    assert [int(d.entry(i, i)) for i in range(2)] == [1, 2]
    assert u * m * v == d
    assert v * vinv == ExactMatrix.identity(2)


def test_snf_divisibility_fold():
    m = ExactMatrix.from_rows([[2, 4], [4, 2]])
    d, u, v, _ = smith_normal_form(m)
    assert [int(d.entry(i, i)) for i in range(2)] == [2, 6]
    assert u * m * v == d


def test_snf_rectangular_with_zero_rows():
    m = ExactMatrix.from_rows([[6, 0, 0], [0, 10, 0]])
    d, u, v, _ = smith_normal_form(m)
    assert [int(d.entry(i, i)) for i in range(2)] == [2, 30]


def test_group_normalization_to_chain():
    g = FGAbelianGroup(0, (4, 6))
    assert g.torsion == (2, 12)
    assert g.order() == 24


def test_tor_z4_z6():
    assert tor1(FGAbelianGroup(0, (4,)), FGAbelianGroup(0, (6,))) == FGAbelianGroup(0, (2,))


def test_tensor_with_free_part():
    g = FGAbelianGroup(1, (2,)).tensor(FGAbelianGroup(0, (4,)))
    assert g == FGAbelianGroup(0, (2, 4))


def test_presentation_cokernel():
    rel = ExactMatrix.from_rows([[2, 0], [0, 3], [0, 0]])
    g = FGAbelianGroup.from_presentation(rel)
    assert g == FGAbelianGroup(1, (6,))


def test_integral_cohomology_of_circle():
    d0 = ExactMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    c = CochainComplex({0: 3, 1: 3}, {0: d0})
    groups = c.cohomology_groups()
    assert groups[0] == FGAbelianGroup.free(1)
    assert groups[1] == FGAbelianGroup.free(1)


def test_integral_cohomology_torsion():
    # multiplication by 2 in degrees 1 -> 2 gives H^2 = Z/2
    c = CochainComplex({1: 1, 2: 1}, {1: ExactMatrix.from_rows([[2]])})
    groups = c.cohomology_groups()
    assert groups[1] == FGAbelianGroup.zero()
    assert groups[2] == FGAbelianGroup(0, (2,))


def test_complex_rejects_bad_differential():
    d0 = ExactMatrix.from_rows([[1], [0]])
    d1 = ExactMatrix.from_rows([[1, 0]])
    with pytest.raises(AssertionError):
        CochainComplex({0: 1, 1: 2, 2: 1}, {0: d0, 1: d1})


def test_cohomology_basis_deterministic():
    d0 = ExactMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    c = CochainComplex({0: 3, 1: 3}, {0: d0})
    assert c.cohomology_basis(1) == c.cohomology_basis(1)
    assert len(c.cohomology_basis(1)) == 1


def test_tensor_complex_euler_multiplicative():
    d0 = ExactMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    circle = CochainComplex({0: 3, 1: 3}, {0: d0})
    tot, _ = tensor_complex(circle, circle)
    assert tot.euler_characteristic() == circle.euler_characteristic() ** 2
    # torus Betti numbers via the Kunneth convolution
    assert tot.betti_numbers() == {0: 1, 1: 2, 2: 1}


# ------------------------------------------------------------- invariants

small_entries = st.integers(min_value=-4, max_value=4)


def matrix_strategy(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(small_entries, min_size=c, max_size=c),
                               min_size=r, max_size=r)))


@given(matrix_strategy())
def test_rank_nullity(data):
    m = ExactMatrix.from_rows(data)
    assert rank(m) + len(kernel_basis(m)) == m.cols


@given(matrix_strategy())
def test_rank_agrees_with_rref(data):
    m = ExactMatrix.from_rows(data)
    _, pivots = rref(m)
    assert rank(m) == len(pivots)


@given(matrix_strategy())
def test_snf_self_verifies(data):
    m = ExactMatrix.from_rows(data)
    d, u, v, vinv = smith_normal_form(m)
    diag = [int(d.entry(i, i)) for i in range(min(m.rows, m.cols))]
    diag = [x for x in diag if x]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    assert u * m * v == d


groups = st.builds(
    FGAbelianGroup,
    st.integers(0, 3),
    st.lists(st.integers(2, 12), max_size=3).map(tuple),
)


@given(groups, groups)
def test_tor_symmetry(a, b):
    assert tor1(a, b) == tor1(b, a)


@given(groups, groups)
def test_tensor_symmetry(a, b):
    assert a.tensor(b) == b.tensor(a)


@given(groups)
def test_tensor_unit(g):
    assert g.tensor(FGAbelianGroup.free(1)) == g


def two_step_complex():
    """Random three-degree complex with d1 built inside ker of composition."""
    def build(data):
        a_rows, combos = data
        a = ExactMatrix.from_rows(a_rows)  # d0: C0 -> C1, shape m x n
        ker_t = kernel_basis(a.transpose())
        rows = []
        for combo in combos:
            vec = [Fraction(0)] * a.rows
            for coeff, kv in zip(combo, ker_t):
                for i, x in enumerate(kv):
                    vec[i] += coeff * x
            rows.append(vec)
        if rows:
            b = ExactMatrix.from_rows(rows)
            dims = {0: a.cols, 1: a.rows, 2: b.rows}
            return CochainComplex(dims, {0: a, 1: b})
        return CochainComplex({0: a.cols, 1: a.rows}, {0: a})
    return st.tuples(
        matrix_strategy(3),
        st.lists(st.lists(small_entries, min_size=3, max_size=3), max_size=2),
    ).map(build)


@given(two_step_complex(), two_step_complex())
def test_kunneth_over_q(x, y):
    tot, _ = tensor_complex(x, y)
    bx, by, bt = x.betti_numbers(), y.betti_numbers(), tot.betti_numbers()
    for n in tot.degrees():
        conv = sum(bx.get(p, 0) * by.get(n - p, 0) for p in bx)
        assert bt[n] == conv


@given(two_step_complex())
def test_euler_is_alternating_betti_sum(c):
    b = c.betti_numbers()
    assert c.euler_characteristic() == sum((-1) ** k * v for k, v in b.items())
