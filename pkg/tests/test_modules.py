import pytest
from hypothesis import given, settings, strategies as st

from thomason import desk
from thomason import linalg as la
from thomason.errors import OutOfWindow, WindowTooNarrow
from thomason.modules import (GradedModule, annihilator_window, direct_sum, graded_piece,
                              support_in_distinguished)


def test_cyclic_dims():
    R = desk.q_x_y()
    M = GradedModule.cyclic(R, ["x^2", "y"], window=(0, 4))
    assert M.dim_table() == {0: 1, 1: 1}
    N = GradedModule.cyclic(R, ["x"], window=(0, 4))
    assert N.dim_table() == {d: 1 for d in range(5)} and not N.exact
    with pytest.raises(OutOfWindow):
        N.dim(7)
    assert N.dim(-2) == 0
    assert GradedModule.cyclic(R, ["x", "1"]).is_zero()


def test_free_module_over_artinian_ring_is_exact():
    R = desk.truncated_poly(3)
    F = GradedModule.free(R, [0, 2])
    assert F.exact and F.dim_table() == {0: 1, 1: 1, 2: 2, 3: 1, 4: 1}
    with pytest.raises(WindowTooNarrow):
        GradedModule.free(desk.q_x(), [0])


def test_actions_commute():
    R = desk.q_x_y()
    M = GradedModule.free(R, [0, 1], window=(0, 5))
    for d in range(0, 4):
        xy = la.matmul(M.field, M.act(1, d + 1), M.act(0, d))
        yx = la.matmul(M.field, M.act(0, d + 1), M.act(1, d))
        assert la.is_zero(xy - yx)


def test_annihilator_and_support():
    R = desk.q_x_y()
    P = desk.q_x_y_poset()
    M = GradedModule.cyclic(R, ["x^2", "x*y"], window=(0, 6))
    ann = annihilator_window(M)
    assert [R.format(g) for g in ann] == ["x^2", "x*y"]
    assert support_in_distinguished(M, P) == ["px", "m"]
    k = GradedModule.cyclic(desk.dual_numbers(), ["x"])
    assert [k.ring.format(g) for g in annihilator_window(k)] == ["x"]
    assert annihilator_window(GradedModule.zero(R))[0] == R.one()


def test_windowed_annihilator_needs_room():
    R = desk.q_x()
    M = GradedModule.cyclic(R, [], window=(0, 3), shift=5)
    with pytest.raises(WindowTooNarrow):
        annihilator_window(M)


def test_generator_degrees():
    R = desk.q_x_y()
    M = GradedModule.free(R, [0, 2], window=(0, 5))
    gens = M.generator_degrees()
    assert sorted(gens) == [0, 2] and all(g.shape[1] == 1 for g in gens.values())
    assert M.top_generator_degree() == 2


def test_fitting_projection_splits_the_product():
    R = desk.product_model()
    M = GradedModule.cyclic(R, [])
    for d in M.degrees():
        pe = M.fitting_projection(R.poly("e"), d)
        p1 = M.fitting_projection(R.one() - R.poly("e"), d)
        n = M.dim(d)
        assert la.is_zero(la.matmul(M.field, pe, pe) - pe)
        assert la.is_zero(pe + p1 - M.field.eye(n))
    assert la.rank(M.field, M.fitting_projection(R.poly("e"), 0)) == 1


def test_direct_sum_and_graded_piece():
    R = desk.dual_numbers()
    S = direct_sum([GradedModule.cyclic(R, []), GradedModule.cyclic(R, ["x"], shift=3)])
    assert S.dim_table() == {0: 1, 1: 1, 3: 1}
    assert graded_piece(R, None, 1) == [(1,)]
    assert len(graded_piece(R, S, 0)) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=3), st.integers(0, 2))
def test_free_module_dims_over_truncated_poly(degs, n):
    R = desk.truncated_poly(n + 1)
    F = GradedModule.free(R, degs)
    # R(-a) over k[x]/(x^(n+1)) has one basis vector in each degree a..a+n
    for d in F.degrees():
        assert F.dim(d) == sum(1 for a in degs if a <= d <= a + n)
    assert sum(F.dim_table().values()) == len(degs) * (n + 1)
