"""Tests for finite automorphism actions and their induced actions."""
import pytest

from sphdescent.intlinalg import IntMatrix, Lattice, vec_dot
from sphdescent.rootdata import build_root_datum, torus
from sphdescent.staraction import (
    ClosureCapExceeded,
    action_on_simple_subset,
    build_action,
    dual_action_on_V,
    induced_action_on_sublattice,
    stabilizes_simple_subset,
)


@pytest.fixture(scope="module")
def d4():
    return build_root_datum("D", 4)


@pytest.fixture(scope="module")
def triality(d4):
    # alpha1 -> alpha3 -> alpha4 -> alpha1, alpha2 fixed
    return build_action(d4, [(2, 1, 3, 0)], names=("t",))


def alpha_coords(brd):
    c = brd.cartan_matrix.entries
    return [tuple(c[i][j] for i in range(brd.rank)) for j in range(brd.rank)]


def test_trivial_action(d4):
    act = build_action(d4, [])
    assert act.order == 1 and act.is_trivial
    assert act.label(0) == "e"


def test_triality_closure_order_three(triality):
    assert triality.order == 3
    assert [triality.label(k) for k in range(3)] == ["e", "t", "t*t"]


def test_full_s3_closure_order_six(d4):
    act = build_action(d4, [(2, 1, 3, 0), (0, 1, 3, 2)])
    assert act.order == 6


def test_closure_is_a_group(d4):
    act = build_action(d4, [(2, 1, 3, 0), (0, 1, 3, 2)])
    mats = {el.matrix.entries for el in act.elements}
    assert IntMatrix.identity(4).entries in mats
    for a in act.elements:
        assert a.matrix.inverse_unimodular().entries in mats
        for b in act.elements:
            assert (a.matrix @ b.matrix).entries in mats


def test_generator_validation(d4):
    with pytest.raises(ValueError):
        build_action(d4, [(1, 0, 2, 3)])  # not a diagram symmetry
    with pytest.raises(ValueError):
        build_action(d4, [-IntMatrix.identity(4)])
    with pytest.raises(ValueError):
        build_action(d4, [(2, 1, 3, 0)], names=("a", "b"))


def test_infinite_closure_hits_cap():
    t2 = torus(2)
    shear = IntMatrix.from_rows([[1, 1], [0, 1]])
    with pytest.raises(ClosureCapExceeded, match="finite"):
        build_action(t2, [shear])


def test_torus_finite_order_generator_is_fine():
    t2 = torus(2)
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert build_action(t2, [swap]).order == 2


def test_restriction_to_stable_span(d4, triality):
    a = alpha_coords(d4)
    lat = Lattice.from_rows(4, [
        tuple(x - y for x, y in zip(a[0], a[2])),
        tuple(x - y for x, y in zip(a[2], a[3]))])
    ind = induced_action_on_sublattice(triality, lat)
    assert ind.present and ind.violator is None
    assert len(ind.matrices) == 3
    assert ind.matrices[0] == IntMatrix.identity(2)
    m = ind.matrices[1]
    assert m.entries == ((-1, -1), (1, 0))
    assert m @ m @ m == IntMatrix.identity(2)
    assert len({x.entries for x in ind.matrices}) == 3


def test_restriction_absent_names_violator(d4, triality):
    lat = Lattice.from_rows(4, [alpha_coords(d4)[0]])
    ind = induced_action_on_sublattice(triality, lat)
    assert not ind.present
    assert ind.matrices is None and ind.violator == "t"


def test_trivial_action_restricts_to_identity(d4):
    act = build_action(d4, [])
    lat = Lattice.from_rows(4, [(1, 2, 0, 0), (0, 0, 3, 1)])
    ind = induced_action_on_sublattice(act, lat)
    assert ind.present and ind.matrices == (IntMatrix.identity(2),)


def test_fixed_lattice_restriction_is_trivial(triality):
    lat = triality.fixed_lattice
    assert lat.rank == 2
    ind = induced_action_on_sublattice(triality, lat)
    assert ind.present
    assert all(m == IntMatrix.identity(2) for m in ind.matrices)


def test_restriction_independent_of_generating_rows(d4, triality):
    a = alpha_coords(d4)
    g1 = tuple(x - y for x, y in zip(a[0], a[2]))
    g2 = tuple(x - y for x, y in zip(a[2], a[3]))
    lat1 = Lattice.from_rows(4, [g1, g2])
    lat2 = Lattice.from_rows(4, [tuple(x + y for x, y in zip(g1, g2)), g2,
                                 tuple(-x for x in g1)])
    assert lat1 == lat2  # canonical basis, so restrictions agree verbatim
    assert (induced_action_on_sublattice(triality, lat1)
            == induced_action_on_sublattice(triality, lat2))


def test_dual_action_is_the_cyclic_permutation_on_dual_alpha_basis(d4, triality):
    a = alpha_coords(d4)
    root_lat = Lattice.from_rows(4, a)
    dual = dual_action_on_V(triality, root_lat)
    # switch from the canonical-basis dual to the dual of the alpha basis:
    # if T columns express alpha_i in the canonical basis, functionals
    # transform by T^T on one side and T^{-T} on the other
    cols = [root_lat.coordinates(v) for v in a]
    t = IntMatrix.from_rows([[cols[i][j] for i in range(4)] for j in range(4)])
    d_alpha = t.transpose() @ dual[1] @ t.inverse_unimodular().transpose()
    perm = IntMatrix.from_rows(
        [[1 if j == (2, 1, 3, 0)[i] else 0 for j in range(4)] for i in range(4)])
    assert d_alpha in (perm, perm.transpose())


def test_dual_action_preserves_evaluation_pairing(d4, triality):
    a = alpha_coords(d4)
    root_lat = Lattice.from_rows(4, a)
    ind = induced_action_on_sublattice(triality, root_lat)
    dual = dual_action_on_V(triality, root_lat)
    x, y = (1, 2, 3, 4), (2, -1, 0, 5)
    for n, m in zip(ind.matrices, dual):
        assert vec_dot(n.apply(x), m.apply(y)) == vec_dot(x, y)
        order_n = _order(n)
        assert _order(m) == order_n


def _order(m, cap=64):
    acc = m
    ident = IntMatrix.identity(m.rows)
    for k in range(1, cap + 1):
        if acc == ident:
            return k
        acc = acc @ m
    raise AssertionError("order exceeds cap")


def test_dual_action_requires_stable_lattice(d4, triality):
    lat = Lattice.from_rows(4, [alpha_coords(d4)[0]])
    with pytest.raises(ValueError, match="t"):
        dual_action_on_V(triality, lat)


def test_action_on_simple_subsets(triality):
    t = triality.elements[1]
    assert action_on_simple_subset(triality, {1}, t) == {1}
    assert action_on_simple_subset(triality, {0, 2, 3}, t) == {0, 2, 3}
    assert action_on_simple_subset(triality, set(), t) == frozenset()
    assert action_on_simple_subset(triality, {0}, t) == {2}
    with pytest.raises(ValueError):
        action_on_simple_subset(triality, {9}, t)


def test_stabilizes_simple_subset(triality):
    assert stabilizes_simple_subset(triality, {1})
    assert stabilizes_simple_subset(triality, {0, 2, 3})
    assert not stabilizes_simple_subset(triality, {0})


def test_generator_stability_propagates_to_closure(d4):
    # stability under every closure element follows from the generators
    act = build_action(d4, [(2, 1, 3, 0), (0, 1, 3, 2)])
    for subset in ({1}, {0, 2, 3}, {0, 1, 2, 3}, set()):
        gen_ok = all(action_on_simple_subset(act, subset, g) == frozenset(subset)
                     for g in act.generators)
        all_ok = stabilizes_simple_subset(act, subset)
        assert gen_ok == all_ok
