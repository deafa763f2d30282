from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import framework_from_seed, seeds
from gridrig.geometry import LINF, Framework, IllPositioned, SymmetricFramework, make_norm
from gridrig.linalg import RationalMatrix
from gridrig.quotient import SignedQuotientGraph
from gridrig.rigidity import (
    decompose_flex,
    default_orientation,
    flex_bases,
    general_rigidity_matrix,
    is_antisymmetric_vector,
    is_symmetric_vector,
    lift_flex,
    orbit_matrix_anti,
    orbit_matrix_sym,
    rigidity_matrix,
    rigidity_report,
    trivial_flex_dims,
    trivial_flexes,
)

F = Fraction
TRIANGLE = {"p0": (0, 0), "p1": (1, F(1, 5)), "p2": (F(3, 5), 1)}
K4 = {"p0": (0, 0), "p1": (1, F(1, 5)), "p2": (F(-1, 5), 1), "p3": (F(6, 5), F(7, 5))}


def test_two_bars_have_two_internal_freedoms():
    fw = Framework((("p0", "p1"), ("p0", "p2")), TRIANGLE, LINF)
    assert general_rigidity_matrix(fw).nullity() == 4


def test_triangle_has_one_internal_freedom():
    fw = Framework((("p0", "p1"), ("p0", "p2"), ("p1", "p2")), TRIANGLE, LINF)
    assert general_rigidity_matrix(fw).nullity() == 3


def test_k4_template_is_rigid_with_path_colourings():
    edges = tuple((a, b) for i, a in enumerate(K4) for b in list(K4)[i + 1 :])
    fw = Framework(edges, K4, LINF)
    m = general_rigidity_matrix(fw)
    assert m.nullity() == 2 and m.rank() == 6


def test_tall_triangles_ranks(tall_triangles):
    r = rigidity_report(tall_triangles)
    assert r.sym_isostatic and not r.anti_isostatic and not r.inf_rigid
    assert r.ranks == {"df": 9, "O1": 5, "O2": 4}
    assert r.nullities == {"df": 3, "O1": 1, "O2": 2}


def test_flat_triangles_ranks(flat_triangles):
    r = rigidity_report(flat_triangles)
    assert r.anti_isostatic and not r.sym_isostatic and not r.inf_rigid


def test_single_fixed_bar():
    q = SignedQuotientGraph.from_triples("a", [("a", "a", -1)])
    f = SymmetricFramework.from_normalized(q, {"a": (1, 0)}, LINF)
    r = rigidity_report(f)
    assert r.sym_isostatic and not r.anti_isostatic
    # rep (0, 1); the fixed bar has direction (0, 2) and a loop row is twice its functional
    assert orbit_matrix_sym(f).to_strings() == [["0", "2"]]


def test_ill_positioned_raises():
    q = SignedQuotientGraph.from_triples("ab", [("a", "b", 1)])
    f = SymmetricFramework.from_normalized(q, {"a": (1, 1), "b": (2, 2)}, LINF)
    with pytest.raises(IllPositioned):
        rigidity_report(f)


@given(seeds)
def test_orbit_matrices_block_diagonalise(seed):
    f = framework_from_seed(seed)
    df, o1, o2 = rigidity_matrix(f), orbit_matrix_sym(f), orbit_matrix_anti(f)
    assert df.rank() == o1.rank() + o2.rank()
    assert df.nullity() == o1.nullity() + o2.nullity()


@given(seeds)
def test_lifted_orbit_flexes_are_flexes(seed):
    f = framework_from_seed(seed)
    df = rigidity_matrix(f)
    b = flex_bases(f, lifted=True)
    for v in b["sym_lifted"].vectors:
        assert all(x == 0 for x in df.apply(v)) and is_symmetric_vector(f, v)
    for v in b["anti_lifted"].vectors:
        assert all(x == 0 for x in df.apply(v)) and is_antisymmetric_vector(f, v)


@given(seeds)
def test_decomposition_parts_are_flexes(seed):
    f = framework_from_seed(seed)
    df = rigidity_matrix(f)
    for u in df.nullspace():
        a, b = decompose_flex(f, u)
        assert tuple(x + y for x, y in zip(a, b)) == tuple(u)
        assert all(x == 0 for x in df.apply(a))
        assert all(x == 0 for x in df.apply(b))
        assert is_symmetric_vector(f, a) and is_antisymmetric_vector(f, b)


@given(seeds, st.data())
def test_anti_rank_independent_of_orientation(seed, data):
    f = framework_from_seed(seed)
    orient = {}
    for eid, (t, h) in default_orientation(f.quotient).items():
        orient[eid] = (h, t) if data.draw(st.booleans()) else (t, h)
    assert orbit_matrix_anti(f, orient).rank() == orbit_matrix_anti(f).rank()


@given(seeds)
def test_trivial_flexes(seed):
    f = framework_from_seed(seed)
    assert trivial_flex_dims(f) == {"dimT": 2, "dimT1": 1, "dimT2": 1}
    df = rigidity_matrix(f)
    t = trivial_flexes(f)
    for v in t["T"]:
        assert all(x == 0 for x in df.apply(v))
    for v in t["T1"]:
        assert all(x == 0 for x in orbit_matrix_sym(f).apply(v))
    for v in t["T2"]:
        assert all(x == 0 for x in orbit_matrix_anti(f).apply(v))


@given(seeds)
def test_trivial_dims_in_l1(seed):
    f = framework_from_seed(seed)
    g = SymmetricFramework.from_normalized(f.quotient, f.normalized_reps(), make_norm((1, 1), (1, -1)))
    assert trivial_flex_dims(g) == {"dimT": 2, "dimT1": 1, "dimT2": 1}
    # normalising is an isometry, so ranks carry over
    assert rigidity_report(g).ranks == rigidity_report(f).ranks


def test_lift_checks_length(tall_triangles):
    with pytest.raises(ValueError):
        lift_flex(tall_triangles, [0, 0], "sym")
