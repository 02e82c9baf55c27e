"""Oracles for complexes, stratifications, and constructors.

The classical invariants asserted here (f-vectors, Euler characteristics,
betti numbers of surfaces, suspension shifts) are frozen targets computed
independently of the code under test.
"""

import doctest

import pytest
from hypothesis import given, strategies as st

from strat_ic import examples, spaces
from strat_ic.examples import UnknownExample, get_example
from strat_ic.linalg import FGAbelianGroup
from strat_ic.spaces import (
    CellNotFound, FiltrationNotClosed, FrontierViolation, SimplicialComplex,
    SubcomplexNotClosed, build_stratified, collapse, cone, link, product,
    product_projections, single_stratum, suspension,
)


def test_doctests():
    assert doctest.testmod(examples).failed == 0


# -- basic complexes -------------------------------------------------------

def test_f_vectors():
    assert get_example("point").complex.f_vector() == (1,)
    assert get_example("interval").complex.f_vector() == (2, 1)
    assert get_example("s1").complex.f_vector() == (3, 3)
    assert get_example("s2").complex.f_vector() == (4, 6, 4)
    assert get_example("t2").complex.f_vector() == (7, 21, 14)
    assert get_example("genus2").complex.f_vector() == (11, 39, 26)


def test_euler_characteristics():
    for name, chi in [("point", 1), ("interval", 1), ("s1", 0),
                      ("s2", 2), ("t2", 0), ("genus2", -2)]:
        assert get_example(name).complex.euler_characteristic() == chi


def test_betti_numbers():
    assert get_example("s1").complex.betti_numbers() == (1, 1)
    assert get_example("s2").complex.betti_numbers() == (1, 0, 1)
    assert get_example("t2").complex.betti_numbers() == (1, 2, 1)
    assert get_example("genus2").complex.betti_numbers() == (1, 4, 1)


def test_surfaces_are_closed():
    # every edge of a closed surface lies in exactly two triangles
    for name in ("s2", "t2", "genus2"):
        c = get_example(name).complex
        for e in c.cells_of_dim(1):
            stars = [t for t in c.cells_of_dim(2) if set(e) <= set(t)]
            assert len(stars) == 2, (name, e)


def test_face_closure_enforced():
    with pytest.raises(FiltrationNotClosed):
        SimplicialComplex(3, [(0, 1, 2)], close=False)


def test_cell_order_is_by_dim_then_lex():
    c = get_example("s2").complex
    dims = [len(x) for x in c.cells]
    assert dims == sorted(dims)
    for a, b in zip(c.cells, c.cells[1:]):
        assert (len(a), a) < (len(b), b)


def test_connected_components():
    two = SimplicialComplex(4, [(0, 1), (2, 3)])
    assert len(two.connected_components()) == 2
    assert len(get_example("genus2").complex.connected_components()) == 1


# -- stratification validation --------------------------------------------

def test_build_stratified_rejects_nonclosed_filtration():
    c = get_example("s1").complex
    filt = {0: [(0, 1)], 1: list(c.cells)}
    with pytest.raises(FiltrationNotClosed):
        build_stratified(c, filt)


def test_frontier_violation_names_the_pair():
    c = SimplicialComplex(4, [(0, 1), (2, 3)])
    filt = {0: [(0,), (2,)], 1: [(1,), (0, 1)], 2: list(c.cells)}
    with pytest.raises(FrontierViolation) as err:
        build_stratified(c, filt)
    assert "(1, 0)" in str(err.value)


def test_single_stratum_levels():
    s = get_example("t2")
    assert s.stratum_levels() == [2]
    assert s.regular_part() == list(s.complex.cells)
    assert s.coefficient(2).describe() == "Z"


def test_constructors_revalidate():
    # validate() runs on every constructor output without raising
    for name in ("cone-s1", "suspension-t2", "product:s1,s1", "cone-genus2"):
        get_example(name).validate()


# -- cone and suspension ---------------------------------------------------

def test_cone_shape():
    s = get_example("cone-s1")
    assert s.complex.f_vector() == (4, 6, 3)
    assert s.complex.betti_numbers() == (1, 0, 0)
    assert s.strata()[0] == [(3,)]
    assert len(s.stratum(2)) == 12
    assert s.to_json()["filtration"]["0"] == [[3]]


def test_cone_coefficient_shift():
    base = single_stratum(examples._torus(),
                          {2: FGAbelianGroup(1, (2,))})
    c = cone(base)
    assert c.coefficient(0).describe() == "Z"
    assert c.coefficient(3).describe() == "Z + Z/2"


def test_suspension_shape():
    s = get_example("suspension-t2")
    assert s.stratum_levels() == [0, 3]
    assert s.stratum(0) == [(7,), (8,)]
    assert len(s.components_of_stratum(0)) == 2
    assert s.complex.euler_characteristic() == 2
    assert s.complex.betti_numbers() == (1, 0, 2, 1)


def test_cone_top_components_match_base():
    for name in ("s1", "s2", "genus2"):
        s = get_example("cone-" + name)
        base = get_example(name)
        assert (len(s.components_of_stratum(s.top))
                == len(base.complex.connected_components()))


# -- link ------------------------------------------------------------------

def test_link_of_cone_apex_is_base():
    for name in ("s1", "t2", "genus2"):
        s = get_example("cone-" + name)
        apex = (s.complex.n_vertices - 1,)
        lk = link(s, apex)
        base = get_example(name)
        assert lk.complex.f_vector() == base.complex.f_vector()
        assert lk.complex.betti_numbers() == base.complex.betti_numbers()
        assert lk.stratum_levels() == [base.dim]
        assert lk.base_cell == apex
        # apex link vertices are exactly the base vertices, in order
        assert [lk.vertex_map[i] for i in range(lk.complex.n_vertices)] \
            == list(range(base.complex.n_vertices))


def test_link_in_closed_surface_is_circle():
    s = get_example("t2")
    lk = link(s, (0,))
    assert lk.complex.betti_numbers() == (1, 1)
    assert lk.complex.f_vector() == (6, 6)


def test_link_missing_cell():
    with pytest.raises(CellNotFound):
        link(get_example("s1"), (0, 1, 2))


def test_link_of_facet_is_empty():
    lk = link(get_example("s1"), (0, 1))
    assert lk.complex.cells == ()


# -- product ---------------------------------------------------------------

def test_product_torus_from_circles():
    s = product(get_example("s1"), get_example("s1"))
    assert s.complex.f_vector() == (9, 27, 18)
    assert s.complex.betti_numbers() == (1, 2, 1)
    assert s.stratum_levels() == [2]


def test_product_euler_multiplicative():
    pairs = [("s1", "s2"), ("t2", "s1"), ("s2", "s2"), ("interval", "genus2")]
    for a, b in pairs:
        sa, sb = get_example(a), get_example(b)
        p = product(sa, sb)
        assert (p.complex.euler_characteristic()
                == sa.complex.euler_characteristic()
                * sb.complex.euler_characteristic())


def test_product_levels_add():
    p = get_example("product:cone-s1,s1")
    assert p.stratum_levels() == [1, 3]
    # apex x circle: a closed circle stratum
    assert len(p.stratum(1)) == 6
    assert len(p.components_of_stratum(1)) == 1


def test_product_projections_land_in_factors():
    p = get_example("product:s1,interval")
    for cell in p.complex.cells:
        a, b = product_projections(cell, p.n_right)
        assert a in p.factors[0].complex.cell_index
        assert b in p.factors[1].complex.cell_index
        assert p.levels[cell] == p.factors[0].levels[a] + p.factors[1].levels[b]


def test_product_coefficients_convolve():
    ga = single_stratum(examples._circle(), {1: FGAbelianGroup(0, (4,))})
    gb = single_stratum(examples._circle(), {1: FGAbelianGroup(0, (6,))})
    p = product(ga, gb)
    assert p.coefficient(2).describe() == "Z/2"  # Z/4 tensor Z/6


# -- collapse --------------------------------------------------------------

def _product_slice(p, right_vertex):
    """Cells of X x {v} inside a product with right factor vertex v."""
    out = []
    for cell in p.complex.cells:
        if all(v % p.n_right == right_vertex for v in cell):
            out.append(cell)
    return out


def test_collapse_of_product_slice_is_cone():
    base = get_example("s1")
    cyl = product(base, get_example("interval"))
    sub = _product_slice(cyl, 0)
    q, cmap = collapse(cyl, sub)
    reference = get_example("cone-s1")
    assert q.complex.f_vector() == reference.complex.f_vector()
    assert q.complex.betti_numbers() == reference.complex.betti_numbers()
    assert q.strata()[0] == [(0,)]
    assert len(q.stratum(2)) == len(reference.stratum(2))
    assert set(cmap) == set(cyl.complex.cells)
    for img in cmap.values():
        assert img in q.complex.cell_index
    for c in sub:
        assert cmap[c] == (0,)


def test_collapse_rejects_open_subset():
    s = get_example("s1")
    with pytest.raises(SubcomplexNotClosed):
        collapse(s, [(0, 1)])
    with pytest.raises(SubcomplexNotClosed):
        collapse(s, [(0, 1, 2)])
    with pytest.raises(SubcomplexNotClosed):
        collapse(s, [])


def test_collapse_whole_subcomplex_level_zero():
    s = get_example("t2")
    q, cmap = collapse(s, [c for c in s.complex.cells if set(c) <= {0, 1, 3}])
    assert q.levels[(0,)] == 0
    assert q.stratum(0) == [(0,)]
    # image cells of the collapsed part all hit the fresh vertex
    for c in s.complex.cells:
        if set(c) <= {0, 1, 3}:
            assert cmap[c] == (0,)
    q.validate()


# -- serialization ---------------------------------------------------------

def test_json_roundtrip():
    for name in ("cone-s1", "suspension-t2", "product:s1,interval"):
        s = get_example(name)
        obj = s.to_json()
        back = spaces.StratifiedComplex.from_json(obj)
        assert back.complex.cells == s.complex.cells
        assert back.levels == s.levels
        for p in s.stratum_levels():
            assert back.coefficient(p) == s.coefficient(p)


def test_json_missing_filtration_gives_single_stratum():
    obj = {"vertices": 3, "simplices": [[0, 1], [1, 2], [0, 2]]}
    s = spaces.StratifiedComplex.from_json(obj)
    assert s.stratum_levels() == [1]


def test_unknown_example():
    with pytest.raises(UnknownExample):
        get_example("klein")
    with pytest.raises(UnknownExample):
        get_example("product:s1")


# -- property tests --------------------------------------------------------

_NAMES = ["point", "interval", "s1", "s2", "t2"]


@given(st.sampled_from(_NAMES))
def test_cone_is_acyclic(name):
    c = cone(get_example(name))
    b = c.complex.betti_numbers()
    assert b[0] == 1 and not any(b[1:])


@given(st.sampled_from(_NAMES), st.sampled_from(_NAMES))
def test_product_chi(a, b):
    p = product(get_example(a), get_example(b))
    assert (p.complex.euler_characteristic()
            == get_example(a).complex.euler_characteristic()
            * get_example(b).complex.euler_characteristic())


@given(st.sampled_from(_NAMES))
def test_apex_link(name):
    s = cone(get_example(name))
    lk = link(s, (s.complex.n_vertices - 1,))
    assert lk.complex.f_vector() == get_example(name).complex.f_vector()
