"""Acceptance gate: headline results the package must reproduce exactly.

Every comparison here is exact; there are no tolerances anywhere.  Rows
that depend on a choice of model are cross-checked against independent
in-test oracles rather than against the library's own output.  Claims
the shipped models provably cannot attain are asserted in their exact
failing shape and then marked expected-failure with a pointer to
notes/decisions.md.
"""

import json

import pytest

from strat_ic import cli, duality, ic, sheaves, spaces
from strat_ic.examples import get_example
from strat_ic.linalg import (ExactMatrix, FGAbelianGroup, rank,
                             smith_normal_form)


# -- 1: the stratumwise cone table, total row (2, 1, 1) --------------------

class TestConeTableTotals:
    def test_cone_circle_total_row(self):
        rep = ic.stratified_de_rham(get_example("cone-s1"))
        assert list(rep.total) == [2, 1, 1]

    def test_cone_circle_rows(self):
        rep = ic.stratified_de_rham(get_example("cone-s1"))
        assert {p: list(r) for p, r in rep.rows.items()} == {
            0: [1, 0, 0], 2: [1, 1, 1]}

    def test_table_overcounts_components(self):
        # the table's degree-zero entry is 2 although the cone is
        # connected; the hypercohomology row keeps the honest count
        rep = ic.stratified_de_rham(get_example("cone-s1"))
        assert rep.total[0] == 2
        assert list(rep.ladder) == [1, 0, 0]
        assert len(get_example("cone-s1").complex.connected_components()) == 1


# -- 2: middle dimension of the genus-two cone table -----------------------

class TestGenusTwoMiddle:
    def test_middle_dimension_is_twice_genus(self):
        rows = ic.stratumwise_rows(get_example("cone-genus2"))
        total = [sum(r[k] for r in rows.values()) for k in range(4)]
        assert total[1] == 4

    def test_full_total_row(self):
        rows = ic.stratumwise_rows(get_example("cone-genus2"))
        total = [sum(r[k] for r in rows.values()) for k in range(4)]
        assert total == [2, 4, 1, 1]


# -- 3: cone formula for both middle perversities --------------------------

def truncated_link_row(base, cut, width):
    """Independent oracle: cone cohomology is the base's, cut at `cut`."""
    b = base.complex.betti_numbers()
    return [b[k] if k <= cut and k < len(b) else 0 for k in range(width)]


@pytest.mark.parametrize("base_name", ["s1", "t2", "genus2", "s2"])
@pytest.mark.parametrize("pname", ["m", "n"])
def test_cone_formula(base_name, pname):
    base = get_example(base_name)
    cone = get_example("cone-" + base_name)
    perv = ic.Perversity.named(pname)
    res = ic.deligne_construction(cone, perv)
    cut = perv(cone.top)
    assert list(res.betti()) == truncated_link_row(base, cut, cone.dim + 1)


def test_cone_formula_certificates():
    res = ic.deligne_construction(get_example("cone-t2"),
                                  ic.Perversity.upper_middle())
    cert = ic.verify_support_conditions(res)
    assert all(row["ok"] for row in cert.values())


# -- 4: Witt condition decides when the two ladders agree ------------------

WITT_EXAMPLES = ["s1", "s2", "t2", "genus2", "cone-s1", "cone-s2"]
NON_WITT_EXAMPLES = ["cone-t2", "cone-genus2", "suspension-t2"]


@pytest.mark.parametrize("name", WITT_EXAMPLES)
def test_witt_spaces_have_one_ladder(name):
    space = get_example(name)
    assert ic.witt_check(space)["is_witt"] is True
    rep = ic.stratified_de_rham(space)
    assert tuple(rep.ladder) == tuple(rep.deligne)
    low = ic.deligne_construction(space, ic.Perversity.lower_middle())
    up = ic.deligne_construction(space, ic.Perversity.upper_middle())
    assert list(low.betti()) == list(up.betti())


@pytest.mark.parametrize("name", NON_WITT_EXAMPLES)
def test_non_witt_spaces_split(name):
    space = get_example(name)
    report = ic.witt_check(space)
    assert report["is_witt"] is False
    odd = [p for p, e in report["strata"].items()
           if e["codim"] % 2 == 1 and not e["ok"]]
    assert odd, "a failing odd-codimension stratum must be named"
    low = ic.deligne_construction(space, ic.Perversity.lower_middle())
    up = ic.deligne_construction(space, ic.Perversity.upper_middle())
    assert list(low.betti()) != list(up.betti())


# -- 5: nondegenerate pairings, closed and refined -------------------------

class TestClosedDuality:
    @pytest.mark.parametrize("name", ["s2", "t2", "genus2"])
    def test_all_degree_pairings(self, name):
        space = get_example(name)
        for k in range(space.dim + 1):
            pm = duality.duality_pairing(space, k)
            assert pm.matrix.rows == pm.matrix.cols
            assert pm.nondegenerate()


@pytest.fixture(scope="module")
def refinements():
    st = get_example("suspension-t2")
    verts = sorted(st.stratum(0))
    laggies = {v: ic.lagrangian_subspaces(
        ic.link_middle_form(st, v)[2], count_limit=3) for v in verts}
    return st, verts, laggies


class TestRefinedDuality:
    """Both-vertex refinements of the double cone over the torus."""

    def test_three_lagrangians_self_dual(self, refinements):
        st, verts, laggies = refinements
        for i in range(3):
            mezzo = ic.Mezzoperversity({v: laggies[v][i] for v in verts})
            dims = list(ic.refined_ic(st, mezzo).betti())
            assert dims == [1, 1, 1, 1]
            assert dims == dims[::-1]

    def test_refined_pairing_every_degree(self, refinements):
        st, verts, laggies = refinements
        mezzo = ic.Mezzoperversity({v: laggies[v][0] for v in verts})
        res = ic.refined_ic(st, mezzo)
        for k in range(4):
            pm = duality.ic_pairing(res, res, k)
            assert pm.matrix.rows == pm.matrix.cols == 1
            assert pm.nondegenerate()

    def test_middle_perversity_pairing_across_duals(self):
        st = get_example("suspension-t2")
        low = ic.deligne_construction(st, ic.Perversity.lower_middle())
        up = ic.deligne_construction(st, ic.Perversity.upper_middle())
        for k in range(4):
            pm = duality.ic_pairing(low, up, k)
            assert pm.matrix.rows == pm.matrix.cols
            assert pm.nondegenerate()


# -- 6: product formula ----------------------------------------------------

class TestProducts:
    def test_torus_as_product(self):
        rep = duality.kunneth(get_example("s1"), get_example("s1"))
        assert rep.match
        assert list(rep.lhs) == [1, 2, 1]

    @pytest.mark.parametrize("left,right", [
        ("s1", "s2"), ("cone-s1", "s1"), ("interval", "t2")])
    def test_rational_products(self, left, right):
        rep = duality.kunneth(get_example(left), get_example(right))
        assert rep.match

    def test_stratumwise_product(self):
        rep = duality.kunneth(get_example("cone-s1"), get_example("s1"),
                              mode="stratumwise")
        assert rep.match
        assert rep.closed_strata_ok


# -- 7: integral products need the torsion correction ----------------------

RP2_TRIANGLES = [(0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (0, 4, 5),
                 (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5)]


def projective_plane():
    return spaces.single_stratum(spaces.SimplicialComplex(6, RP2_TRIANGLES))


class TestIntegralProducts:
    def test_projective_plane_has_torsion(self):
        groups = projective_plane().complex.cochain_complex() \
            .cohomology_groups()
        assert groups[2].describe() == "Z/2"

    def test_torsion_appears_in_new_degree(self):
        rep = duality.kunneth(projective_plane(), get_example("s1"),
                              mode="integral")
        assert rep.match
        # degree 3 of the product carries torsion although neither factor
        # has any in degree 3 or 0; rationally this degree is invisible
        assert rep.lhs[3] == "Z/2"
        rational = duality.kunneth(projective_plane(), get_example("s1"))
        assert rational.lhs[3] == 0

    def test_group_level_prediction_against_resolution(self):
        z2 = FGAbelianGroup(0, (2,))
        ga = {0: FGAbelianGroup.free(1), 2: z2}
        pred = duality.integral_prediction(ga, ga, 5)
        # oracle: Tor(Z/a, Z/b) = Z/gcd(a, b), gcd off the Smith form
        diag = smith_normal_form(ExactMatrix.from_rows([[2, 2]]))[0]
        g = int(abs(diag.entry(0, 0)))
        assert g == 2
        assert pred[3].describe() == "Z/%d" % g
        assert pred[4].describe() == "Z/2"
        assert pred[2].describe() == "Z/2 + Z/2"
        assert pred[1].describe() == "0"

    def test_tor_vanishes_against_free(self):
        z2 = FGAbelianGroup(0, (2,))
        free = {0: FGAbelianGroup.free(1), 1: FGAbelianGroup.free(1)}
        torsion = {0: FGAbelianGroup.free(1), 2: z2}
        pred = duality.integral_prediction(free, torsion, 4)
        assert pred[3].describe() == "Z/2"  # tensor only, no new torsion
        assert all("Z/" not in pred[k].describe() or k >= 2
                   for k in range(4))


# -- 8: collapse of a product, one extra class per fiber degree ------------

@pytest.fixture(scope="module")
def circle_report():
    return duality.fibration_decomposition(get_example("s1"))


@pytest.fixture(scope="module")
def genus2_report():
    return duality.fibration_decomposition(get_example("genus2"))


class TestFibrationDecomposition:
    def test_circle_rows(self, circle_report):
        rows = circle_report["rows"]
        assert rows["total"] == [1, 1, 0]
        assert rows["ih"] == [1, 0, 0]
        assert rows["skyscraper"] == [0, 1, 0]

    def test_circle_additivity_every_degree(self, circle_report):
        assert circle_report["additivity"]["ok"] is True

    def test_genus2_rows(self, genus2_report):
        rows = genus2_report["rows"]
        assert rows["total"] == [1, 4, 1, 0]
        assert rows["ih"] == [1, 4, 0, 0]
        assert rows["skyscraper"] == [0, 0, 1, 0]

    def test_genus2_additivity_every_degree(self, genus2_report):
        assert genus2_report["additivity"]["ok"] is True

    def test_genus2_degree_two_gains_one(self, genus2_report):
        split = genus2_report["degree_split"]
        assert split["total"] == split["ih"] + 1
        assert split["shows_plus_one"] is True

    def test_pushforward_matches_cone_truncation(self):
        rep = duality.fibration_decomposition(get_example("s1"),
                                              max_kan_cells=150)
        swapped = duality.fibration_decomposition(get_example("s1"),
                                                  max_kan_cells=1)
        assert rep["mode"] == "pushforward"
        assert swapped["mode"] == "cone-truncation"
        assert rep["rows"]["ih"] == swapped["rows"]["ih"]

    def test_circle_degree_two_extra_class(self, circle_report):
        # over the interval model the collapsed circle has no degree-two
        # class at all, so the extra class shows up in degree one instead
        split = circle_report["degree_split"]
        assert split["total"] == 0 and split["ih"] == 0
        assert circle_report["rows"]["skyscraper"][1] == 1
        if split["shows_plus_one"]:
            pytest.fail("degree-two class appeared; revisit the model notes")
        pytest.xfail("the degree-two gain needs a two-dimensional fiber; "
                     "the interval model carries it in degree one "
                     "(notes/decisions.md)")

    @pytest.mark.parametrize("name,bad_degrees", [
        ("s1", [1, 2]), ("genus2", [3])])
    def test_shifted_fiber_row_identity(self, name, bad_degrees):
        rep = duality.fibration_decomposition(get_example(name))
        lit = rep["literal_additivity"]
        assert lit["informational"] is True
        failing = [r["degree"] for r in lit["per_degree"] if not r["ok"]]
        if lit["ok"]:
            pytest.fail("shifted-row identity unexpectedly holds; "
                        "revisit the model notes")
        assert failing == bad_degrees
        pytest.xfail("degree-shifted base row cannot balance over the "
                     "interval model; exact failing degrees asserted "
                     "above (notes/decisions.md)")


# -- 9: one local class per singular point under any Lagrangian ------------

class TestLocalContribution:
    def test_each_lagrangian_contributes_one(self):
        ct = get_example("cone-t2")
        apex = sorted(ct.stratum(0))[0]
        form = ic.link_middle_form(ct, apex)[2]
        laggies = ic.lagrangian_subspaces(form, count_limit=3)
        assert len(laggies) == 3
        for w in laggies:
            out = duality.local_contribution(
                ct, ic.Mezzoperversity({apex: w}), level=0)
            assert out["per_vertex"][apex] == 1
            assert out["value"] == 1

    def test_extreme_choices_contribute_zero(self):
        # the full middle cohomology has trivial perp under a
        # nondegenerate form, and the zero choice has trivial
        # intersection; only proper choices can contribute
        ct = get_example("cone-t2")
        apex = sorted(ct.stratum(0))[0]
        _lk, basis, _form = ic.link_middle_form(ct, apex)
        for w in (ExactMatrix.identity(len(basis)),
                  ExactMatrix.zeros(len(basis), 0)):
            out = duality.local_contribution(
                ct, ic.Mezzoperversity({apex: w}), level=0)
            assert out["value"] == 0

    def test_double_cone_counts_both_points(self):
        st = get_example("suspension-t2")
        verts = sorted(st.stratum(0))
        mezzo = ic.Mezzoperversity({
            v: ic.lagrangian_subspaces(
                ic.link_middle_form(st, v)[2], count_limit=1)[0]
            for v in verts})
        out = duality.local_contribution(st, mezzo)
        assert out["value"] == 2
        assert sorted(out["per_vertex"].values()) == [1, 1]


# -- 10: randomized invariants hold and reports are reproducible -----------

class TestPropertySweep:
    @pytest.mark.parametrize("seed", range(10))
    def test_seed_passes_and_is_reproducible(self, seed):
        first = cli.property_suite(seed=seed)
        failed = [r["label"] for r in first.rows if r["verdict"] is False]
        assert failed == []
        again = cli.property_suite(seed=seed)
        a = cli.canonical_json(first.to_dict())
        b = cli.canonical_json(again.to_dict())
        assert a == b

    def test_mutation_is_caught(self):
        bundle = cli.property_suite(seed=0, mutate="cup-sign")
        bad = [r for r in bundle.rows if r["verdict"] is False]
        assert bad
        assert any("graded-commutativity" in r["label"] for r in bad)

    def test_reports_are_valid_json(self):
        bundle = cli.property_suite(seed=0)
        doc = json.loads(cli.canonical_json(bundle.to_dict()))
        assert doc["schema"] == 1
