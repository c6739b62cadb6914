import pytest

from logres.blowup import (
    Atlas,
    CenterNotInChart,
    Chart,
    CodimensionOne,
    blow_up_center,
    root_chart,
    saturate_exceptional,
    strict_transform_variety,
    transform_ideal,
)
from logres.monideal import MonomialIdeal, SimpleVariety
from logres.symcore import Polynomial, monomial_string, substitute


def V(*names):
    return SimpleVariety(frozenset(names))


def sq(variables, *sets):
    return MonomialIdeal.from_varsets(variables, sets)


def chart_substitution_polys(chart):
    """The chart map as polynomials, for the substitution oracle."""
    return {
        v: Polynomial.monomial(chart.variables, exp)
        for v, exp in chart.to_parent
    }


def oracle_total_transform(chart, ideal):
    """Total transform generator-by-generator via polynomial substitution."""
    assignment = chart_substitution_polys(chart)
    gens = []
    for g in ideal.generators:
        f = Polynomial.monomial(ideal.variables, g)
        image = substitute(f, assignment)
        (exp,) = image.terms.keys()
        gens.append(exp)
    return MonomialIdeal.make(chart.variables, gens)


def test_codim_two_center_in_affine_three_space():
    base = root_chart(("x1", "x2", "x3"))
    charts = blow_up_center(base, V("x1", "x2"))
    assert [c.id for c in charts] == ["root/E:x1", "root/E:x2"]
    first = charts[0]
    assert first.variables == ("x1", "x2~", "x3")
    images = {v: monomial_string(first.variables, e) for v, e in first.to_parent}
    assert images == {"x1": "x1", "x2": "x1*x2~", "x3": "x3"}
    assert first.exceptional == (("E", "x1"),)


def test_point_blowup_has_n_charts():
    n = 4
    names = tuple(f"x{i}" for i in range(1, n + 1))
    base = root_chart(names)
    charts = blow_up_center(base, SimpleVariety(frozenset(names)))
    assert len(charts) == n
    for chart in charts:
        substituted = [
            v for v, e in chart.to_parent if sum(e) > 1
        ]
        assert len(substituted) == n - 1


def test_composed_substitution_matches_oracle():
    # blow up V(x2, x3) inside a child chart coming from a prior blow-up
    base = root_chart(("x1", "x2", "x3"))
    child = blow_up_center(base, V("x1", "x2"), label="E1")[1]  # x2-direction
    assert child.variables == ("x1~", "x2", "x3")
    grand = blow_up_center(child, V("x2", "x3"), label="E2")[0]  # x2-direction
    atlas = Atlas.for_root(base)
    atlas.add_blowup(base.id, [child])
    atlas.add_blowup(child.id, [grand])

    composed = atlas.substitution_to_root(grand.id)
    # oracle: compose the two substitution maps with polynomial arithmetic
    inner = chart_substitution_polys(child)
    outer = chart_substitution_polys(grand)
    for v in base.variables:
        expected = substitute(inner[v], outer)
        assert Polynomial.monomial(grand.variables, composed[v]) == expected


def test_transform_ideal_collapses_in_first_direction():
    base = root_chart(("x1", "x2", "x3"))
    ideal = sq(base.variables, {"x1"}, {"x2", "x3"})
    chart = blow_up_center(base, V("x1", "x2"))[0]
    record = transform_ideal(chart, ideal)
    assert record.total == sq(chart.variables, {"x1"})
    assert record.multiplicity_map == {"E": 1}
    assert record.strict.is_unit
    assert record.strict_is_simple_or_trivial
    assert record.total == oracle_total_transform(chart, ideal)


def test_transform_ideal_stays_simple_in_second_direction():
    base = root_chart(("x1", "x2", "x3"))
    ideal = sq(base.variables, {"x1"}, {"x2", "x3"})
    chart = blow_up_center(base, V("x1", "x2"))[1]
    record = transform_ideal(chart, ideal)
    assert record.total == MonomialIdeal.from_varsets(
        chart.variables, [{"x1~", "x2"}, {"x2", "x3"}]
    )
    assert record.multiplicity_map == {"E": 1}
    assert record.strict == sq(chart.variables, {"x1~"}, {"x3"})
    assert record.strict_is_simple_or_trivial
    assert oracle_total_transform(chart, ideal) == record.total


def test_ideal_disjoint_from_center_is_untouched():
    base = root_chart(("x1", "x2", "x3"))
    ideal = sq(base.variables, {"x3"})
    for chart in blow_up_center(base, V("x1", "x2")):
        record = transform_ideal(chart, ideal)
        assert record.multiplicity_map == {"E": 0}
        assert record.strict == sq(chart.variables, {"x3"})


def test_strict_transform_variety_matches_saturation_oracle():
    base = root_chart(("x1", "x2", "x3", "x4"))
    center = V("x1", "x2", "x3")
    for chart in blow_up_center(base, center):
        for vanishing in [
            {"x1", "x2"},
            {"x1", "x4"},
            {"x2", "x3"},
            {"x4"},
            {"x1", "x2", "x3"},
        ]:
            variety = SimpleVariety(frozenset(vanishing))
            got = strict_transform_variety(chart, variety)
            oracle = saturate_exceptional(
                chart, oracle_total_transform(chart, variety.prime(base.variables))
            )
            if got is None:
                assert oracle.is_unit
            else:
                assert oracle == got.prime(chart.variables)


def test_log_marking_propagation():
    base = root_chart(("z1", "z2", "xi2"), log_marked=("z1", "z2"))
    charts = blow_up_center(base, V("z1", "xi2"))
    by_dir = {c.direction: c for c in charts}
    # z1-direction: z1 keeps its mark and now also cuts the exceptional divisor
    assert by_dir["z1"].log_marked == {"z1", "z2"}
    # xi2-direction: renamed z1~ stays marked, xi2 newly marked as exceptional
    assert by_dir["xi2"].variables == ("z1~", "z2", "xi2")
    assert by_dir["xi2"].log_marked == {"z1~", "z2", "xi2"}

    unmarked = root_chart(("x1", "x2", "x3"))
    for chart in blow_up_center(unmarked, V("x1", "x2")):
        assert chart.log_marked == frozenset()


def test_center_errors():
    base = root_chart(("x1", "x2"))
    with pytest.raises(CenterNotInChart):
        blow_up_center(base, V("x1", "y"))
    with pytest.raises(CodimensionOne):
        blow_up_center(base, V("x1"))


def test_atlas_json_is_deterministic():
    base = root_chart(("x1", "x2", "x3"))
    atlas = Atlas.for_root(base)
    atlas.add_blowup(base.id, blow_up_center(base, V("x1", "x2")))
    assert atlas.to_json() == atlas.to_json()
    payload = atlas.to_dict()
    assert payload["schema_version"] == 1
    assert [c["id"] for c in payload["charts"]] == sorted(
        c["id"] for c in payload["charts"]
    )
