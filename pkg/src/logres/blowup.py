"""Blow-ups of coordinate subspaces in affine charts.

Blowing up the subspace V(x_{i_1}, ..., x_{i_r}) of a chart produces one child
chart per center variable x_j.  In the x_j-direction the map to the parent is

  x_j -> x_j,    x_k -> x_j * x_k~   (k in center, k != j),

all other coordinates unchanged; the exceptional divisor is cut out by x_j in
that chart.  Renamed coordinates carry a trailing ``~``.  Log markings are
inherited (renamed coordinates keep their marking), and the exceptional
coordinate is marked whenever the center met a log-marked coordinate, so the
frame stays correct for residue and connection computations downstream.

Total transforms of monomial ideals are computed by pure exponent arithmetic.
Two different strictness notions coexist:

* ``transform_ideal`` divides the *common* power of each exceptional
  coordinate out of the total transform -- the divisor/ideal factorization
  used for principality certificates;
* ``strict_transform_variety`` saturates generator-wise -- the geometric
  strict transform of a single coordinate subspace, which is either empty in
  the chart or again a coordinate subspace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .monideal import MonomialIdeal, SimpleVariety, is_simple_ideal
from .symcore import Exponent, LogresError, monomial_string


class CenterNotInChart(LogresError):
    """Blow-up center uses variables the chart does not have."""


class CodimensionOne(LogresError):
    """Blow-up center must have codimension at least two."""


def rename_tilde(name: str) -> str:
    return name + "~"


@dataclass(frozen=True)
class Chart:
    """One affine chart of a blow-up tree.

    `to_parent` sends each parent variable to its monomial image over this
    chart's variables (exponent tuples); composing up the tree gives the
    monomial substitution into root coordinates.  `exceptional` lists the
    exceptional divisors visible in this chart as (label, defining variable).
    """

    id: str
    variables: tuple[str, ...]
    log_marked: frozenset[str] = frozenset()
    parent: str | None = None
    to_parent: tuple[tuple[str, Exponent], ...] = ()
    exceptional: tuple[tuple[str, str], ...] = ()
    center: frozenset[str] = frozenset()  # blown-up center, in parent variables
    direction: str | None = None  # the kept center variable

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate chart variables")
        unknown = self.log_marked - set(self.variables)
        if unknown:
            raise ValueError(f"log-marked {sorted(unknown)} not chart variables")

    @property
    def parent_map(self) -> dict[str, Exponent]:
        return dict(self.to_parent)

    def variable_index(self, name: str) -> int:
        return self.variables.index(name)


def root_chart(
    variables: Iterable[str],
    log_marked: Iterable[str] = (),
    chart_id: str = "root",
) -> Chart:
    vs = tuple(variables)
    return Chart(id=chart_id, variables=vs, log_marked=frozenset(log_marked))


def blow_up_center(
    chart: Chart, center: SimpleVariety, label: str = "E"
) -> list[Chart]:
    """One child chart per center variable, in chart variable order."""
    missing = center.vanishing - set(chart.variables)
    if missing:
        raise CenterNotInChart(f"{sorted(missing)} not in chart {chart.id}")
    if center.codim < 2:
        raise CodimensionOne(f"center {center} has codimension {center.codim}")
    children = []
    for direction in center.sorted_by(chart.variables):
        rename = {
            v: rename_tilde(v) for v in center.vanishing if v != direction
        }
        collision = set(rename.values()) & (set(chart.variables) - set(rename))
        if collision:
            raise ValueError(f"renaming collision on {sorted(collision)}")
        new_vars = tuple(rename.get(v, v) for v in chart.variables)
        index = {v: i for i, v in enumerate(new_vars)}

        def unit(name: str) -> Exponent:
            e = [0] * len(new_vars)
            e[index[name]] = 1
            return tuple(e)

        to_parent = []
        for v in chart.variables:
            if v == direction:
                to_parent.append((v, unit(direction)))
            elif v in center.vanishing:
                e = [0] * len(new_vars)
                e[index[direction]] = 1
                e[index[rename[v]]] += 1
                to_parent.append((v, tuple(e)))
            else:
                to_parent.append((v, unit(v)))
        marked = {rename.get(v, v) for v in chart.log_marked}
        if center.vanishing & chart.log_marked:
            marked.add(direction)
        exceptional = []
        for exc_label, v in chart.exceptional:
            if v == direction:
                continue  # that divisor misses this chart
            exceptional.append((exc_label, rename.get(v, v)))
        exceptional.append((label, direction))
        children.append(
            Chart(
                id=f"{chart.id}/{label}:{direction}",
                variables=new_vars,
                log_marked=frozenset(marked),
                parent=chart.id,
                to_parent=tuple(to_parent),
                exceptional=tuple(exceptional),
                center=center.vanishing,
                direction=direction,
            )
        )
    return children


def push_exponent(chart: Chart, exponent: Exponent, parent_vars: tuple[str, ...]) -> Exponent:
    """Image of a parent monomial under the chart substitution."""
    pm = chart.parent_map
    out = [0] * len(chart.variables)
    for v, e in zip(parent_vars, exponent):
        if e:
            img = pm[v]
            for i, x in enumerate(img):
                out[i] += e * x
    return tuple(out)


@dataclass(frozen=True)
class TransformRecord:
    total: MonomialIdeal
    multiplicities: tuple[tuple[str, int], ...]  # per exceptional divisor label
    strict: MonomialIdeal
    strict_is_simple_or_trivial: bool

    @property
    def multiplicity_map(self) -> dict[str, int]:
        return dict(self.multiplicities)


def transform_ideal(chart: Chart, ideal: MonomialIdeal) -> TransformRecord:
    """Total transform, exceptional multiplicities, and residual ideal.

    The multiplicity of an exceptional divisor is the largest power of its
    defining coordinate dividing every generator of the total transform; the
    strict part is the total with those common powers divided out.
    """
    from .monideal import MixedVariableSets

    parent_vars = tuple(v for v, _ in chart.to_parent)
    if tuple(ideal.variables) != parent_vars:
        raise MixedVariableSets(
            f"ideal over {ideal.variables}, chart parent has {parent_vars}"
        )
    total_gens = [
        push_exponent(chart, g, parent_vars) for g in ideal.generators
    ]
    total = MonomialIdeal.make(chart.variables, total_gens)
    mults = []
    strict_gens = [list(g) for g in total.generators]
    for label, var in chart.exceptional:
        idx = chart.variable_index(var)
        m = min((g[idx] for g in total.generators), default=0)
        mults.append((label, m))
        if m:
            for g in strict_gens:
                g[idx] -= m
    strict = MonomialIdeal.make(chart.variables, [tuple(g) for g in strict_gens])
    flag = strict.is_unit or is_simple_ideal(strict)
    return TransformRecord(total, tuple(mults), strict, flag)


def saturate_exceptional(chart: Chart, ideal: MonomialIdeal) -> MonomialIdeal:
    """Divide each generator by its own maximal exceptional powers."""
    exc = [chart.variable_index(v) for _, v in chart.exceptional]
    gens = []
    for g in ideal.generators:
        e = list(g)
        for idx in exc:
            e[idx] = 0
        gens.append(tuple(e))
    return MonomialIdeal.make(chart.variables, gens)


def strict_transform_variety(chart: Chart, variety: SimpleVariety) -> SimpleVariety | None:
    """Geometric strict transform of a coordinate subspace; None when empty.

    Empty exactly when the chart direction is one of the variety's equations;
    otherwise the equations survive, with center variables renamed.
    """
    if chart.direction is None:
        raise ValueError(f"chart {chart.id} is not a blow-up chart")
    if chart.direction in variety.vanishing:
        return None
    rename = {
        v: rename_tilde(v) for v in chart.center if v != chart.direction
    }
    return SimpleVariety(frozenset(rename.get(v, v) for v in variety.vanishing))


# -- atlas ---------------------------------------------------------------------


@dataclass(frozen=True)
class CenterRecord:
    chart_id: str
    label: str
    vanishing: tuple[str, ...]
    children: tuple[str, ...]


@dataclass(frozen=True)
class StageRecord:
    stage: int
    centers: tuple[CenterRecord, ...]


@dataclass
class Atlas:
    """The blow-up tree: charts by id, adjacency, and the stage log."""

    root_id: str
    charts: dict[str, Chart] = field(default_factory=dict)
    children: dict[str, list[str]] = field(default_factory=dict)
    stage_log: list[StageRecord] = field(default_factory=list)

    @classmethod
    def for_root(cls, root: Chart) -> "Atlas":
        atlas = cls(root_id=root.id)
        atlas.charts[root.id] = root
        atlas.children[root.id] = []
        return atlas

    def add_blowup(self, parent_id: str, kids: list[Chart]) -> None:
        for chart in kids:
            self.charts[chart.id] = chart
            self.children[chart.id] = []
            self.children[parent_id].append(chart.id)

    def leaves(self) -> list[Chart]:
        return [
            self.charts[cid]
            for cid in sorted(self.charts)
            if not self.children[cid]
        ]

    def path_to_root(self, chart_id: str) -> list[Chart]:
        """Charts from the root down to `chart_id` (inclusive)."""
        path = []
        cur = self.charts[chart_id]
        while True:
            path.append(cur)
            if cur.parent is None:
                break
            cur = self.charts[cur.parent]
        return list(reversed(path))

    def substitution_to_root(self, chart_id: str) -> dict[str, Exponent]:
        """Each root variable's monomial image over the chart's variables."""
        path = self.path_to_root(chart_id)
        root = path[0]
        current = {
            v: tuple(1 if w == v else 0 for w in root.variables)
            for v in root.variables
        }
        for chart in path[1:]:
            parent_vars = tuple(v for v, _ in chart.to_parent)
            current = {
                v: push_exponent(chart, e, parent_vars)
                for v, e in current.items()
            }
        return current

    def total_transform(self, chart_id: str, ideal: MonomialIdeal) -> MonomialIdeal:
        """Total transform of a root-chart monomial ideal in a given chart."""
        root = self.charts[self.root_id]
        if tuple(ideal.variables) != root.variables:
            raise ValueError("ideal must live over the root chart variables")
        subst = self.substitution_to_root(chart_id)
        chart = self.charts[chart_id]
        gens = []
        for g in ideal.generators:
            out = [0] * len(chart.variables)
            for v, e in zip(root.variables, g):
                if e:
                    for i, x in enumerate(subst[v]):
                        out[i] += e * x
            gens.append(tuple(out))
        return MonomialIdeal.make(chart.variables, gens)

    def to_dict(self) -> dict:
        charts = []
        for cid in sorted(self.charts):
            chart = self.charts[cid]
            charts.append(
                {
                    "id": chart.id,
                    "parent": chart.parent,
                    "variables": list(chart.variables),
                    "log_marked": sorted(chart.log_marked),
                    "to_parent": {
                        v: monomial_string(chart.variables, e)
                        for v, e in chart.to_parent
                    },
                    "exceptional": [list(pair) for pair in chart.exceptional],
                    "children": sorted(self.children[cid]),
                }
            )
        return {
            "schema_version": 1,
            "root": self.root_id,
            "charts": charts,
            "stage_log": [
                {
                    "stage": record.stage,
                    "centers": [
                        {
                            "chart": c.chart_id,
                            "label": c.label,
                            "vanishing": list(c.vanishing),
                            "children": list(c.children),
                        }
                        for c in record.centers
                    ],
                }
                for record in self.stage_log
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
