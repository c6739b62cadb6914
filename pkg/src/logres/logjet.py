"""Fiber-chart model of the projectivized logarithmic cotangent bundle and
the residue obstruction ideals.

Local model: a point lies on k of the c divisor components; base coordinates
are z1..zn with z1..zk log-marked, and the fiber of the projectivized bundle
carries homogeneous coordinates xi1..xin dual to the frame

  (dz1/z1, ..., dzk/zk, dz_{k+1}, ..., dzn).

Dehomogenizing at xi_t = 1 gives an affine chart with 2n-1 coordinates.  For
every nonempty subset J of the components through the point, the locus where
the residues along J are the only nonvanishing frame entries is the
coordinate subspace

  z_i = 0 (i in J),   xi_j = 0 (j in {1..n}\\J);

it is visible in fiber chart t exactly when its dehomogenized ideal is not
the unit ideal (equivalently t in J).  Indexing these subspaces by #J yields
a compatible system, and blowing it up principalizes the obstruction ideals:
for a nonempty component subset I, the obstruction ideal is the intersection
of the visible subspace primes over all nonempty J contained in I, which
chart-by-chart equals the dehomogenization of

  (z1*xi1, ..., zm*xim, xi_{m+1}, ..., xin),    m = #(I through the point).

Pulling a fiber-linear section back through (z, [xi]) -> (z, [z1*xi1, ...,
zm*xim, xi_{m+1}, ...]) always lands in the obstruction ideal; the membership
test is exact because the ideal is monomial and the pullback fiber-linear.

Convention recorded in every certificate: the intersection defining the
obstruction ideal ranges over *nonempty* subsets of I only.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .blowup import Chart, root_chart
from .monideal import (
    MonomialIdeal,
    SimpleVariety,
    intersect_monomial_ideals,
)
from .resolution import CompatibleSystem, Member, ResolutionResult
from .symcore import LogresError, Polynomial, extend_variables, monomial_string


class OutOfRange(LogresError):
    """Jet-chart parameters violate 0 <= k <= c <= n, 2 <= n, 1 <= t <= n."""


class NotResolved(LogresError):
    """An obstruction ideal failed to principalize in some chart."""

    def __init__(self, chart_id: str, message: str):
        super().__init__(f"{message} (chart {chart_id})")
        self.chart_id = chart_id


def worker_count() -> int:
    """Worker cap from LOGRES_THREADS; defaults to single-threaded."""
    raw = os.environ.get("LOGRES_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class JetChart:
    """A dehomogenized fiber chart: 2n-1 coordinates, base log marks z1..zk."""

    n: int
    c: int
    k: int
    t: int
    chart: Chart

    @property
    def base_vars(self) -> tuple[str, ...]:
        return tuple(f"z{i}" for i in range(1, self.n + 1))

    @property
    def fiber_vars(self) -> tuple[str, ...]:
        return tuple(f"xi{j}" for j in range(1, self.n + 1) if j != self.t)


def make_jet_chart(n: int, c: int, k: int, t: int) -> JetChart:
    if n < 2 or not (0 <= k <= c <= n) or not (1 <= t <= n):
        raise OutOfRange(f"bad jet chart parameters n={n}, c={c}, k={k}, t={t}")
    base = tuple(f"z{i}" for i in range(1, n + 1))
    fiber = tuple(f"xi{j}" for j in range(1, n + 1) if j != t)
    chart = root_chart(
        base + fiber,
        log_marked=[f"z{i}" for i in range(1, k + 1)],
        chart_id="root",
    )
    return JetChart(n, c, k, t, chart)


def _component_subsets(k: int) -> list[tuple[int, ...]]:
    subsets = []
    for mask in range(1, 1 << k):
        J = tuple(i + 1 for i in range(k) if mask & (1 << i))
        subsets.append(J)
    subsets.sort(key=lambda J: (len(J), J))
    return subsets


def stratum_prime(jet: JetChart, J: Iterable[int]) -> MonomialIdeal:
    """Dehomogenized prime of the residue stratum for component subset J.

    Unit ideal when the stratum misses the chart (a component of J does not
    pass through the point, or xi_t = 1 is one of its equations).
    """
    Js = frozenset(J)
    if not Js:
        raise ValueError("component subset must be nonempty")
    if not Js <= set(range(1, jet.c + 1)):
        raise OutOfRange(f"components {sorted(Js)} out of range 1..{jet.c}")
    variables = jet.chart.variables
    if not Js <= set(range(1, jet.k + 1)) or jet.t not in Js:
        return MonomialIdeal.unit(variables)
    names = {f"z{i}" for i in Js}
    names |= {f"xi{j}" for j in range(1, jet.n + 1) if j not in Js and j != jet.t}
    return MonomialIdeal.from_varsets(variables, [{v} for v in sorted(names)])


def stratum_variety(jet: JetChart, J: Iterable[int]) -> SimpleVariety | None:
    prime = stratum_prime(jet, J)
    if prime.is_unit:
        return None
    return SimpleVariety(frozenset().union(*prime.gens_as_varsets()))


def build_obstruction_system(n: int, c: int, k: int, t: int) -> tuple[JetChart, CompatibleSystem]:
    """All visible residue strata as a compatible system, indexed by #J."""
    jet = make_jet_chart(n, c, k, t)
    members = []
    for J in _component_subsets(k):
        variety = stratum_variety(jet, J)
        if variety is None:
            continue
        label = "D(" + ",".join(map(str, J)) + ")"
        members.append(Member(len(J), label, variety))
    system = CompatibleSystem(jet.chart, tuple(members))
    return jet, system


def resolve_obstruction_system(
    jet: JetChart, system: CompatibleSystem, mode: str
) -> ResolutionResult:
    """Resolve the fiber-chart system as the global procedure would.

    The global minimal resolution stops one stage short of the full length c;
    in a chart where only k < c components pass through the point the local
    system has length k <= c - 1, so the restriction of the global minimal
    resolution runs *all* k local stages.  Only when k = c does minimal mode
    drop the last local stage.
    """
    from .resolution import resolve_system

    if mode == "minimal" and jet.k < jet.c:
        effective = "canonical"
    else:
        effective = mode
    return resolve_system(system, mode=effective)


def obstruction_ideal_intersected(jet: JetChart, I: Iterable[int]) -> MonomialIdeal:
    """Intersection of the stratum primes over nonempty subsets of I."""
    Is = sorted(frozenset(I))
    if not Is:
        raise ValueError("component subset must be nonempty")
    primes = []
    for mask in range(1, 1 << len(Is)):
        J = [Is[i] for i in range(len(Is)) if mask & (1 << i)]
        prime = stratum_prime(jet, J)
        if not prime.is_unit:
            primes.append(prime)
    if not primes:
        return MonomialIdeal.unit(jet.chart.variables)
    return intersect_monomial_ideals(primes)


def obstruction_ideal_closed_form(jet: JetChart, I: Iterable[int]) -> MonomialIdeal:
    """Dehomogenization of (z1*xi1, ..., zm*xim, xi_{m+1}, ..., xin)."""
    Is = frozenset(I)
    through = Is & set(range(1, jet.k + 1))
    variables = jet.chart.variables
    if jet.t not in through:
        return MonomialIdeal.unit(variables)
    sets = []
    for i in sorted(through):
        if i == jet.t:
            sets.append({f"z{i}"})
        else:
            sets.append({f"z{i}", f"xi{i}"})
    for j in range(1, jet.n + 1):
        if j not in through and j != jet.t:
            sets.append({f"xi{j}"})
    return MonomialIdeal.from_varsets(variables, sets)


def obstruction_certificate(jet: JetChart, I: Iterable[int]) -> dict:
    """Both routes to the obstruction ideal plus their equality flag."""
    Is = sorted(frozenset(I))
    intersected = obstruction_ideal_intersected(jet, Is)
    closed = obstruction_ideal_closed_form(jet, Is)
    return {
        "n": jet.n,
        "c": jet.c,
        "k": jet.k,
        "t": jet.t,
        "I": Is,
        "generators": intersected.gens_as_strings(),
        "closed_form": closed.gens_as_strings(),
        "equal": intersected == closed,
        "subset_convention": "nonempty subsets of I only",
    }


def obstruction_ideal(jet: JetChart, I: Iterable[int]) -> MonomialIdeal:
    """The obstruction ideal; raises if the two defining routes disagree."""
    intersected = obstruction_ideal_intersected(jet, I)
    closed = obstruction_ideal_closed_form(jet, I)
    if intersected != closed:
        raise LogresError(
            f"obstruction ideal mismatch for I={sorted(set(I))}: "
            f"{intersected} vs {closed}"
        )
    return intersected


# -- section pullbacks -----------------------------------------------------------


@dataclass(frozen=True)
class PullbackCheck:
    pullback: Polynomial
    member_of_obstruction_ideal: bool


def check_section_pullback(
    jet: JetChart, sections: Sequence[Polynomial], I: Iterable[int]
) -> PullbackCheck:
    """Pull a fiber-linear section sum(s_i * xi_i) back and test membership.

    `sections` lists the coefficients s_1..s_n over the base coordinates.
    The pullback multiplies xi_i by z_i for components of I through the
    point, then dehomogenizes at xi_t = 1.
    """
    if len(sections) != jet.n:
        raise ValueError(f"expected {jet.n} section coefficients")
    through = frozenset(I) & set(range(1, jet.k + 1))
    variables = jet.chart.variables
    total = Polynomial.zero(variables)
    for i, s in enumerate(sections, start=1):
        coeff = extend_variables(s, variables)
        factor = Polynomial.constant(variables, 1)
        if i in through:
            factor = factor * Polynomial.variable(variables, f"z{i}")
        if i != jet.t:
            factor = factor * Polynomial.variable(variables, f"xi{i}")
        total = total + coeff * factor
    ideal = obstruction_ideal(jet, I)
    return PullbackCheck(total, ideal.contains_polynomial(total))


def coordinate_section_pullbacks(jet: JetChart, I: Iterable[int]) -> MonomialIdeal:
    """Ideal generated by the pullbacks of the n coordinate sections xi_i."""
    gens = []
    for i in range(1, jet.n + 1):
        sections = [
            Polynomial.constant(jet.base_vars, 1 if j == i else 0)
            for j in range(1, jet.n + 1)
        ]
        pullback = check_section_pullback(jet, sections, I).pullback
        if pullback.is_zero:
            continue
        gens.extend(pullback.terms.keys())
    return MonomialIdeal.make(jet.chart.variables, gens)


# -- principalization certificates -------------------------------------------------


@dataclass(frozen=True)
class PrincipalizationCertificate:
    I: tuple[int, ...]
    per_chart: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]

    def divisor(self, chart_id: str) -> dict[str, int]:
        return dict(dict(self.per_chart)[chart_id])

    def to_dict(self) -> dict:
        return {
            "I": list(self.I),
            "principal": True,
            "divisor": {
                chart_id: {label: mult for label, mult in mults}
                for chart_id, mults in self.per_chart
            },
        }


def verify_principalization(
    result: ResolutionResult, jet: JetChart, I: Iterable[int]
) -> PrincipalizationCertificate:
    """Certify that the total transform of the obstruction ideal is a single
    exceptional monomial in every leaf chart.

    Returns the exceptional multiplicities per chart; raises NotResolved with
    the offending chart id otherwise.
    """
    Is = tuple(sorted(frozenset(I)))
    ideal = obstruction_ideal(jet, Is)
    leaves = result.leaves()

    def check(leaf: Chart) -> tuple[str, tuple[tuple[str, int], ...]]:
        total = result.atlas.total_transform(leaf.id, ideal)
        if len(total.generators) != 1:
            raise NotResolved(
                leaf.id,
                f"total transform of obstruction ideal for I={list(Is)} "
                f"has {len(total.generators)} minimal generators",
            )
        (gen,) = total.generators
        mults = []
        residual = list(gen)
        for label, var in leaf.exceptional:
            idx = leaf.variable_index(var)
            if residual[idx]:
                mults.append((label, residual[idx]))
                residual[idx] = 0
        if any(residual):
            offending = monomial_string(leaf.variables, tuple(residual))
            raise NotResolved(
                leaf.id,
                f"non-exceptional factor {offending} in the total transform",
            )
        return (leaf.id, tuple(sorted(mults)))

    workers = worker_count()
    if workers > 1 and len(leaves) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(check, leaves))
    else:
        rows = [check(leaf) for leaf in leaves]
    return PrincipalizationCertificate(Is, tuple(sorted(rows)))


def certificate_json(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2)
