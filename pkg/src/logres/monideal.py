"""Monomial ideal algebra for coordinate-subspace configurations.

A ``MonomialIdeal`` stores its minimal monomial generators as exponent tuples
over a fixed variable frame.  Square-free generators are the main case (each
is just a subset of the variables), but blow-up transforms introduce powers of
exceptional coordinates, so general exponents are supported; the simple-shape
operations check square-freeness where they need it.

An ideal of the special shape

  <x_1, ..., x_p, x_{p+1}*x_{r+1}, ..., x_r*x_{2r-p}>

(``p`` lone variables plus ``r - p`` products of pairs, all variables
distinct, up to renaming) is called *simple*; its zero set is the union of
the 2^(r-p) codimension-r coordinate subspaces obtained by picking one factor
from each pair.  These unions are exactly the configurations the blow-up
engine knows how to keep resolving.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .symcore import Exponent, LogresError, Polynomial, grlex_key, monomial_string


class MixedVariableSets(LogresError):
    """Ideal operation applied across different variable frames."""


class NotSimpleShape(LogresError):
    """The ideal does not match the simple pattern under any renaming."""


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def minimalize(generators: Iterable[Exponent]) -> tuple[Exponent, ...]:
    """Drop every generator strictly divisible by another; sort graded-lex."""
    gens = sorted(set(tuple(g) for g in generators), key=grlex_key)
    kept: list[Exponent] = []
    for g in gens:
        if not any(_divides(h, g) for h in kept):
            kept.append(g)
    return tuple(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    variables: tuple[str, ...]
    generators: tuple[Exponent, ...]

    @classmethod
    def make(cls, variables: Iterable[str], generators: Iterable[Exponent]) -> "MonomialIdeal":
        vs = tuple(variables)
        gens = []
        for g in generators:
            e = tuple(int(x) for x in g)
            if len(e) != len(vs) or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} over {vs}")
            gens.append(e)
        return cls(vs, minimalize(gens))

    @classmethod
    def from_varsets(cls, variables: Iterable[str], sets: Iterable[Iterable[str]]) -> "MonomialIdeal":
        """Square-free constructor: each generator given as a set of variables."""
        vs = tuple(variables)
        index = {v: i for i, v in enumerate(vs)}
        gens = []
        for s in sets:
            exp = [0] * len(vs)
            for v in s:
                exp[index[v]] = 1
            gens.append(tuple(exp))
        return cls.make(vs, gens)

    @classmethod
    def unit(cls, variables: Iterable[str]) -> "MonomialIdeal":
        vs = tuple(variables)
        return cls(vs, ((0,) * len(vs),))

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and not any(self.generators[0])

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_squarefree(self) -> bool:
        return all(all(e <= 1 for e in g) for g in self.generators)

    def contains_monomial(self, exponent: Exponent) -> bool:
        return any(_divides(g, exponent) for g in self.generators)

    def contains_polynomial(self, f: Polynomial) -> bool:
        """Monomial-wise membership; exact for monomial ideals."""
        if f.variables != self.variables:
            raise MixedVariableSets(f"{f.variables} vs {self.variables}")
        return all(self.contains_monomial(e) for e in f.terms)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        if other.variables != self.variables:
            raise MixedVariableSets(f"{other.variables} vs {self.variables}")
        return all(self.contains_monomial(g) for g in other.generators)

    def gens_as_strings(self) -> list[str]:
        return [monomial_string(self.variables, g) for g in self.generators]

    def gens_as_varsets(self) -> list[frozenset[str]]:
        if not self.is_squarefree:
            raise ValueError("ideal is not square-free")
        return [
            frozenset(v for v, e in zip(self.variables, g) if e)
            for g in self.generators
        ]

    def __str__(self) -> str:
        return "<" + ", ".join(self.gens_as_strings()) + ">"


def ideal_sum(ideals: Sequence[MonomialIdeal]) -> MonomialIdeal:
    if not ideals:
        raise ValueError("sum of no ideals")
    vs = ideals[0].variables
    gens: list[Exponent] = []
    for ideal in ideals:
        if ideal.variables != vs:
            raise MixedVariableSets(f"{ideal.variables} vs {vs}")
        gens.extend(ideal.generators)
    return MonomialIdeal.make(vs, gens)


def intersect_monomial_ideals(ideals: Sequence[MonomialIdeal]) -> MonomialIdeal:
    """Intersection via pairwise least common multiples, minimalized.

    The empty intersection is the unit ideal.
    """
    if not ideals:
        raise ValueError("intersection of no ideals")
    vs = ideals[0].variables
    for ideal in ideals:
        if ideal.variables != vs:
            raise MixedVariableSets(f"{ideal.variables} vs {vs}")
    acc = MonomialIdeal.unit(vs)
    for ideal in ideals:
        gens = [_lcm(a, b) for a in acc.generators for b in ideal.generators]
        acc = MonomialIdeal.make(vs, gens)
    return acc


@dataclass(frozen=True)
class SimpleVariety:
    """A coordinate subspace V(x_s : s in vanishing), inside some chart."""

    vanishing: frozenset[str]

    def __post_init__(self):
        if not self.vanishing:
            raise ValueError("a simple variety needs a nonempty vanishing set")

    @property
    def codim(self) -> int:
        return len(self.vanishing)

    def prime(self, variables: Iterable[str]) -> MonomialIdeal:
        vs = tuple(variables)
        missing = self.vanishing - set(vs)
        if missing:
            raise MixedVariableSets(f"variety variables {sorted(missing)} not in chart")
        return MonomialIdeal.from_varsets(vs, [{v} for v in sorted(self.vanishing)])

    def sorted_by(self, variables: Sequence[str]) -> tuple[str, ...]:
        order = {v: i for i, v in enumerate(variables)}
        return tuple(sorted(self.vanishing, key=lambda v: order[v]))

    def __str__(self) -> str:
        return "V(" + ",".join(sorted(self.vanishing)) + ")"


def simple_shape(ideal: MonomialIdeal) -> tuple[list[str], list[tuple[str, str]]]:
    """Match the simple pattern: lone variables plus disjoint variable pairs.

    Returns (singletons, pairs); raises NotSimpleShape when the minimal
    generators do not fit the pattern under any renaming.
    """
    if ideal.is_zero or ideal.is_unit:
        raise NotSimpleShape(f"{ideal} is trivial")
    if not ideal.is_squarefree:
        raise NotSimpleShape(f"{ideal} has a non-square-free generator")
    singles: list[str] = []
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    for sets in ideal.gens_as_varsets():
        names = sorted(sets, key=ideal.variables.index)
        if seen & set(names):
            raise NotSimpleShape(f"variable reused across generators of {ideal}")
        seen.update(names)
        if len(names) == 1:
            singles.append(names[0])
        elif len(names) == 2:
            pairs.append((names[0], names[1]))
        else:
            raise NotSimpleShape(f"generator of degree {len(names)} in {ideal}")
    return singles, pairs


def is_simple_ideal(ideal: MonomialIdeal) -> bool:
    try:
        simple_shape(ideal)
    except NotSimpleShape:
        return False
    return True


def decompose_simple_ideal(ideal: MonomialIdeal) -> list[SimpleVariety]:
    """The 2^(pairs) coordinate subspaces whose union the simple ideal cuts out.

    Every returned variety has codimension p + (r - p) = r, one variable taken
    from each pair generator.
    """
    singles, pairs = simple_shape(ideal)
    varieties = []
    for choice in product(*pairs) if pairs else [()]:
        varieties.append(SimpleVariety(frozenset(singles) | frozenset(choice)))
    order = {v: i for i, v in enumerate(ideal.variables)}
    varieties.sort(key=lambda V: tuple(sorted(order[v] for v in V.vanishing)))
    return varieties
