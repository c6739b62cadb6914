"""Multi-index combinatorics for homogeneous polynomials on projective space.

A multi-index is a tuple (i0, ..., in) of non-negative integers; its weight is
the sum of the entries.  The weight-d indices over n+1 slots are in bijection
with the degree-d monomials in x0..xn, and dropping every index whose support
meets a slot set J realizes the restriction of a homogeneous form to the
coordinate subspace {x_j = 0 : j in J}.

Indices are 0-based and listed in descending graded-lex order, so listings are
deterministic.  Text form: ``(i0,i1,...,in)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

MultiIndex = tuple[int, ...]


def weight(index: MultiIndex) -> int:
    return sum(index)


def support(index: MultiIndex) -> frozenset[int]:
    return frozenset(j for j, e in enumerate(index) if e)


def format_multiindex(index: MultiIndex) -> str:
    return "(" + ",".join(str(e) for e in index) + ")"


def parse_multiindex(text: str) -> MultiIndex:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"malformed multi-index {text!r}")
    return tuple(int(p) for p in body[1:-1].split(","))


def index_count(n: int, degree: int, excluded_size: int = 0) -> int:
    """Number of weight-`degree` indices avoiding `excluded_size` slots."""
    k = n - excluded_size
    if k < 0:
        # only the zero index survives, and only in degree zero
        return 1 if degree == 0 else 0
    return math.comb(k + degree, k)


def enumerate_multiindices(
    n: int, degree: int, excluded: Iterable[int] | None = None
) -> list[MultiIndex]:
    """All I with |I| = degree over slots {0..n}, support avoiding `excluded`.

    Listed in descending lexicographic order (equivalently graded-lex, since
    the weight is fixed).
    """
    if n < 1:
        raise ValueError("need at least two slots (n >= 1)")
    if degree < 0:
        raise ValueError("degree must be non-negative")
    banned = frozenset(excluded or ())
    if not banned <= set(range(n + 1)):
        raise ValueError(f"excluded slots {sorted(banned)} out of range 0..{n}")

    out: list[MultiIndex] = []
    prefix = [0] * (n + 1)

    def fill(slot: int, remaining: int) -> None:
        if slot == n:
            if remaining and n in banned:
                return
            prefix[slot] = remaining
            out.append(tuple(prefix))
            prefix[slot] = 0
            return
        top = 0 if slot in banned else remaining
        for e in range(top, -1, -1):
            prefix[slot] = e
            fill(slot + 1, remaining - e)
        prefix[slot] = 0

    fill(0, degree)
    return out


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients of a degree-d form, keyed by the full index set.

    `excluded` records slots already restricted away: the key set is exactly
    the weight-`degree` indices avoiding those slots, zero entries stored
    explicitly.  Values may be rationals or polynomials.
    """

    n: int
    degree: int
    excluded: frozenset[int]
    entries: tuple[tuple[MultiIndex, object], ...]

    @classmethod
    def make(
        cls,
        n: int,
        degree: int,
        entries: Mapping[MultiIndex, object] | None = None,
        excluded: Iterable[int] = (),
        fill=Fraction(0),
    ) -> "CoefficientVector":
        banned = frozenset(excluded)
        keys = enumerate_multiindices(n, degree, banned)
        given = dict(entries or {})
        unknown = set(given) - set(keys)
        if unknown:
            raise ValueError(f"entries keyed outside the index set: {sorted(unknown)}")
        return cls(
            n,
            degree,
            banned,
            tuple((key, given.get(key, fill)) for key in keys),
        )

    @property
    def as_dict(self) -> dict[MultiIndex, object]:
        return dict(self.entries)

    def __getitem__(self, key: MultiIndex):
        return self.as_dict[key]


def restrict_coefficients(
    vector: CoefficientVector, slots: Iterable[int]
) -> CoefficientVector:
    """Drop every entry whose index support meets `slots`."""
    extra = frozenset(slots)
    if not extra <= set(range(vector.n + 1)):
        raise ValueError(f"slots {sorted(extra)} out of range 0..{vector.n}")
    banned = vector.excluded | extra
    kept = {
        key: value
        for key, value in vector.entries
        if not (support(key) & extra)
    }
    return CoefficientVector(
        vector.n,
        vector.degree,
        banned,
        tuple(
            (key, kept.get(key, Fraction(0)))
            for key in enumerate_multiindices(vector.n, vector.degree, banned)
        ),
    )
