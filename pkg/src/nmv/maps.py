"""Rational maps given by monomial base ideals, and their multidegree tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Sequence

from .monomial_algebra import MonomialError, MonomialIdeal, parse_ideal


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All d in N^parts with |d| = total, in lexicographically decreasing order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def bound_product(deltas: Sequence[int], d: Sequence[int]) -> int:
    """delta_1^d_1 * ... * delta_p^d_p."""
    return math.prod(x**e for x, e in zip(deltas, d))


@dataclass(frozen=True)
class MapSpec:
    """A rational map P^r --> P^m_1 x ... x P^m_p given by equigenerated monomial ideals."""

    ideals: tuple[MonomialIdeal, ...]
    variables: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.ideals:
            raise MonomialError("a map needs at least one factor")
        n = self.ideals[0].nvars
        if n < 2:
            raise MonomialError("the source must be P^r with r >= 1")
        for i, I in enumerate(self.ideals):
            if I.nvars != n:
                raise MonomialError(f"ideal {i} lives in {I.nvars} variables, expected {n}")
            if I.is_zero():
                raise MonomialError(f"ideal {i} is zero")
            if not I.is_equigenerated():
                raise MonomialError(f"ideal {i} is not generated in a single degree")
            if I.generator_degree() < 1:
                raise MonomialError(f"ideal {i} is generated in degree 0")
        if self.variables is not None and len(self.variables) != n:
            raise MonomialError("variable list does not match the ideals")

    @classmethod
    def parse(cls, variables: Sequence[str], ideals: Sequence[Sequence[str]]) -> MapSpec:
        return cls(tuple(parse_ideal(g, variables) for g in ideals), tuple(variables))

    @property
    def r(self) -> int:
        return self.ideals[0].nvars - 1

    @property
    def nvars(self) -> int:
        return self.ideals[0].nvars

    @property
    def p(self) -> int:
        return len(self.ideals)

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(I.generator_degree() for I in self.ideals)

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(len(I) - 1 for I in self.ideals)

    def types(self) -> list[tuple[int, ...]]:
        return list(compositions(self.r, self.p))

    def reordered(self, perm: Sequence[int]) -> MapSpec:
        return MapSpec(tuple(self.ideals[i] for i in perm), self.variables)


@dataclass
class MultidegreeTable:
    """Values deg(G) * deg^d(Y) indexed by type vectors d with |d| = r."""

    r: int
    p: int
    entries: dict[tuple[int, ...], int]
    method: str = "mixed-volume"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = set(compositions(self.r, self.p))
        if set(self.entries) != expected:
            raise ValueError("table keys must be exactly the compositions of r")

    def __getitem__(self, d) -> int:
        return self.entries[tuple(d)]

    def same_values(self, other: MultidegreeTable) -> bool:
        return self.r == other.r and self.p == other.p and self.entries == other.entries

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def degree_bound(self) -> int | None:
        """gcd of the nonzero entries.

        Heuristic only: deg(G) divides every entry, so this is an upper
        bound for deg(G), not its value.
        """
        vals = [v for v in self.entries.values() if v]
        return reduce(math.gcd, vals) if vals else None

    def to_json(self) -> dict:
        out = {
            "r": self.r,
            "p": self.p,
            "entries": [{"type": list(d), "value": v} for d, v in sorted(self.entries.items(), reverse=True)],
            "method": self.method,
        }
        out.update(self.extra)
        return out
