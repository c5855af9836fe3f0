"""Closed-form multidegree tables for families with structured resolutions.

The hypotheses (m-primary first factors, perfect of height two or Gorenstein
of height three for the last one, condition G_{r+1}) are asserted by the
caller and carried along in the output; nothing here verifies them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .maps import MultidegreeTable, bound_product, compositions

PERFECT_HT2 = "perfect-ht2"
GORENSTEIN_HT3 = "gorenstein-ht3"


class FormulaError(ValueError):
    pass


def elementary_symmetric(k: int, vals: Sequence[int]) -> int:
    """e_k(vals) by the prefix recurrence e_k(v_1..v_n) = e_k(v_1..v_{n-1}) + v_n e_{k-1}(v_1..v_{n-1})."""
    if not 0 <= k <= len(vals):
        raise FormulaError(f"e_{k} is undefined for {len(vals)} values")
    e = [1] + [0] * k
    for v in vals:
        for j in range(k, 0, -1):
            e[j] += v * e[j - 1]
    return e[k]


@dataclass(frozen=True)
class FamilyInput:
    r: int
    deltas: tuple[int, ...]
    family: str
    mu: tuple[int, ...] = ()
    mp: int | None = None
    big_d: int | None = None
    delta_p: int | None = None
    hypotheses_asserted: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 1:
            raise FormulaError("r must be positive")
        if any(d < 1 for d in self.deltas):
            raise FormulaError("generation degrees must be positive")
        if self.family == PERFECT_HT2:
            if not self.mu or any(m < 1 for m in self.mu):
                raise FormulaError("mu must be a nonempty list of positive integers")
            if self.delta_p is not None and self.delta_p != sum(self.mu):
                raise FormulaError(f"delta_p = {self.delta_p} conflicts with sum(mu) = {sum(self.mu)}")
            object.__setattr__(self, "delta_p", sum(self.mu))
            object.__setattr__(self, "mp", len(self.mu))
        elif self.family == GORENSTEIN_HT3:
            if self.mp is None or self.mp < 1 or self.mp % 2:
                raise FormulaError("m_p must be a positive even integer")
            if self.big_d is None or self.big_d < 1:
                raise FormulaError("D must be a positive integer")
            if self.delta_p is None or self.delta_p < 1:
                raise FormulaError("delta_p must be a positive integer")
        else:
            raise FormulaError(f"unknown family {self.family!r}")
        if not self.hypotheses_asserted:
            object.__setattr__(self, "hypotheses_asserted", self.default_hypotheses())

    @property
    def p(self) -> int:
        return len(self.deltas) + 1

    def default_hypotheses(self) -> dict:
        last = "perfect of height two" if self.family == PERFECT_HT2 else "Gorenstein of height three"
        hyp = {
            "first_factors_m_primary": True,
            "last_factor": last,
            "last_factor_satisfies_G_r_plus_1": True,
            "m_p_at_least_r": self.mp >= self.r if self.mp is not None else None,
        }
        if self.family == GORENSTEIN_HT3:
            hyp["presentation_entries_degree"] = self.big_d
            # expected for submaximal Pfaffians; reported, not enforced
            hyp["pfaffian_degree_relation_holds"] = self.delta_p * 2 == self.big_d * self.mp
        return hyp


def perfect_ht2_table(inp: FamilyInput) -> MultidegreeTable:
    if inp.family != PERFECT_HT2:
        raise FormulaError("expected a perfect-ht2 family input")
    entries = {}
    for d in compositions(inp.r, inp.p):
        dp = d[-1]
        e = elementary_symmetric(dp, inp.mu) if dp <= len(inp.mu) else 0
        entries[d] = bound_product(inp.deltas, d[:-1]) * e
    return MultidegreeTable(inp.r, inp.p, entries, method="closed-formula",
                            extra={"asserted_hypotheses": inp.hypotheses_asserted})


def gorenstein_sum(mp: int, dp: int, big_d: int) -> int:
    """D^dp * sum_{k=0}^{floor((mp-dp)/2)} C(mp-1-2k, dp-1), the d_p >= 3 branch."""
    if dp > mp:
        return 0
    return big_d**dp * sum(math.comb(mp - 1 - 2 * k, dp - 1) for k in range((mp - dp) // 2 + 1))


def gorenstein_ht3_table(inp: FamilyInput) -> MultidegreeTable:
    if inp.family != GORENSTEIN_HT3:
        raise FormulaError("expected a gorenstein-ht3 family input")
    entries = {}
    for d in compositions(inp.r, inp.p):
        dp = d[-1]
        head = bound_product(inp.deltas, d[:-1])
        if dp >= 3:
            entries[d] = head * gorenstein_sum(inp.mp, dp, inp.big_d)
        else:
            entries[d] = head * inp.delta_p**dp
    return MultidegreeTable(inp.r, inp.p, entries, method="closed-formula",
                            extra={"asserted_hypotheses": inp.hypotheses_asserted})


def mprimary_table(r: int, deltas: Sequence[int]) -> MultidegreeTable:
    """delta^d for every type: the answer when every base ideal is m-primary."""
    p = len(deltas)
    return MultidegreeTable(r, p, {d: bound_product(deltas, d) for d in compositions(r, p)},
                            method="closed-formula",
                            extra={"asserted_hypotheses": {"all_factors_m_primary": True}})
