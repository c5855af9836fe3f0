"""Multidegrees of monomial rational maps.

The main route is polyhedral: deg(G) * deg^d(Y) is the mixed volume of the
projected Newton polytopes taken with multiplicities d.  The base-locus
route (degree formula) and the graph route are computed from counts and
fits, independently of the polytopes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .maps import MapSpec, MultidegreeTable, bound_product, compositions
from .monomial_algebra import MonomialIdeal, dehomogenize, ideal_product
from .oracle import (
    FiberSampler,
    HilbertGrid,
    default_grid,
    escalating_fit,
    saturated_fiber_mixed_multiplicities,
)
from .polyhedral import (
    LatticePolytope,
    PolytopeMultiset,
    minkowski_combination,
    mixed_volume,
    newton_polytope,
    project_away_first,
)


class BaseLocusError(ValueError):
    """The base locus is positive-dimensional where a finite one is required."""

    def __init__(self, message: str, prime: tuple[int, ...] | None = None):
        super().__init__(message)
        self.prime = prime


def projected_polytopes(spec: MapSpec) -> list[LatticePolytope]:
    return [project_away_first(newton_polytope(I)) for I in spec.ideals]


def monomial_multidegrees(spec: MapSpec) -> MultidegreeTable:
    """deg(G) * deg^d(Y) = MV_r of d_i copies of pi(Gamma(I_i)), for every type d."""
    polys = projected_polytopes(spec)
    entries = {}
    for d in spec.types():
        ms = PolytopeMultiset(tuple((P, m) for P, m in zip(polys, d) if m))
        entries[d] = mixed_volume(ms)
    table = MultidegreeTable(spec.r, spec.p, entries, method="mixed-volume")
    bound = table.degree_bound()
    if bound is not None:
        table.extra["degree_bound_heuristic"] = bound
    return table


def generic_finiteness_check(spec: MapSpec) -> bool:
    """The map is generically finite iff the sum of the projected polytopes is full-dimensional."""
    total = minkowski_combination(projected_polytopes(spec), [1] * spec.p)
    return total.is_full_dimensional()


def upper_bound_check(spec: MapSpec, table: MultidegreeTable) -> bool:
    return all(v <= bound_product(spec.deltas, d) for d, v in table.entries.items())


# ---------------------------------------------------------------------------
# base locus


def minimal_primes(I: MonomialIdeal) -> list[tuple[int, ...]]:
    """Minimal primes of a monomial ideal, as sorted tuples of variable indices.

    These are the minimal hitting sets of the generator supports.
    """
    if I.is_unit():
        return []
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in I.gens]
    found: list[frozenset] = []
    for size in range(I.nvars + 1):
        for cand in itertools.combinations(range(I.nvars), size):
            s = frozenset(cand)
            if any(f <= s for f in found):
                continue
            if all(s & sup for sup in supports):
                found.append(s)
    return sorted(tuple(sorted(f)) for f in found)


@dataclass
class BaseLocusReport:
    """V(I_1 ... I_p) in P^r.

    ``dimension`` is -1 for the empty set.  ``points`` lists j for each
    coordinate point e_j in a finite base locus.
    """

    dimension: int
    primes: list[tuple[int, ...]]
    points: list[int] = field(default_factory=list)
    mixed_mults: dict[tuple[int, ...], int] | None = None

    def offending_prime(self) -> tuple[int, ...] | None:
        if self.dimension <= 0:
            return None
        return min(self.primes, key=len)

    def to_json(self, variables: Sequence[str] | None = None) -> dict:
        name = (lambda i: variables[i]) if variables else (lambda i: f"x{i}")
        out = {
            "dimension": self.dimension,
            "minimal_primes": [[name(i) for i in q] for q in self.primes],
            "points": [name(j) for j in self.points],
        }
        if self.mixed_mults is not None:
            out["mixed_multiplicities"] = [
                {"type": list(d), "value": v} for d, v in sorted(self.mixed_mults.items(), reverse=True)
            ]
        return out


def _product_ideal(spec: MapSpec) -> MonomialIdeal:
    J = spec.ideals[0]
    for I in spec.ideals[1:]:
        J = ideal_product(J, I)
    return J


def base_locus(spec: MapSpec, with_multiplicities: bool = False) -> BaseLocusReport:
    primes = minimal_primes(_product_ideal(spec))
    n = spec.nvars
    dim = n - 1 - min(len(q) for q in primes) if primes else -1
    report = BaseLocusReport(dim, primes)
    if dim == 0:
        report.points = sorted(set(range(n)).difference(q).pop() for q in primes if len(q) == n - 1)
    if dim <= 0 and with_multiplicities:
        report.mixed_mults = base_locus_mixed_multiplicities(spec)
    return report


class LocalSampler:
    """Colength of (I_1^n_1 ... I_p^n_p) at a coordinate point, on a dense staircase.

    The dehomogenized product is built as a boolean up-set inside the box
    cut out by the pure powers, one multiplication by a generator set at a
    time; the colength is the number of lattice points left outside.
    """

    def __init__(self, spec: MapSpec, j: int):
        self.spec = spec
        self.j = j
        self.local = [dehomogenize(I, j) for I in spec.ideals]
        self.r = spec.r
        self.pure = []
        for K in self.local:
            row = []
            for v in range(self.r):
                exps = [g[v] for g in K.gens if all(e == 0 for t, e in enumerate(g) if t != v)]
                if not exps:
                    raise BaseLocusError(f"ideal is not cofinite at the coordinate point {j}")
                row.append(min(exps))
            self.pure.append(row)

    def colength(self, n: Sequence[int]) -> int:
        box = [sum(e * row[v] for e, row in zip(n, self.pure)) for v in range(self.r)]
        if min(box) == 0:
            return 0
        upset = np.zeros(box, dtype=bool)
        upset[(0,) * self.r] = True
        for K, e in zip(self.local, n):
            gens = [g for g in K.gens if all(a < b for a, b in zip(g, box))]
            for _ in range(e):
                nxt = np.zeros_like(upset)
                for g in gens:
                    target = tuple(slice(a, None) for a in g)
                    source = tuple(slice(0, b - a) for a, b in zip(g, box))
                    nxt[target] |= upset[source]
                upset = nxt
        for axis in range(self.r):
            upset = np.logical_or.accumulate(upset, axis=axis)
        return int(upset.size - upset.sum())


def local_mixed_multiplicities(
    spec: MapSpec, j: int, offset: int | None = None, width: int | None = None
) -> dict[tuple[int, ...], int]:
    """e_d(R_p; I_1, ..., I_p) at the coordinate point e_j, from a two-grid fit."""
    sampler = LocalSampler(spec, j)
    offsets, w = default_grid(spec)
    if offset is not None:
        offsets = (offset,) * spec.p
    if width is not None:
        w = width
    fits = escalating_fit(sampler.colength, spec.p, spec.r, offsets, w)
    return dict(fits[0].top_coeffs)


def base_locus_mixed_multiplicities(
    spec: MapSpec, offset: int | None = None, width: int | None = None
) -> dict[tuple[int, ...], int]:
    """e_d(B(G)): local mixed multiplicities summed over the base points (residue degree 1)."""
    report = base_locus(spec)
    if report.dimension > 0:
        raise BaseLocusError(
            f"base locus has dimension {report.dimension}", report.offending_prime()
        )
    total = {d: 0 for d in spec.types()}
    for j in report.points:
        for d, v in local_mixed_multiplicities(spec, j, offset, width).items():
            total[d] += v
    return total


def degree_formula_table(
    spec: MapSpec, offset: int | None = None, width: int | None = None
) -> MultidegreeTable:
    """delta^d - e_d(B(G)) for every type d; requires a finite base locus."""
    mults = base_locus_mixed_multiplicities(spec, offset, width)
    entries = {d: bound_product(spec.deltas, d) - mults[d] for d in spec.types()}
    bad = {d: v for d, v in entries.items() if v < 0}
    if bad:
        raise AssertionError(f"base-locus multiplicities exceed the Bezout bound at {bad}")
    return MultidegreeTable(
        spec.r,
        spec.p,
        entries,
        method="degree-formula",
        extra={"base_locus_mixed_multiplicities": [{"type": list(d), "value": v} for d, v in sorted(mults.items(), reverse=True)]},
    )


# ---------------------------------------------------------------------------
# graph


@dataclass
class GraphMultidegrees:
    """deg^(d0, d)(Gamma) for the graph in P^r x P^m_1 x ... x P^m_p."""

    r: int
    p: int
    entries: dict[tuple[int, ...], int]
    grids: list[HilbertGrid]

    def zero_slice(self) -> dict[tuple[int, ...], int]:
        return {k[1:]: v for k, v in self.entries.items() if k[0] == 0}

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "p": self.p,
            "entries": [{"type": list(k), "value": v} for k, v in sorted(self.entries.items(), reverse=True)],
            "method": "graph-oracle",
            "grids": [g.diagnostics() for g in self.grids],
        }


class GraphSampler:
    """dim_k [I_1^n_1 ... I_p^n_p]_{n0 + n.delta}, the Rees algebra in bidegree (n0, n)."""

    def __init__(self, spec: MapSpec):
        self.fiber = FiberSampler(spec)
        nv = spec.nvars
        units = np.array([[1 if i == j else 0 for i in range(nv)] for j in range(nv)], dtype=np.int64)
        self.units = self.fiber._encode(units)
        self._cache: dict[tuple[int, ...], dict[int, int]] = {}

    def dimension(self, point: tuple[int, ...]) -> int:
        n0, n = point[0], point[1:]
        counts = self._cache.setdefault(n, {})
        if n0 not in counts:
            # walk up in n0 from the generators, recording every count on the way
            acc = self.fiber.product(n)
            counts[0] = int(acc.shape[0])
            for t in range(1, n0 + 1):
                acc = np.unique(np.add.outer(acc, self.units).ravel())
                counts[t] = int(acc.shape[0])
        return counts[n0]


def graph_multidegrees(spec: MapSpec, offset: int | None = None, width: int | None = None) -> GraphMultidegrees:
    sampler = GraphSampler(spec)
    offsets, w = default_grid(spec)
    offsets = (offsets[0],) * (spec.p + 1)
    if offset is not None:
        offsets = (offset,) * (spec.p + 1)
    if width is not None:
        w = width
    fits = escalating_fit(sampler.dimension, spec.p + 1, spec.r, offsets, w)
    return GraphMultidegrees(spec.r, spec.p, dict(fits[0].top_coeffs), fits)


def graph_slice_check(spec: MapSpec, graph: GraphMultidegrees | None = None) -> bool:
    """The d0 = 0 slice of the graph multidegrees equals the saturated-fiber multiplicities."""
    graph = graph or graph_multidegrees(spec)
    return graph.zero_slice() == saturated_fiber_mixed_multiplicities(spec).entries


__all__ = [
    "BaseLocusError",
    "BaseLocusReport",
    "GraphMultidegrees",
    "base_locus",
    "base_locus_mixed_multiplicities",
    "compositions",
    "degree_formula_table",
    "generic_finiteness_check",
    "graph_multidegrees",
    "graph_slice_check",
    "local_mixed_multiplicities",
    "minimal_primes",
    "monomial_multidegrees",
    "upper_bound_check",
]
