"""Exact lattice polytopes: hulls, Minkowski sums, volumes and mixed volumes.

All predicates are integer determinants, volumes are ``Fraction``s.
Mixed volumes use the normalization in which MV(K, ..., K) = r! Vol(K), so
that Vol(l_1 K_1 + ... + l_p K_p) = sum_d MV(K_d) / d! * l^d.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .monomial_algebra import MonomialIdeal

Point = tuple[int, ...]

MAX_HULL_DIM = 4


class PolytopeError(ValueError):
    pass


def det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by Bareiss elimination (exact, no fractions)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            f = m[i][c] / m[rk][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk


def _sub(a: Sequence[int], b: Sequence[int]) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _normal(edges: Sequence[Sequence[int]]) -> Point:
    """Generalized cross product of k-1 vectors in R^k."""
    k = len(edges) + 1
    return tuple(
        (-1) ** j * det([[e[c] for c in range(k) if c != j] for e in edges]) for j in range(k)
    )


@dataclass
class _Facet:
    idx: tuple[int, ...]
    normal: Point
    offset: int


def _full_hull(pts: Sequence[Point]) -> tuple[list[int], list[_Facet]]:
    """Incremental beneath-beyond hull of a full-dimensional point set.

    Returns the indices of the extreme points and a triangulation of the
    boundary into simplicial facets with outward normals.
    """
    k = len(pts[0])
    if k == 1:
        lo = min(range(len(pts)), key=lambda i: pts[i][0])
        hi = max(range(len(pts)), key=lambda i: pts[i][0])
        return sorted({lo, hi}), [_Facet((lo,), (-1,), -pts[lo][0]), _Facet((hi,), (1,), pts[hi][0])]

    simplex = [0]
    for i in range(1, len(pts)):
        trial = simplex + [i]
        if rank([_sub(pts[j], pts[trial[0]]) for j in trial[1:]]) == len(trial) - 1:
            simplex = trial
            if len(simplex) == k + 1:
                break
    if len(simplex) != k + 1:
        raise PolytopeError("point set is not full-dimensional")
    # k+1 times the centroid of the start simplex; stays strictly interior
    inner = tuple(sum(pts[j][c] for j in simplex) for c in range(k))

    def make_facet(idx: tuple[int, ...]) -> _Facet:
        base = pts[idx[0]]
        nrm = _normal([_sub(pts[j], base) for j in idx[1:]])
        off = _dot(nrm, base)
        if _dot(nrm, inner) - (k + 1) * off > 0:
            nrm = tuple(-x for x in nrm)
            off = -off
        return _Facet(idx, nrm, off)

    facets = [make_facet(f) for f in combinations(simplex, k)]
    used = set(simplex)
    for q in range(len(pts)):
        if q in used:
            continue
        visible = [f for f in facets if _dot(f.normal, pts[q]) > f.offset]
        if not visible:
            continue
        ridges: Counter = Counter()
        for f in visible:
            for ridge in combinations(f.idx, k - 1):
                ridges[frozenset(ridge)] += 1
        horizon = [tuple(sorted(r)) for r, c in ridges.items() if c == 1]
        vis_ids = {id(f) for f in visible}
        facets = [f for f in facets if id(f) not in vis_ids]
        facets.extend(make_facet(r + (q,)) for r in horizon)
        used.add(q)

    incident: dict[int, list[Point]] = {}
    for f in facets:
        for i in f.idx:
            incident.setdefault(i, []).append(f.normal)
    # a boundary point is a vertex iff its normal cone is full-dimensional
    verts = sorted(i for i, normals in incident.items() if rank(normals) == k)
    return verts, facets


def _affine_frame(pts: Sequence[Point]) -> tuple[int, list[int]]:
    """Affine dimension of pts and coordinates on which projection is injective."""
    base = pts[0]
    dirs = [_sub(p, base) for p in pts[1:]]
    dim = rank(dirs) if dirs else 0
    cols: list[int] = []
    for c in range(len(base)):
        trial = cols + [c]
        if rank([[d[t] for t in trial] for d in dirs]) == len(trial):
            cols = trial
        if len(cols) == dim:
            break
    return dim, cols


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of integer points, stored by its vertices only."""

    dim_ambient: int
    vertices: tuple[Point, ...]

    @property
    def affine_dim(self) -> int:
        return _affine_frame(self.vertices)[0]

    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim_ambient

    def translate(self, v: Sequence[int]) -> LatticePolytope:
        return LatticePolytope(self.dim_ambient, tuple(sorted(tuple(a + b for a, b in zip(p, v)) for p in self.vertices)))

    def scale(self, s: int) -> LatticePolytope:
        if s < 0:
            raise PolytopeError("negative dilation")
        if s == 0:
            return point(self.dim_ambient)
        return LatticePolytope(self.dim_ambient, tuple(sorted(tuple(s * a for a in p) for p in self.vertices)))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, obj: dict) -> LatticePolytope:
        return convex_hull(tuple(int(x) for x in v) for v in obj["vertices"])


def point(k: int) -> LatticePolytope:
    return LatticePolytope(k, ((0,) * k,))


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise PolytopeError("convex hull of an empty set")
    k = len(pts[0])
    if any(len(p) != k for p in pts):
        raise PolytopeError("points of mixed dimension")
    if len(pts) == 1:
        return LatticePolytope(k, tuple(pts))
    dim, cols = _affine_frame(pts)
    if dim > MAX_HULL_DIM:
        raise PolytopeError(f"hulls are limited to dimension {MAX_HULL_DIM}, got {dim}")
    if dim == 0:
        return LatticePolytope(k, (pts[0],))
    proj = [tuple(p[c] for c in cols) for p in pts]
    verts, _ = _full_hull(proj)
    return LatticePolytope(k, tuple(sorted(pts[i] for i in verts)))


def newton_polytope(I: MonomialIdeal) -> LatticePolytope:
    if I.is_zero():
        raise PolytopeError("the zero ideal has no Newton polytope")
    return convex_hull(I.gens)


def project_away_first(P: LatticePolytope) -> LatticePolytope:
    """Image under (x_0, x_1, ..., x_r) -> (x_1, ..., x_r)."""
    if P.dim_ambient < 2:
        raise PolytopeError("cannot project a polytope in R^1")
    return convex_hull(v[1:] for v in P.vertices)


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.dim_ambient != Q.dim_ambient:
        raise PolytopeError("ambient mismatch in Minkowski sum")
    return convex_hull(tuple(a + b for a, b in zip(u, v)) for u in P.vertices for v in Q.vertices)


def minkowski_combination(polys: Sequence[LatticePolytope], coeffs: Sequence[int]) -> LatticePolytope:
    """l_1 P_1 + ... + l_p P_p for nonnegative integer l."""
    if not polys:
        raise PolytopeError("empty Minkowski combination")
    acc = point(polys[0].dim_ambient)
    for P, c in zip(polys, coeffs):
        if c:
            acc = minkowski_sum(acc, P.scale(c))
    return acc


def volume(P: LatticePolytope) -> Fraction:
    """Euclidean volume in the ambient space; zero unless full-dimensional."""
    k = P.dim_ambient
    if len(P.vertices) <= k or not P.is_full_dimensional():
        return Fraction(0)
    if k > MAX_HULL_DIM:
        raise PolytopeError(f"volumes are limited to dimension {MAX_HULL_DIM}")
    _, facets = _full_hull(P.vertices)
    apex = P.vertices[0]
    total = 0
    for f in facets:
        if k == 1:
            total += abs(P.vertices[f.idx[0]][0] - apex[0])
        else:
            total += abs(det([_sub(P.vertices[i], apex) for i in f.idx]))
    return Fraction(total, math.factorial(k))


@dataclass(frozen=True)
class PolytopeMultiset:
    """Polytopes with multiplicities; the multiplicities add up to the ambient dimension."""

    entries: tuple[tuple[LatticePolytope, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise PolytopeError("empty multiset")
        k = self.entries[0][0].dim_ambient
        if any(P.dim_ambient != k for P, _ in self.entries):
            raise PolytopeError("polytopes of different ambient dimension")
        if any(m < 0 for _, m in self.entries):
            raise PolytopeError("negative multiplicity")

    @property
    def dim(self) -> int:
        return self.entries[0][0].dim_ambient

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @classmethod
    def of(cls, *polys: LatticePolytope) -> PolytopeMultiset:
        return cls(tuple((P, 1) for P in polys))


def mixed_volume(ms: PolytopeMultiset) -> int:
    """Mixed volume by polarization over sub-multisets.

    MV(K_1, ..., K_r) = sum over nonempty S of (-1)^(r-|S|) Vol(sum_{i in S} K_i).
    Slots holding the same polytope are grouped, so each distinct
    sub-multiset is hulled once and weighted by a product of binomials.
    """
    r = ms.dim
    if ms.total != r:
        raise PolytopeError(f"multiplicities add up to {ms.total}, expected {r}")
    polys = [P for P, _ in ms.entries]
    counts = [m for _, m in ms.entries]
    total = Fraction(0)
    for s in product(*(range(c + 1) for c in counts)):
        size = sum(s)
        if size == 0:
            continue
        weight = math.prod(math.comb(c, t) for c, t in zip(counts, s))
        total += (-1) ** (r - size) * weight * volume(minkowski_combination(polys, s))
    if total.denominator != 1 or total < 0:
        raise AssertionError(f"mixed volume {total} is not a nonnegative integer")
    return int(total)
