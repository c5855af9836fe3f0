"""Linear multiview varieties: camera kernels and the multidegree support criterion.

Semantics are over an algebraically closed field, so every base point has
residue degree one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .maps import MapSpec, MultidegreeTable, compositions
from .monomial_algebra import MonomialIdeal

Matrix = tuple[tuple[Fraction, ...], ...]


class CameraRankError(ValueError):
    """A camera of rank below r: the base locus is positive-dimensional."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"rationals must be integers or 'a/b' strings, got {value!r}")


def row_reduce(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        lead = m[rk][c]
        m[rk] = [x / lead for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        pivots.append(c)
        rk += 1
        if rk == len(m):
            break
    return m[:rk], pivots


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def normalize_point(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Projective representative with first nonzero coordinate equal to 1."""
    lead = next(x for x in v if x != 0)
    return tuple(Fraction(x) / lead for x in v)


@dataclass(frozen=True)
class CameraConfig:
    r: int
    cameras: tuple[Matrix, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("source dimension must be at least 1")
        if not self.cameras:
            raise ValueError("need at least one camera")
        for i, A in enumerate(self.cameras):
            if not A or any(len(row) != self.r + 1 for row in A):
                raise ValueError(f"camera {i} must have {self.r + 1} columns")

    @classmethod
    def from_lists(cls, r: int, cameras) -> CameraConfig:
        return cls(r, tuple(tuple(tuple(parse_rational(x) for x in row) for row in A) for A in cameras))

    @classmethod
    def from_json(cls, obj: dict) -> CameraConfig:
        return cls.from_lists(int(obj["r"]), obj["cameras"])

    @property
    def p(self) -> int:
        return len(self.cameras)

    def ranks(self) -> list[int]:
        return [len(row_reduce(A)[1]) for A in self.cameras]

    def row_space(self, i: int) -> list[list[Fraction]]:
        return row_reduce(self.cameras[i])[0]


def _check_ranks(cfg: CameraConfig) -> list[int]:
    ranks = cfg.ranks()
    for i, rk in enumerate(ranks):
        if rk < cfg.r:
            raise CameraRankError(f"camera {i} has rank {rk} < r = {cfg.r}; the base locus is not finite")
    return ranks


def camera_kernels(cfg: CameraConfig) -> list[tuple[Fraction, ...] | None]:
    """Kernel point of each camera, or None for an injective camera."""
    ranks = _check_ranks(cfg)
    out: list[tuple[Fraction, ...] | None] = []
    for A, rk in zip(cfg.cameras, ranks):
        if rk == cfg.r + 1:
            out.append(None)
        else:
            (v,) = kernel(A, cfg.r + 1)
            out.append(normalize_point(v))
    return out


def camera_base_points(cfg: CameraConfig) -> list[tuple[Fraction, ...]]:
    """Distinct kernel points of the rank-r cameras, in order of first appearance."""
    seen: list[tuple[Fraction, ...]] = []
    for k in camera_kernels(cfg):
        if k is not None and k not in seen:
            seen.append(k)
    return seen


def multidegree_support(cfg: CameraConfig) -> MultidegreeTable:
    """deg^d(Y) in {0, 1}: one iff every base point has a camera i with I_i != p and d_i >= 1."""
    kernels = camera_kernels(cfg)
    points = camera_base_points(cfg)
    entries = {}
    for d in compositions(cfg.r, cfg.p):
        ok = all(any(kernels[i] != pt and d[i] >= 1 for i in range(cfg.p)) for pt in points)
        entries[d] = int(ok)
    return MultidegreeTable(cfg.r, cfg.p, entries, method="linear-criterion")


def coordinate_alignment_export(cfg: CameraConfig) -> MapSpec | None:
    """The monomial MapSpec of the cameras when every row space is spanned by coordinate vectors.

    Returns None (unsupported) otherwise.
    """
    ideals = []
    n = cfg.r + 1
    for i in range(cfg.p):
        rows = cfg.row_space(i)
        variables = []
        for row in rows:
            nz = [c for c, x in enumerate(row) if x != 0]
            if len(nz) != 1:
                return None
            variables.append(nz[0])
        ideals.append(MonomialIdeal.from_generators((tuple(int(c == v) for c in range(n)) for v in variables), n))
    return MapSpec(tuple(ideals))


def coordinate_camera(r: int, variables: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    """The camera whose rows pick out the given coordinates."""
    return tuple(tuple(Fraction(int(c == v)) for c in range(r + 1)) for v in variables)
