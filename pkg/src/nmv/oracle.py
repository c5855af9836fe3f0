"""Mixed multiplicities by counting monomials and fitting Hilbert polynomials.

This module never looks at polytopes.  It samples

    fiber:      dim_k [I_1^n_1 ... I_p^n_p]_{n.delta}
    saturated:  dim_k [(I_1^n_1 ... I_p^n_p : m^oo)]_{n.delta}

on a box of grid points, interpolates exactly, and reads off the top-degree
coefficients in the basis C(t_1+d_1, d_1) ... C(t_p+d_p, d_p).  Agreement of
two fits on shifted boxes is the (empirical) certificate that the samples lie
in the polynomial range.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .maps import MapSpec, MultidegreeTable, compositions
from .monomial_algebra import (
    MonomialIdeal,
    graded_piece_dimension,
    ideal_power,
    ideal_product,
    saturate_irrelevant,
)

# dense boolean staircases larger than this fall back to pairwise dominance tests
DENSE_LIMIT = 20_000_000


class StabilityError(RuntimeError):
    """Fits on two shifted grids disagree, or the samples are not polynomial of the expected degree."""

    def __init__(self, message: str, first: HilbertGrid | None = None, second: HilbertGrid | None = None):
        super().__init__(message)
        self.first = first
        self.second = second


@dataclass
class HilbertGrid:
    """Samples of a Hilbert function on {N0+1, ..., N0+W}^p and their fit.

    ``fitted`` maps d to the coefficient of C(t_1+d_1, d_1) ... C(t_p+d_p, d_p);
    ``top_coeffs`` holds the integers e(d) for |d| = r.
    """

    p: int
    offsets: tuple[int, ...]
    width: int
    samples: dict[tuple[int, ...], int]
    fitted: dict[tuple[int, ...], Fraction] | None = None
    top_coeffs: dict[tuple[int, ...], int] = field(default_factory=dict)

    def points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(o + 1, o + self.width + 1) for o in self.offsets)))

    def evaluate(self, n: Sequence[int]) -> Fraction:
        if self.fitted is None:
            raise ValueError("grid has not been fitted")
        return sum(
            (c * math.prod(math.comb(t + d, d) for t, d in zip(n, dd)) for dd, c in self.fitted.items()),
            Fraction(0),
        )

    def diagnostics(self) -> dict:
        return {"offsets": list(self.offsets), "width": self.width, "points": len(self.samples)}


def sample_grid(fn: Callable[[tuple[int, ...]], int], p: int, offsets: Sequence[int], width: int) -> HilbertGrid:
    grid = HilbertGrid(p, tuple(offsets), width, {})
    grid.samples = {n: fn(n) for n in grid.points()}
    return grid


def _newton_coefficients(values: np.ndarray) -> np.ndarray:
    """Mixed forward differences at the corner, along every axis."""
    out = values
    for axis in range(values.ndim):
        out = np.moveaxis(out, axis, 0)
        rows = [out[0]]
        cur = out
        for _ in range(1, out.shape[0]):
            cur = cur[1:] - cur[:-1]
            rows.append(cur[0])
        out = np.moveaxis(np.stack(rows), 0, axis)
    return out


def _poly_mul_linear(coeffs: list[Fraction], c: int) -> list[Fraction]:
    """coeffs(t) * (t + c)."""
    out = [Fraction(0)] * (len(coeffs) + 1)
    for i, a in enumerate(coeffs):
        out[i] += a * c
        out[i + 1] += a
    return out


def _binomial_in_t(shift: int, k: int) -> list[Fraction]:
    """Monomial coefficients of C(t + shift, k) as a polynomial in t."""
    coeffs = [Fraction(1)]
    for i in range(k):
        coeffs = _poly_mul_linear(coeffs, shift - i)
    f = math.factorial(k)
    return [c / f for c in coeffs]


def _to_binomial_basis(coeffs: list[Fraction]) -> list[Fraction]:
    """Rewrite sum_j a_j t^j as sum_d b_d C(t + d, d)."""
    rest = list(coeffs)
    out = [Fraction(0)] * len(coeffs)
    for d in range(len(coeffs) - 1, -1, -1):
        if rest[d] == 0:
            continue
        basis = _binomial_in_t(d, d)
        b = rest[d] / basis[d]
        out[d] = b
        for j, a in enumerate(basis):
            rest[j] -= b * a
    return out


def fit_hilbert(grid: HilbertGrid, r: int) -> HilbertGrid:
    """Exact interpolation of the samples by a polynomial of total degree at most r.

    The box is interpolated by tensor Newton differences (degree W-1 per
    axis); every coefficient of total degree above r must vanish, which is
    the held-out consistency check.  The Newton coefficient of a top-degree
    term equals the coefficient of the matching C(t+d, d) product, so
    ``top_coeffs`` are read off as integers.
    """
    W, p = grid.width, grid.p
    if W < r + 2:
        raise ValueError(f"grid width {W} must be at least r + 2 = {r + 2}")
    shape = (W,) * p
    vals = np.empty(shape, dtype=object)
    for n in grid.points():
        vals[tuple(t - o - 1 for t, o in zip(n, grid.offsets))] = grid.samples[n]
    newton = _newton_coefficients(vals)

    coeffs: dict[tuple[int, ...], int] = {}
    for k in itertools.product(range(W), repeat=p):
        c = int(newton[k])
        if c == 0:
            continue
        if sum(k) > r:
            raise StabilityError(
                f"samples on offsets {grid.offsets} are not a polynomial of degree <= {r} "
                f"(nonzero difference of order {k})"
            )
        coeffs[k] = c

    # Newton basis prod C(n_i - a_i, k_i) -> binomial basis prod C(n_i + d_i, d_i)
    per_axis = []
    for o in grid.offsets:
        a = o + 1
        per_axis.append([_to_binomial_basis(_binomial_in_t(-a, k)) for k in range(r + 1)])
    fitted: dict[tuple[int, ...], Fraction] = {}
    for k, c in coeffs.items():
        factors = [per_axis[i][k[i]] for i in range(p)]
        for d in itertools.product(*(range(len(f)) for f in factors)):
            term = c * math.prod(f[di] for f, di in zip(factors, d))
            if term:
                fitted[d] = fitted.get(d, Fraction(0)) + term
    fitted = {d: v for d, v in fitted.items() if v}

    result = HilbertGrid(p, grid.offsets, W, dict(grid.samples), fitted)
    result.top_coeffs = {d: coeffs.get(d, 0) for d in compositions(r, p)}
    for n, v in grid.samples.items():
        if result.evaluate(n) != v:
            raise AssertionError(f"fit does not reproduce the sample at {n}")
    for d, e in result.top_coeffs.items():
        if e < 0:
            raise StabilityError(f"negative top coefficient e{d} = {e} on offsets {grid.offsets}", result)
    return result


def stable_fit(
    fn: Callable[[tuple[int, ...]], int],
    p: int,
    r: int,
    offsets: Sequence[int],
    width: int,
    shifts: Sequence[int] = (1,),
) -> list[HilbertGrid]:
    """Fit on the base box and on boxes shifted by each of ``shifts``; all must agree on the top part."""
    base = fit_hilbert(sample_grid(fn, p, offsets, width), r)
    fits = [base]
    for s in shifts:
        other = fit_hilbert(sample_grid(fn, p, [o + s for o in offsets], width), r)
        if other.top_coeffs != base.top_coeffs:
            raise StabilityError(
                f"top coefficients differ between offsets {base.offsets} and {other.offsets}", base, other
            )
        fits.append(other)
    return fits


def default_grid(spec: MapSpec) -> tuple[tuple[int, ...], int]:
    n0 = spec.r + max(spec.deltas) + 2
    return (n0,) * spec.p, spec.r + 2


def escalating_fit(
    fn: Callable[[tuple[int, ...]], int],
    p: int,
    r: int,
    offsets: Sequence[int],
    width: int,
) -> list[HilbertGrid]:
    """stable_fit, retried once with doubled offsets before giving up."""
    try:
        return stable_fit(fn, p, r, offsets, width)
    except StabilityError:
        return stable_fit(fn, p, r, [2 * o for o in offsets], width)


# ---------------------------------------------------------------------------
# sampling


def _encoding_base(nvars: int) -> int:
    return 1 << (62 // nvars)


class FiberSampler:
    """Graded pieces of products of powers of the base ideals.

    Generator sets are kept as sorted int64 arrays, each exponent vector
    packed into one integer in a fixed radix; since the product of
    equigenerated ideals is generated by sums of generators, a sumset of
    packed integers is the generator set of the product.  Power sets are
    memoized (write-once).
    """

    def __init__(self, spec: MapSpec):
        self.spec = spec
        self.nvars = spec.nvars
        self.base = _encoding_base(self.nvars)
        self._gens = [self._encode(np.array(I.gens, dtype=np.int64)) for I in spec.ideals]
        self._powers: dict[tuple[int, int], np.ndarray] = {}
        self._staircases: dict[int, np.ndarray] = {}

    def _encode(self, arr: np.ndarray) -> np.ndarray:
        if arr.size and arr.max() >= self.base:
            raise OverflowError("exponent too large for the packed encoding")
        codes = np.zeros(arr.shape[0], dtype=np.int64)
        for c in range(self.nvars):
            codes = codes * self.base + arr[:, c]
        return np.unique(codes)

    def decode(self, codes: np.ndarray) -> np.ndarray:
        out = np.empty((codes.shape[0], self.nvars), dtype=np.int64)
        rest = codes.copy()
        for c in range(self.nvars - 1, -1, -1):
            out[:, c] = rest % self.base
            rest //= self.base
        return out

    def power(self, i: int, n: int) -> np.ndarray:
        key = (i, n)
        if key not in self._powers:
            if n == 0:
                self._powers[key] = np.zeros(1, dtype=np.int64)
            else:
                prev = self.power(i, n - 1)
                self._powers[key] = np.unique(np.add.outer(prev, self._gens[i]).ravel())
        return self._powers[key]

    def product(self, n: Sequence[int]) -> np.ndarray:
        """Packed generators of I_1^n_1 ... I_p^n_p (all of degree n.delta)."""
        acc = np.zeros(1, dtype=np.int64)
        for i, e in enumerate(n):
            if e:
                acc = np.unique(np.add.outer(acc, self.power(i, e)).ravel())
        return acc

    def target_degree(self, n: Sequence[int]) -> int:
        return sum(e * d for e, d in zip(n, self.spec.deltas))

    def fiber_dimension(self, n: Sequence[int]) -> int:
        return int(self.product(n).shape[0])

    def _degree_slice(self, D: int) -> np.ndarray:
        if D not in self._staircases:
            r = self.nvars - 1
            rows = [
                [b - a - 1 for a, b in zip((-1,) + bars, bars + (D + r,))]
                for bars in itertools.combinations(range(D + r), r)
            ]
            self._staircases[D] = np.array(rows, dtype=np.int64).reshape(-1, self.nvars)
        return self._staircases[D]

    def saturated_dimension(self, n: Sequence[int]) -> int:
        """Count degree-D monomials a with a_{-j} >= g_{-j} for some generator g, for every j.

        That is membership in the intersection of the colons (I : x_j^oo).
        """
        D = self.target_degree(n)
        gens = self.decode(self.product(n))
        slice_ = self._degree_slice(D)
        member = np.ones(slice_.shape[0], dtype=bool)
        r = self.nvars - 1
        for j in range(self.nvars):
            keep = [c for c in range(self.nvars) if c != j]
            proj = gens[:, keep]
            pts = slice_[:, keep]
            if (D + 1) ** r <= DENSE_LIMIT:
                upset = np.zeros((D + 1,) * r, dtype=bool)
                upset[tuple(proj.T)] = True
                for axis in range(r):
                    upset = np.logical_or.accumulate(upset, axis=axis)
                member &= upset[tuple(pts.T)]
            else:
                member &= _dominates_any(pts, _minimal_rows(proj))
        return int(member.sum())


def _minimal_rows(arr: np.ndarray) -> np.ndarray:
    gens = MonomialIdeal.from_generators(map(tuple, arr.tolist()), arr.shape[1]).gens
    return np.array(gens, dtype=np.int64).reshape(-1, arr.shape[1])


def _dominates_any(pts: np.ndarray, gens: np.ndarray, chunk: int = 4096) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=bool)
    for s in range(0, pts.shape[0], chunk):
        block = pts[s : s + chunk]
        out[s : s + chunk] = (block[:, None, :] >= gens[None, :, :]).all(axis=2).any(axis=1)
    return out


# ---------------------------------------------------------------------------
# public operations


def fiber_dimension(spec: MapSpec, n: Sequence[int]) -> int:
    """dim_k [I_1^n_1 ... I_p^n_p]_{n.delta}: the special fiber ring in degree n."""
    return FiberSampler(spec).fiber_dimension(n)


def saturated_fiber_dimension(spec: MapSpec, n: Sequence[int]) -> int:
    """dim_k [(I_1^n_1 ... I_p^n_p : m^oo)]_{n.delta}: the saturated fiber ring in degree n."""
    return FiberSampler(spec).saturated_dimension(n)


def saturated_fiber_dimension_literal(spec: MapSpec, n: Sequence[int]) -> int:
    """Same value as :func:`saturated_fiber_dimension`, through ideal arithmetic.

    Builds the product of powers, saturates it and counts by
    inclusion-exclusion.  Slow; used to cross-check the packed sampler.
    """
    J = MonomialIdeal.unit(spec.nvars)
    for I, e in zip(spec.ideals, n):
        J = ideal_product(J, ideal_power(I, e))
    D = sum(e * d for e, d in zip(n, spec.deltas))
    return graded_piece_dimension(saturate_irrelevant(J), D)


def _table_from_fits(spec: MapSpec, fits: list[HilbertGrid], method: str) -> MultidegreeTable:
    return MultidegreeTable(
        spec.r,
        spec.p,
        dict(fits[0].top_coeffs),
        method=method,
        extra={"grids": [g.diagnostics() for g in fits]},
    )


def _resolve_grid(spec: MapSpec, offset: int | None, width: int | None) -> tuple[tuple[int, ...], int]:
    offsets, w = default_grid(spec)
    if offset is not None:
        offsets = (offset,) * spec.p
    if width is not None:
        w = width
    return offsets, w


def saturated_fiber_mixed_multiplicities(
    spec: MapSpec, offset: int | None = None, width: int | None = None, sampler: FiberSampler | None = None
) -> MultidegreeTable:
    """e(d, saturated fiber ring) for |d| = r; equals deg(G) * deg^d(Y)."""
    sampler = sampler or FiberSampler(spec)
    offsets, w = _resolve_grid(spec, offset, width)
    fits = escalating_fit(sampler.saturated_dimension, spec.p, spec.r, offsets, w)
    return _table_from_fits(spec, fits, "oracle")


def special_fiber_mixed_multiplicities(
    spec: MapSpec, offset: int | None = None, width: int | None = None, sampler: FiberSampler | None = None
) -> MultidegreeTable:
    """e(d, special fiber ring) for |d| = r; equals deg^d(Y) (no deg(G) factor)."""
    sampler = sampler or FiberSampler(spec)
    offsets, w = _resolve_grid(spec, offset, width)
    fits = escalating_fit(sampler.fiber_dimension, spec.p, spec.r, offsets, w)
    return _table_from_fits(spec, fits, "oracle-unsaturated")


def birationality_defect(spec: MapSpec, offset: int | None = None, width: int | None = None) -> MultidegreeTable:
    """Saturated minus unsaturated mixed multiplicities, i.e. deg^d(Y) (deg(G) - 1).

    An all-zero table certifies birationality only when the map is
    generically finite and the special fiber ring is integrally closed;
    neither is decided here.
    """
    sampler = FiberSampler(spec)
    sat = saturated_fiber_mixed_multiplicities(spec, offset, width, sampler)
    fib = special_fiber_mixed_multiplicities(spec, offset, width, sampler)
    diff = {d: sat.entries[d] - fib.entries[d] for d in sat.entries}
    bad = {d: v for d, v in diff.items() if v < 0}
    if bad:
        raise AssertionError(f"negative birationality defect {bad}")
    return MultidegreeTable(spec.r, spec.p, diff, method="birationality-defect")
