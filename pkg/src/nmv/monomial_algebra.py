"""Monomial ideals in k[x_0, ..., x_r] stored as antichains of exponent vectors.

Everything here is combinatorial, so the results do not depend on the
ground field.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

INFINITE = math.inf

Exponent = tuple[int, ...]


class MonomialError(ValueError):
    """Malformed monomial input or mismatched ambient rings."""


def degree(a: Sequence[int]) -> int:
    return sum(a)


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Sequence[int], b: Sequence[int]) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def add(a: Sequence[int], b: Sequence[int]) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators.

    The zero ideal has no generators; the unit ideal is generated by the
    zero exponent vector.  Build instances with :func:`minimalize` or
    :meth:`from_generators` so the antichain invariant holds.
    """

    nvars: int
    gens: tuple[Exponent, ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], nvars: int | None = None) -> MonomialIdeal:
        return minimalize(gens, nvars)

    @classmethod
    def unit(cls, nvars: int) -> MonomialIdeal:
        return cls(nvars, ((0,) * nvars,))

    @classmethod
    def zero(cls, nvars: int) -> MonomialIdeal:
        return cls(nvars, ())

    @classmethod
    def maximal(cls, nvars: int) -> MonomialIdeal:
        """The irrelevant ideal (x_0, ..., x_r)."""
        return cls(nvars, tuple(sorted(_unit_vector(nvars, j) for j in range(nvars))))

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(degree(g) == 0 for g in self.gens)

    def contains(self, a: Sequence[int]) -> bool:
        return any(divides(g, a) for g in self.gens)

    def is_subset(self, other: MonomialIdeal) -> bool:
        return all(other.contains(g) for g in self.gens)

    def is_equigenerated(self) -> bool:
        return len({degree(g) for g in self.gens}) <= 1

    def generator_degree(self) -> int:
        degs = {degree(g) for g in self.gens}
        if len(degs) != 1:
            raise MonomialError("ideal is not generated in a single degree")
        return degs.pop()

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)


def _unit_vector(n: int, j: int) -> Exponent:
    return tuple(1 if i == j else 0 for i in range(n))


def minimalize(gens: Iterable[Sequence[int]], nvars: int | None = None) -> MonomialIdeal:
    """Reduce a generating set to its divisibility antichain."""
    vecs = {tuple(int(e) for e in g) for g in gens}
    lengths = {len(v) for v in vecs}
    if nvars is not None:
        lengths.add(nvars)
    if len(lengths) > 1:
        raise MonomialError(f"exponent vectors of mixed lengths {sorted(lengths)}")
    if not lengths:
        raise MonomialError("cannot infer the number of variables of an empty ideal")
    n = lengths.pop()
    if any(e < 0 for v in vecs for e in v):
        raise MonomialError("negative exponent")
    # sorting by degree means a divisor is always seen before its multiples
    kept: list[Exponent] = []
    for v in sorted(vecs, key=lambda v: (degree(v), v)):
        if not any(divides(g, v) for g in kept):
            kept.append(v)
    return MonomialIdeal(n, tuple(sorted(kept)))


def _check_same_ring(I: MonomialIdeal, J: MonomialIdeal) -> None:
    if I.nvars != J.nvars:
        raise MonomialError(f"ambient mismatch: {I.nvars} vs {J.nvars} variables")


def ideal_product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(I, J)
    return minimalize((add(a, b) for a in I.gens for b in J.gens), I.nvars)


def ideal_power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    if n < 0:
        raise MonomialError("negative power")
    result = MonomialIdeal.unit(I.nvars)
    for _ in range(n):
        result = ideal_product(result, I)
    return result


def ideal_intersection(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _check_same_ring(I, J)
    return minimalize((lcm(a, b) for a in I.gens for b in J.gens), I.nvars)


def saturate_by_variable(I: MonomialIdeal, j: int) -> MonomialIdeal:
    """(I : x_j^oo), obtained by zeroing the x_j exponent of every generator."""
    if not 0 <= j < I.nvars:
        raise MonomialError(f"variable index {j} out of range for {I.nvars} variables")
    return minimalize((tuple(0 if i == j else e for i, e in enumerate(g)) for g in I.gens), I.nvars)


def saturate_irrelevant(I: MonomialIdeal) -> MonomialIdeal:
    """(I : m^oo) as the intersection of the variable colons."""
    if I.is_zero():
        return I
    result = saturate_by_variable(I, 0)
    for j in range(1, I.nvars):
        result = ideal_intersection(result, saturate_by_variable(I, j))
    return result


def monomials_of_degree(nvars: int, D: int) -> Iterable[Exponent]:
    """All exponent vectors of total degree D, via stars and bars."""
    if D < 0:
        return
    if nvars == 0:
        if D == 0:
            yield ()
        return
    for bars in itertools.combinations(range(D + nvars - 1), nvars - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(D + nvars - 2 - prev)
        yield tuple(out)


def count_monomials(nvars: int, D: int) -> int:
    if D < 0:
        return 0
    return math.comb(D + nvars - 1, nvars - 1)


def graded_piece_dimension(I: MonomialIdeal, D: int) -> int:
    """dim_k [I]_D by inclusion-exclusion over lcms of generator subsets.

    Subsets are folded into a signed multiset of lcms, so subsets with the
    same lcm are counted once and lcms of degree above D are dropped.
    """
    n = I.nvars
    terms: dict[Exponent, int] = {}
    for g in I.gens:
        if degree(g) > D:
            continue
        update: dict[Exponent, int] = {g: 1}
        for l, c in terms.items():
            m = lcm(l, g)
            if degree(m) <= D:
                update[m] = update.get(m, 0) - c
        for m, c in update.items():
            terms[m] = terms.get(m, 0) + c
    return sum(c * count_monomials(n, D - degree(m)) for m, c in terms.items() if c)


def graded_piece_dimension_enumerated(I: MonomialIdeal, D: int) -> int:
    """dim_k [I]_D by listing every degree-D monomial and testing membership."""
    return sum(1 for a in monomials_of_degree(I.nvars, D) if I.contains(a))


def dehomogenize(I: MonomialIdeal, j: int) -> MonomialIdeal:
    """Set x_j = 1: drop coordinate j from every generator."""
    if not 0 <= j < I.nvars:
        raise MonomialError(f"variable index {j} out of range for {I.nvars} variables")
    return minimalize((g[:j] + g[j + 1:] for g in I.gens), I.nvars - 1)


def standard_monomial_count(K: MonomialIdeal) -> int | float:
    """Number of monomials outside K, or INFINITE when K is not cofinite."""
    if K.is_zero():
        return INFINITE if K.nvars > 0 else 1
    if K.is_unit():
        return 0
    bounds = []
    for i in range(K.nvars):
        pure = [g[i] for g in K.gens if all(e == 0 for t, e in enumerate(g) if t != i)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    return sum(1 for a in itertools.product(*(range(b) for b in bounds)) if not K.contains(a))


def local_colength(I: MonomialIdeal, j: int) -> int | float:
    """Length of R_p / I R_p at the coordinate point where only x_j is nonzero.

    Monomial ideals only have monomial associated primes, all of which pass
    through the origin of the chart x_j = 1, so the local length equals the
    number of standard monomials of the dehomogenized ideal when it is
    cofinite and is infinite otherwise.
    """
    return standard_monomial_count(dehomogenize(I, j))


_TOKEN = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*(\d+))?\s*$")
_INDEXED = re.compile(r"^x(\d+)$")


def parse_monomial(text: str, variables: Sequence[str] | None = None, nvars: int | None = None) -> Exponent:
    """Parse ``"x0^2*x2"`` or, given ``variables``, ``"x^2*z"``.

    "1" is the unit monomial.  Without a variable list the names must be
    x0, x1, ... and ``nvars`` fixes the vector length.
    """
    if variables is not None:
        nvars = len(variables)
        index = {name: i for i, name in enumerate(variables)}
    elif nvars is None:
        raise MonomialError("need a variable list or a variable count")
    else:
        index = None
    exps = [0] * nvars
    body = text.strip()
    if not body:
        raise MonomialError("empty monomial")
    if body == "1":
        return tuple(exps)
    for factor in body.split("*"):
        m = _TOKEN.match(factor)
        if not m:
            raise MonomialError(f"cannot parse factor {factor!r} in {text!r}")
        name, power = m.group(1), m.group(2)
        if index is not None:
            if name not in index:
                raise MonomialError(f"unknown variable {name!r} in {text!r}")
            i = index[name]
        else:
            im = _INDEXED.match(name)
            if not im or int(im.group(1)) >= nvars:
                raise MonomialError(f"unknown variable {name!r} in {text!r}")
            i = int(im.group(1))
        exps[i] += int(power) if power is not None else 1
    return tuple(exps)


def format_monomial(a: Sequence[int], variables: Sequence[str] | None = None) -> str:
    names = variables if variables is not None else [f"x{i}" for i in range(len(a))]
    parts = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, a) if e]
    return "*".join(parts) if parts else "1"


def parse_ideal(gens: Iterable[str], variables: Sequence[str]) -> MonomialIdeal:
    return minimalize((parse_monomial(g, variables) for g in gens), len(variables))
