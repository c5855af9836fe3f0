"""Acceptance suite: twelve criteria, exact equality throughout.

Each test carries a ``criterion`` marker; the summary at the end of the
run prints one PASS/FAIL line per criterion.
"""

import functools
import io
import itertools
import json
import math
import random
import time
from fractions import Fraction

import pytest

from nmv import cli
from nmv.closed_formulas import (
    GORENSTEIN_HT3,
    PERFECT_HT2,
    FamilyInput,
    gorenstein_ht3_table,
    mprimary_table,
    perfect_ht2_table,
)
from nmv.engine import (
    base_locus,
    base_locus_mixed_multiplicities,
    generic_finiteness_check,
    graph_multidegrees,
    monomial_multidegrees,
    projected_polytopes,
    upper_bound_check,
)
from nmv.linear_multiview import (
    CameraConfig,
    coordinate_alignment_export,
    coordinate_camera,
    multidegree_support,
)
from nmv.maps import MapSpec, bound_product
from nmv.oracle import (
    FiberSampler,
    birationality_defect,
    default_grid,
    saturated_fiber_mixed_multiplicities,
)
from nmv.polyhedral import (
    PolytopeMultiset,
    minkowski_combination,
    minkowski_sum,
    mixed_volume,
    volume,
)
from specgen import random_full_polytope, random_polytope, random_specs

XYZ = ["x", "y", "z"]
XYZW = ["x", "y", "z", "w"]

SQUARES = {"variables": XYZ, "ideals": [["x^2", "y^2", "z^2"]]}
QUADRICS = {"variables": XYZ, "ideals": [["x*y", "x*z", "y*z"]]}
P2_TWO = {"variables": XYZ, "ideals": [["x", "y", "z"], ["x^3", "y*z^2", "x*y^2"]]}
P3_TWO = {"variables": XYZW, "ideals": [["x", "y", "z", "w"], ["x*y^2", "x*w^2", "y*z*w", "z^2*w"]]}


def as_spec(problem):
    return MapSpec.parse(problem["variables"], problem["ideals"])


EXAMPLE_SPECS = [as_spec(p) for p in (SQUARES, QUADRICS, P2_TWO, P3_TWO)]

# criterion 4: zero-dimensional base locus, generically finite
FINITE_SPECS = random_specs(4, 20, kind="finite", max_r=3, max_p=2, max_delta=3, generically_finite=True)
# criterion 5: any base locus
ANY_SPECS = random_specs(5, 50, kind="any", max_r=3, max_p=2, max_delta=3)
# criterion 6: every ideal contains a power of every variable
MPRIMARY_SPECS = random_specs(6, 10, kind="m-primary", max_r=3, max_p=2, max_delta=3)

ALIGNED_CONFIGS = [
    # two cameras in P^3: ideals (x, y, z) and (x, y, w)
    CameraConfig(3, (coordinate_camera(3, (0, 1, 2)), coordinate_camera(3, (0, 1, 3)))),
    # three cameras in P^3
    CameraConfig(3, tuple(coordinate_camera(3, v) for v in ((0, 1, 2), (0, 1, 3), (0, 2, 3)))),
    CameraConfig(2, (coordinate_camera(2, (0, 1)), coordinate_camera(2, (1, 2)))),
    CameraConfig(2, tuple(coordinate_camera(2, v) for v in ((0, 1), (1, 2), (0, 2)))),
    CameraConfig(2, (coordinate_camera(2, (0, 1, 2)), coordinate_camera(2, (0, 2)))),
    CameraConfig(3, tuple(coordinate_camera(3, v) for v in ((0, 1, 2), (1, 2, 3), (0, 1, 2, 3)))),
]


@functools.cache
def mv_table(spec):
    return monomial_multidegrees(spec).entries


@functools.cache
def oracle_table(spec):
    return saturated_fiber_mixed_multiplicities(spec).entries


def run_cli(tmp_path, problem, *extra):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    out = io.StringIO()
    start = time.perf_counter()
    code = cli.run([*extra[:1], str(path), *extra[1:]], out)
    elapsed = time.perf_counter() - start
    report = json.loads(out.getvalue()) if out.getvalue() else None
    return code, report, elapsed


def entries(report):
    return {tuple(e["type"]): e["value"] for e in report["entries"]}


def polytopes(problem):
    A, B = projected_polytopes(as_spec(problem))
    return A, B


@pytest.mark.criterion(1, "single-factor examples in P^2: 4 and 1, both methods, < 1 s each")
def test_criterion_01_single_factor_examples(tmp_path):
    for problem, expected in ((SQUARES, 4), (QUADRICS, 1)):
        code, report, elapsed = run_cli(tmp_path, problem, "monomial", "--method", "both")
        assert code == 0
        assert entries(report) == {(2,): expected}
        assert report["consistent"] is True
        assert entries(report["tables"]["oracle"]) == entries(report["tables"]["mixed-volume"])
        assert elapsed < 1.0, f"{elapsed:.2f} s"


@pytest.mark.criterion(2, "two-factor example in P^2: {1, 3, 4} and the intermediate volumes, < 1 s")
def test_criterion_02_two_factor_plane(tmp_path):
    code, report, elapsed = run_cli(tmp_path, P2_TWO, "monomial", "--method", "both")
    assert code == 0 and report["consistent"] is True
    assert entries(report) == {(2, 0): 1, (1, 1): 3, (0, 2): 4}
    assert elapsed < 1.0, f"{elapsed:.2f} s"
    A, B = polytopes(P2_TWO)
    assert volume(A) == Fraction(1, 2)
    assert volume(B) == 2
    assert volume(minkowski_sum(A, B)) == Fraction(11, 2)


@pytest.mark.criterion(3, "two-factor example in P^3: {1, 3, 5, 2} by both methods, Vol(2A+B) recomputed, oracle < 30 s")
def test_criterion_03_two_factor_space():
    spec = as_spec(P3_TWO)
    start = time.perf_counter()
    oracle = saturated_fiber_mixed_multiplicities(spec).entries
    elapsed = time.perf_counter() - start
    expected = {(3, 0): 1, (2, 1): 3, (1, 2): 5, (0, 3): 2}
    assert oracle == expected
    assert mv_table(spec) == expected
    assert elapsed < 30.0, f"{elapsed:.2f} s"
    A, B = polytopes(P3_TWO)
    assert volume(A) == Fraction(1, 6)
    assert volume(B) == Fraction(1, 3)
    assert volume(minkowski_sum(A, B)) == Fraction(9, 2)
    # Vol(l A + m B) = sum over d of MV(d) / d! * l^d0 * m^d1
    two_a_b = volume(minkowski_combination([A, B], [2, 1]))
    expansion = sum(
        Fraction(v, math.factorial(d[0]) * math.factorial(d[1])) * 2 ** d[0] for d, v in expected.items()
    )
    assert two_a_b == expansion == Fraction(38, 3)


@pytest.mark.criterion(4, "degree formula on 20 random specs with finite base locus, < 2 min")
def test_criterion_04_degree_formula():
    assert len(FINITE_SPECS) >= 20
    start = time.perf_counter()
    for spec in FINITE_SPECS:
        assert spec.r <= 3 and spec.p <= 2 and max(spec.deltas) <= 3
        assert base_locus(spec).dimension <= 0
        mults = base_locus_mixed_multiplicities(spec)
        table = mv_table(spec)
        for d in spec.types():
            assert bound_product(spec.deltas, d) == table[d] + mults[d], (spec, d)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"{elapsed:.2f} s"


@pytest.mark.criterion(5, "upper bound on 50 random specs")
def test_criterion_05_upper_bound():
    assert len(ANY_SPECS) >= 50
    for spec in ANY_SPECS:
        table = monomial_multidegrees(spec)
        assert upper_bound_check(spec, table), spec


@pytest.mark.criterion(6, "m-primary specs reach the bound exactly")
def test_criterion_06_mprimary():
    assert len(MPRIMARY_SPECS) >= 10
    for spec in MPRIMARY_SPECS:
        for I, delta in zip(spec.ideals, spec.deltas):
            for j in range(spec.nvars):
                assert I.contains(tuple(delta if i == j else 0 for i in range(spec.nvars)))
        assert base_locus(spec).dimension == -1
        assert mv_table(spec) == mprimary_table(spec.r, spec.deltas).entries


@pytest.mark.criterion(7, "oracle equals mixed volume on every spec of criteria 1-6")
def test_criterion_07_oracle_equals_mixed_volume():
    specs = EXAMPLE_SPECS + FINITE_SPECS + ANY_SPECS + MPRIMARY_SPECS
    assert len(specs) >= 84
    for spec in specs:
        assert oracle_table(spec) == mv_table(spec), spec


@pytest.mark.criterion(8, "linear multiview: criterion, mixed volume and oracle coincide in {0, 1}")
def test_criterion_08_linear_multiview():
    assert len(ALIGNED_CONFIGS) >= 5
    assert {cfg.r for cfg in ALIGNED_CONFIGS} == {2, 3}
    for cfg in ALIGNED_CONFIGS:
        support = multidegree_support(cfg).entries
        spec = coordinate_alignment_export(cfg)
        assert spec is not None
        assert set(support.values()) <= {0, 1}
        assert mv_table(spec) == support
        assert oracle_table(spec) == support
        sampler = FiberSampler(spec)
        offsets, width = default_grid(spec)
        points = set()
        for shift in (0, 1):
            points |= set(itertools.product(*(range(o + shift + 1, o + shift + width + 1) for o in offsets)))
        points |= set(itertools.product(range(1, 4), repeat=spec.p))
        for n in sorted(points):
            assert sampler.fiber_dimension(n) == sampler.saturated_dimension(n), (cfg, n)
    two = multidegree_support(ALIGNED_CONFIGS[0]).entries
    assert two == {(3, 0): 0, (2, 1): 1, (1, 2): 1, (0, 3): 0}
    three = multidegree_support(ALIGNED_CONFIGS[1]).entries
    assert three[(1, 1, 1)] == 1 and three[(3, 0, 0)] == 0


@pytest.mark.criterion(9, "closed formulas against monomial computations and hand sums")
def test_criterion_09_closed_formulas():
    quadrics = as_spec(QUADRICS)
    single = perfect_ht2_table(FamilyInput(2, (), PERFECT_HT2, mu=(1, 1))).entries
    assert single == {(2,): 1} == mv_table(quadrics) == oracle_table(quadrics)

    derived = MapSpec.parse(XYZ, [["x", "y", "z"], ["x*y", "x*z", "y*z"]])
    double = perfect_ht2_table(FamilyInput(2, (1,), PERFECT_HT2, mu=(1, 1))).entries
    assert double == {(2, 0): 1, (1, 1): 2, (0, 2): 1} == mv_table(derived) == oracle_table(derived)
    A, B = projected_polytopes(derived)
    assert volume(minkowski_sum(A, B)) - volume(A) - volume(B) == 2

    g1 = gorenstein_ht3_table(FamilyInput(3, (), GORENSTEIN_HT3, mp=4, big_d=1, delta_p=2)).entries
    assert g1 == {(3,): 3}
    g2 = gorenstein_ht3_table(FamilyInput(4, (), GORENSTEIN_HT3, mp=6, big_d=2, delta_p=6)).entries
    assert g2 == {(4,): 176}

    for r, deltas, mp, big_d in [(2, (2,), 4, 1), (3, (1, 3), 6, 2), (4, (2,), 4, 3), (2, (), 2, 1)]:
        inp = FamilyInput(r, deltas, GORENSTEIN_HT3, mp=mp, big_d=big_d, delta_p=big_d * mp // 2)
        table = gorenstein_ht3_table(inp).entries
        ref = mprimary_table(r, deltas + (inp.delta_p,)).entries
        low = [d for d in table if d[-1] <= 2]
        assert low and all(table[d] == ref[d] for d in low)


@pytest.mark.criterion(10, "polyhedral properties on 100 polytopes in R^2 and 30 in R^3")
def test_criterion_10_polyhedral_properties():
    for dim, count in ((2, 100), (3, 30)):
        rng = random.Random(1000 + dim)
        for _ in range(count):
            K = random_full_polytope(rng, dim)
            polys = [random_polytope(rng, dim) for _ in range(dim)]
            extra = random_polytope(rng, dim)
            shift = tuple(rng.randint(-4, 4) for _ in range(dim))

            assert mixed_volume(PolytopeMultiset(((K, dim),))) == math.factorial(dim) * volume(K)
            mv = mixed_volume(PolytopeMultiset.of(*polys))
            assert isinstance(mv, int) and mv >= 0
            for perm in itertools.permutations(polys):
                assert mixed_volume(PolytopeMultiset.of(*perm)) == mv
            summed = mixed_volume(PolytopeMultiset.of(minkowski_sum(polys[0], extra), *polys[1:]))
            assert summed == mv + mixed_volume(PolytopeMultiset.of(extra, *polys[1:]))
            assert volume(K.translate(shift)) == volume(K)
            assert mixed_volume(PolytopeMultiset.of(polys[0].translate(shift), *polys[1:])) == mv


@pytest.mark.criterion(11, "birationality defects: 0, 3, zero on linear configs, nonnegative on random specs")
def test_criterion_11_birationality_defect():
    assert birationality_defect(as_spec(QUADRICS)).entries == {(2,): 0}
    assert birationality_defect(as_spec(SQUARES)).entries == {(2,): 3}
    for cfg in ALIGNED_CONFIGS:
        assert set(birationality_defect(coordinate_alignment_export(cfg)).entries.values()) == {0}
    for spec in FINITE_SPECS + ANY_SPECS + MPRIMARY_SPECS:
        defect = birationality_defect(spec).entries
        assert all(isinstance(v, int) and v >= 0 for v in defect.values()), spec


@pytest.mark.criterion(12, "graph multidegrees: zero slice equals the table, source entry is 1")
def test_criterion_12_graph():
    for spec in EXAMPLE_SPECS:
        graph = graph_multidegrees(spec)
        assert graph.zero_slice() == mv_table(spec)
        assert graph.entries[(spec.r,) + (0,) * spec.p] == 1
    tested = 0
    for spec in FINITE_SPECS[:10] + MPRIMARY_SPECS[:5]:
        assert generic_finiteness_check(spec)
        graph = graph_multidegrees(spec)
        assert graph.entries[(spec.r,) + (0,) * spec.p] == 1
        assert graph.zero_slice() == mv_table(spec)
        tested += 1
    assert tested == 15
