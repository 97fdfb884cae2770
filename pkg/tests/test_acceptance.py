"""Acceptance suite: every criterion at its stated range and tolerance.

All comparisons are exact (integers and rationals); "zero violations" means
literally zero. The criteria run at desk scale: the largest pair sweeps
cover 10^8 pairs, orbit checks cover seeds to 10^5, and the map plumbing is
validated to 10^6.
"""

from contextlib import contextmanager
from fractions import Fraction

import conftest

from collatzlab.cli import main
from collatzlab.collatz import (
    accel_T,
    collatz_C,
    consistency_sweep,
    stopping_time,
    stopping_times_upto,
)
from collatzlab.framework import ConditionId, ConditionParams, LambdaSpec, lhs
from collatzlab.verifier import (
    RangeSpec,
    condition_coverage,
    cross_check_simplified,
    m_bound_sweep,
    orbit_decay_sweep,
    verify_lemmas,
    verify_pseudocontraction,
)
from collatzlab.weights import weight_vector

LAM0 = LambdaSpec.const(0)
LAM1 = LambdaSpec.const(1)
A_HALF = Fraction(1, 2)
REMARK = ConditionParams(LAM0, A_HALF, Fraction(2), Fraction(2))


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        conftest.record_criterion(name, False)
        raise
    conftest.record_criterion(name, True)


def test_contraction_sweep_at_ten_thousand():
    with criterion("contraction sweep: lhs <= 0 on all 10^8 pairs, exact"):
        report = verify_pseudocontraction(RangeSpec.square(10_000), bounds=False)
        assert report.pairs_checked == 10**8
        assert report.violations_total == 0


def test_closed_form_identity_to_two_thousand():
    with criterion("closed forms == direct six-term form on all pairs <= 2000"):
        report = cross_check_simplified(RangeSpec.square(2000))
        assert report.pairs_checked == 2000 * 2000
        assert report.violations_total == 0


def test_sharpened_bounds_to_two_thousand():
    with criterion("per-case maxima respect the sharpened bounds; 0 is attained"):
        report = verify_pseudocontraction(RangeSpec.square(2000), bounds=True)
        assert report.violations_total == 0
        expected_max_bounds = {
            "even-even": -1,
            "even-odd": -1,
            "odd-even": -1,
            "even-1": -1,
            "odd-1": -4,
            "odd-odd:low-band": -8,
            "odd-odd:high-band": -8,
            "1-1": 0,
            "1-even": 0,
            "1-odd": 0,
            "odd-odd:low-deep": 0,
            "odd-odd:high-deep": 0,
            "odd-odd:diagonal": 0,
        }
        for key, bound in expected_max_bounds.items():
            tal = report.per_case[key]
            assert tal.pairs > 0, f"cell {key} uninhabited"
            assert tal.max_lhs <= bound, (key, tal.max_lhs, bound)
        # tightness where the closed forms reach 0
        for pair in ((1, 1), (1, 2), (1, 3)):
            assert lhs(weight_vector, accel_T, *pair) == 0
        for key in ("1-1", "1-even", "1-odd"):
            assert report.per_case[key].max_lhs == 0, key


def test_triangle_gap_lemma_to_two_hundred():
    with criterion("triangle-gap lemma: gap >= 0 on all triples <= 200, "
                   "9 thetas"):
        thetas = [-3, Fraction(-5, 2), -2, -1, 0, Fraction(1, 2), 1, 2, 3]
        report = verify_lemmas(RangeSpec.square(200), thetas, [])
        assert report.violations_total == 0
        assert report.pairs_checked == 9 * 200**3


def test_blend_lemma_to_five_hundred():
    with criterion("blend lemma: identity exact and blended form <= 0, "
                   "pairs <= 500, 5 lambdas"):
        lambdas = [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]
        report = verify_lemmas(RangeSpec.square(500), [], lambdas)
        assert report.violations_total == 0
        assert report.pairs_checked == 2 * 5 * 500**2


def test_flat_blend_coverage_reproduction():
    with criterion("flat-blend coverage: listed cells hold with the four "
                   "tuples, B-sums 6/4/3/2, ratio 1/2; (3,5) fails; strict "
                   "blend differs on a mixed-parity cell"):
        flat = condition_coverage(RangeSpec.square(999), REMARK,
                                  ConditionId(3, 5))
        for key in ("1-1", "1-even", "1-odd", "even-1", "even-even",
                    "even-odd", "odd-1"):
            cell = flat.cells[key]
            assert cell.fails == 0, key
        ge = flat.cells["odd-odd:x>=y"]
        assert ge.pairs == 499 * 500 // 2  # odd pairs 3 <= y <= x <= 999
        assert ge.fails == 0
        assert sorted(ge.weight_tuples) == [
            (2, 0, 0, -1, 0, 0), (2, 1, -1, -1, 0, 0),
            (2, 2, -2, -2, 0, 2), (2, 2, -2, -1, 0, 0)]
        assert ge.b_sums == {Fraction(2), Fraction(3), Fraction(4), Fraction(6)}
        assert ge.ratios == {A_HALF}
        assert flat.fails_total > 0
        lt = flat.cells["odd-odd:x<y"]
        assert lt.example_fail == (3, 5)
        assert flat.m_violations == 0

        strict = condition_coverage(
            RangeSpec.square(999),
            ConditionParams(LAM1, A_HALF, Fraction(2), Fraction(2)),
            ConditionId(3, 5))
        # the strict reading flips even-even onto the mirrored branch and
        # shifts the first-branch ratio on the mixed-parity 1-even cell
        assert strict.cells["even-even"].holds_first == 0
        assert strict.cells["even-even"].holds_mirrored > 0
        assert flat.cells["1-even"].ratios == {A_HALF}
        assert strict.cells["1-even"].ratios == {Fraction(0)}


def test_weight_magnitude_bound_at_ten_thousand():
    with criterion("all six weights within |w| <= 2 on all 10^8 pairs"):
        report = m_bound_sweep(RangeSpec.square(10_000), Fraction(2))
        assert report.pairs_checked == 10**8
        assert report.violations_total == 0


def test_orbit_decay_to_one_hundred_thousand():
    with criterion("orbit decay: no squared-step growth past A=1/2 where the "
                   "premise holds, seeds <= 10^5"):
        params = ConditionParams(LAM0, A_HALF)
        report = orbit_decay_sweep(1, 100_000, params)
        assert report.violations_total == 0
        assert report.per_case["premise-held"].pairs > 0


def test_map_plumbing_to_one_million():
    with criterion("map plumbing: c(1)=3, t(3)=5, two-step identity to 10^6, "
                   "all seeds reach 1, consistency to 10^5"):
        assert stopping_time("C", 1).steps == 3
        assert stopping_time("T", 3).steps == 5
        for x in range(3, 1_000_001, 2):
            assert collatz_C(collatz_C(x)) == accel_T(x)
        for x in range(2, 1_000_001, 2):
            assert accel_T(x) == collatz_C(x)
        cap = 100_000
        c_steps = stopping_times_upto("C", 1_000_000, cap=cap)
        t_steps = stopping_times_upto("T", 1_000_000, cap=cap)
        for seed in range(1, 1_000_001):
            assert c_steps[seed] is not None, f"C-orbit of {seed} capped"
            assert t_steps[seed] is not None, f"T-orbit of {seed} capped"
            assert t_steps[seed] <= c_steps[seed], seed
        assert consistency_sweep(100_000) == []


def test_report_determinism(tmp_path):
    with criterion("byte-identical JSON reports across repeated runs and "
                   "parallelism degrees"):
        paths = [tmp_path / f"r{i}.json" for i in range(4)]
        base = ["verify", "--max", "400", "--mode", "bounds", "--format",
                "json"]
        assert main(base + ["--jobs", "1", "--output", str(paths[0])]) == 0
        assert main(base + ["--jobs", "2", "--output", str(paths[1])]) == 0
        assert main(base + ["--jobs", "2", "--output", str(paths[2])]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes() == \
            paths[2].read_bytes()
        cond = ["conditions", "--lambda", "1", "--A", "1/2", "--max", "80",
                "--format", "json"]
        assert main(cond + ["--output", str(paths[3])]) == 0
        second = tmp_path / "r4.json"
        assert main(cond + ["--output", str(second)]) == 0
        assert paths[3].read_bytes() == second.read_bytes()
