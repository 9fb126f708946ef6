import numpy as np
import pytest

from belldistil import (
    BACKUP,
    DROP_ONE,
    NO_BACKUP,
    IterationPolicy,
    ResourceCapError,
    expected_fidelity_exact,
    expected_fidelity_mc,
    fully_successful_fidelity,
    iterate_map,
    run_trajectory,
    sweep_over_fidelity,
    sweep_over_n,
    werner,
)
from belldistil import _trajectory_py
from belldistil._kernels import IMPL, simulate
from belldistil.iterative_scheme import _depth_tables, depth_cap

from enumeration import enumerate_expectation

WERNER_075 = werner(0.75)
F1 = 41 / 52
E3 = 7 / 9
E4 = 4303 / 5616
E5 = 1063 / 1296


class TestRunTrajectory:
    def test_single_pair_is_untouched(self):
        rng = np.random.default_rng(0)
        assert run_trajectory(1, WERNER_075, BACKUP, rng) == 0.75

    def test_two_pairs_stop_immediately(self):
        rng = np.random.default_rng(0)
        assert all(
            run_trajectory(2, WERNER_075, BACKUP, rng) == 0.75 for _ in range(50)
        )

    def test_three_pairs_two_outcomes(self):
        rng = np.random.default_rng(1)
        outcomes = {run_trajectory(3, WERNER_075, BACKUP, rng) for _ in range(500)}
        assert sorted(outcomes) == pytest.approx([0.75, F1])

    def test_three_pair_success_frequency(self):
        rng = np.random.default_rng(2)
        runs = 20_000
        wins = sum(
            run_trajectory(3, WERNER_075, BACKUP, rng) > 0.78 for _ in range(runs)
        )
        assert wins / runs == pytest.approx(13 / 18, abs=0.01)

    def test_rejects_empty_sample(self):
        with pytest.raises(ValueError):
            run_trajectory(0, WERNER_075, BACKUP, np.random.default_rng(0))

    def test_output_bounds(self):
        rng = np.random.default_rng(3)
        for n in (3, 5, 8, 13):
            for _ in range(200):
                f = run_trajectory(n, WERNER_075, BACKUP, rng)
                assert 0.5 <= f <= 1.0


class TestExpectedFidelityExact:
    def test_frozen_werner_values(self):
        assert expected_fidelity_exact(3, WERNER_075, BACKUP) == pytest.approx(E3, abs=1e-14)
        assert expected_fidelity_exact(4, WERNER_075, BACKUP) == pytest.approx(E4, abs=1e-14)
        assert expected_fidelity_exact(5, WERNER_075, BACKUP) == pytest.approx(E5, abs=1e-14)

    def test_matches_enumeration_all_policies(self):
        for policy in (BACKUP, NO_BACKUP, DROP_ONE):
            for n in range(1, 9):
                expected, _ = enumerate_expectation(n, WERNER_075, policy)
                assert expected_fidelity_exact(n, WERNER_075, policy) == pytest.approx(
                    expected, abs=1e-12
                ), (policy, n)

    def test_matches_enumeration_off_werner(self):
        from belldistil import BellDiagonalState

        s = BellDiagonalState(0.62, 0.2, 0.1, 0.08)
        for n in (5, 7, 8):
            expected, _ = enumerate_expectation(n, s, BACKUP)
            assert expected_fidelity_exact(n, s, BACKUP) == pytest.approx(
                expected, abs=1e-12
            )

    def test_resource_cap(self):
        with pytest.raises(ResourceCapError, match="expected_fidelity_mc"):
            expected_fidelity_exact(4097, WERNER_075, BACKUP)
        # the cap itself is accepted
        assert 0.5 <= expected_fidelity_exact(4096, WERNER_075, BACKUP) <= 1.0

    def test_backup_dominance(self):
        for n in range(3, 13):
            for a in (0.55, 0.6, 0.75, 0.9, 0.95):
                s = werner(a)
                assert (
                    expected_fidelity_exact(n, s, BACKUP)
                    >= expected_fidelity_exact(n, s, NO_BACKUP) - 1e-12
                )

    def test_odd_over_even_zigzag(self):
        e4, e5, e6 = (
            expected_fidelity_exact(n, WERNER_075, BACKUP) for n in (4, 5, 6)
        )
        assert e5 > e4
        assert e5 > e6

    def test_drop_one_matches_odd_case(self):
        for n in (4, 6, 8, 10, 12):
            dropped = expected_fidelity_exact(n, WERNER_075, DROP_ONE)
            odd = expected_fidelity_exact(n - 1, WERNER_075, BACKUP)
            kept = expected_fidelity_exact(n, WERNER_075, BACKUP)
            assert dropped == pytest.approx(odd, abs=1e-12)
            assert dropped >= kept - 1e-12

    def test_depth_bound(self):
        for n in (2, 3, 5, 8, 13, 21, 32):
            _, deepest = enumerate_expectation(n, WERNER_075, BACKUP)
            assert deepest <= depth_cap(n)

    def test_alternative_stop_reading_shifts_the_break_even(self):
        # Keeping two backup-less pairs in play makes N=4 a gamble: the
        # break-even input fidelity rises from about 0.56 to about 0.65.
        relaxed = IterationPolicy(stop_at_two_without_backup=False)
        lo, hi = 0.505, 0.995
        for policy, expected_root in ((BACKUP, 0.5607), (relaxed, 0.6514)):
            a, b = lo, hi
            for _ in range(40):
                mid = (a + b) / 2
                if expected_fidelity_exact(4, werner(mid), policy) / mid > 1:
                    b = mid
                else:
                    a = mid
            assert (a + b) / 2 == pytest.approx(expected_root, abs=2e-3)


class TestExpectedFidelityMC:
    def test_single_trial(self):
        stats = expected_fidelity_mc(5, WERNER_075, BACKUP, trials=1, seed=9)
        assert stats.std_error == 0.0
        assert stats.mean_fidelity in (
            pytest.approx(0.75),
            pytest.approx(F1),
            pytest.approx(iterate_map(WERNER_075, 2).a),
        )

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            expected_fidelity_mc(5, WERNER_075, BACKUP, trials=0, seed=0)

    def test_agrees_with_exact(self):
        stats = expected_fidelity_mc(5, WERNER_075, BACKUP, trials=100_000, seed=42)
        assert abs(stats.mean_fidelity - E5) <= 3 * stats.std_error

    def test_same_seed_bitwise_reproducible(self):
        a = expected_fidelity_mc(7, WERNER_075, BACKUP, trials=20_000, seed=123)
        b = expected_fidelity_mc(7, WERNER_075, BACKUP, trials=20_000, seed=123)
        assert a == b

    def test_worker_count_does_not_change_bits(self):
        a = expected_fidelity_mc(9, WERNER_075, BACKUP, trials=50_000, seed=5)
        b = expected_fidelity_mc(9, WERNER_075, BACKUP, trials=50_000, seed=5, workers=4)
        assert a == b

    def test_failure_rate_counts_floor_runs(self):
        stats = expected_fidelity_mc(4, WERNER_075, NO_BACKUP, trials=50_000, seed=17)
        # a run fails only when both first-round steps fail: (5/18)^2
        assert stats.failure_rate == pytest.approx((5 / 18) ** 2, abs=0.005)

    def test_kernel_twins_are_bit_identical(self):
        n = 7
        fid, psucc = _depth_tables(WERNER_075, n)
        u = np.random.Generator(np.random.Philox(key=99)).random((5_000, n))
        results = []
        for impl in (simulate, _trajectory_py.simulate):
            out = np.empty(len(u))
            failed = np.zeros(len(u), dtype=np.uint8)
            impl(u, n, psucc, fid, True, True, 0.5, out, failed)
            results.append((out.copy(), failed.copy()))
        assert np.array_equal(results[0][0], results[1][0])
        assert np.array_equal(results[0][1], results[1][1])

    def test_compiled_kernel_is_active(self):
        # the build produces the extension; if this fails the fallback is
        # silently in use and the benchmark comparison is meaningless
        assert IMPL == "compiled"


class TestSweeps:
    def test_sweep_over_n_rows(self):
        rows = sweep_over_n(WERNER_075, [5], BACKUP)
        assert rows[0][0] == 5
        assert rows[0][1] == pytest.approx(E5, abs=1e-14)

    def test_fully_successful_reference(self):
        assert fully_successful_fidelity(WERNER_075, 4) == pytest.approx(
            841 / 932, abs=1e-12
        )
        rows = sweep_over_n(WERNER_075, range(3, 21), BACKUP)
        for _, value, reference in rows:
            assert reference >= value - 1e-12

    def test_sweep_over_fidelity_rows(self):
        rows = sweep_over_fidelity(4, [0.55, 0.75, 0.95], BACKUP)
        assert [r[0] for r in rows] == [0.55, 0.75, 0.95]
        for a0, value, ratio in rows:
            assert ratio == pytest.approx(value / a0, abs=1e-15)
        assert rows[2][2] > 1  # N=4 improves well above the break-even point
