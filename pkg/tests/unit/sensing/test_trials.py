# tests/unit/sensing/test_trials.py
import numpy as np
import pytest

from l1sections.analysis.random_kernel import random_sign_matrix
from l1sections.exceptions import DomainError
from l1sections.sensing.trials import RecoveryCurve, dense_perturbation, draw_signal, recovery_curve, recovery_trial
from l1sections.types import CurvePoint


@pytest.fixture
def baseline_64():
    return random_sign_matrix(32, 64, seed=0)


def test_signal_model(rng):
    x = draw_signal(50, 7, rng)
    support = np.flatnonzero(x)
    assert support.size == 7
    assert np.all((np.abs(x[support]) >= 1.0) & (np.abs(x[support]) <= 2.0))
    assert not np.any(draw_signal(10, 0, rng))


def test_perturbation_has_the_requested_mass(rng):
    e = dense_perturbation(30, 0.01, rng)
    assert np.abs(e).sum() == pytest.approx(0.01)
    assert np.count_nonzero(e) == 30


def test_zero_signal_is_recovered(baseline_64):
    report = recovery_trial(baseline_64, 0, seed=3)
    assert report.success
    assert report.sigma_k == 0.0
    assert report.stability_ratio is None


def test_one_sparse_recovery_on_a_random_baseline(baseline_64):
    for seed in range(100):
        report = recovery_trial(baseline_64, 1, seed=seed)
        assert report.success, f"seed {seed}: relative error {report.relative_error:.3e}"
        assert report.relative_error <= 1e-6


def test_noisy_trial_reports_a_stability_ratio(baseline_64):
    report = recovery_trial(baseline_64, 2, noise_level=0.05, seed=1)
    assert report.sigma_k == pytest.approx(0.05, rel=0.5)
    assert report.stability_ratio is not None and report.stability_ratio >= 0


def test_trial_is_deterministic(baseline_64):
    assert recovery_trial(baseline_64, 3, seed=9, trial=2) == recovery_trial(baseline_64, 3, seed=9, trial=2)


def test_trial_rejects_bad_support_and_noise(baseline_64):
    with pytest.raises(DomainError):
        recovery_trial(baseline_64, 65)
    with pytest.raises(DomainError):
        recovery_trial(baseline_64, 1, noise_level=-0.1)


def test_curve_at_zero_support(baseline_64):
    curve = recovery_curve(baseline_64, [0], trials=3, seed=0)
    assert curve.points == [CurvePoint(s=0, trials=3, successes=3)]
    assert curve.smoothed == [1.0]
    assert curve.largest_reliable() == 0


def test_curve_needs_trials(baseline_64):
    with pytest.raises(DomainError, match="empty experiment"):
        recovery_curve(baseline_64, [1], trials=0)


def test_curve_is_smoothed_and_worker_independent(baseline_64):
    one = recovery_curve(baseline_64, [12, 1, 4, 4], trials=4, seed=2, workers=1)
    many = recovery_curve(baseline_64, [1, 4, 12], trials=4, seed=2, workers=3)
    assert one == many
    assert [p.s for p in one.points] == [1, 4, 12]
    assert all(a >= b - 1e-12 for a, b in zip(one.smoothed, one.smoothed[1:]))


def test_largest_reliable_uses_the_smoothed_rates():
    points = [CurvePoint(s=s, trials=10, successes=c) for s, c in [(1, 10), (2, 9), (3, 10), (4, 2)]]
    curve = RecoveryCurve(points=points, smoothed=[1.0, 0.95, 0.95, 0.2], seed=0)
    assert curve.largest_reliable(0.9) == 3
    assert curve.largest_reliable(0.99) == 1
    assert curve.largest_reliable(1.01) is None
