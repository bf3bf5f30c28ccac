import numpy as np
import pytest
from scipy import integrate

from atm_bss import SignalBatch, TooFewSamples, ZeroVariance, entropy, fit_score_model, score
from atm_bss.scores import silverman_bandwidth

SEED = 7
HALF_LOG_2PIE = 0.5 * np.log(2 * np.pi * np.e)


@pytest.fixture(scope="module")
def normal():
    return np.random.default_rng(SEED).standard_normal(5000)


@pytest.fixture(scope="module")
def uniform():
    return np.random.default_rng(SEED).uniform(0, 1, 5000)


def _model(a, b=None):
    return fit_score_model(SignalBatch(a, a if b is None else b))


def test_silverman_bandwidth(normal):
    m = _model(normal)
    expected = 1.06 * normal.std(ddof=1) * 5000 ** (-0.2)
    assert m.bandwidths[0] == pytest.approx(expected, rel=1e-14)
    assert m.bandwidths[0] == pytest.approx(0.192, abs=0.005)


def test_zero_variance():
    with pytest.raises(ZeroVariance):
        _model(np.ones(100), np.linspace(0, 1, 100))


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        _model(np.linspace(0, 1, 10))


def test_normal_score_close_to_identity(normal):
    assert score(_model(normal), 1, 0.5) == pytest.approx(0.5, abs=0.15)


def test_normal_score_tracks_smoothed_truth(normal):
    # the KDE of N(0,1) data estimates N(0, 1 + h^2), whose score is u / (1 + h^2)
    m = _model(normal)
    h = m.bandwidths[0]
    u = np.linspace(-1.5, 1.5, 7)
    np.testing.assert_allclose(score(m, 1, u), u / (1 + h * h), atol=0.25)


def test_symmetric_sample_score_vanishes_at_centre(normal):
    sym = np.concatenate([normal[:2500], -normal[:2500]])
    assert abs(score(_model(sym), 1, 0.0)) < 0.05


@pytest.mark.xfail(strict=True, reason=(
    "single-draw claim; the Silverman-bandwidth score of uniform data has "
    "standard deviation ~0.4 at u=0.5 for n=5000"))
def test_uniform_interior_score_single_draw(uniform):
    assert abs(score(_model(uniform), 1, 0.5)) < 0.3


def test_uniform_interior_score_unbiased():
    vals = [score(_model(np.random.default_rng(s).uniform(0, 1, 5000)), 1, 0.5) for s in range(40)]
    assert abs(np.mean(vals)) < 0.3


def test_score_matches_log_density_derivative(normal):
    ch = _model(normal).channels[0]
    u, h = 0.3, 1e-5
    fd = -(np.log(ch.density(u + h)) - np.log(ch.density(u - h))) / (2 * h)
    assert ch.score(u)[0] == pytest.approx(fd[0], rel=1e-6)


def test_score_far_tail_is_floored(normal):
    assert score(_model(normal), 1, 1e3) == 0.0


def test_score_permutation_invariant(normal, rng):
    a = score(_model(normal), 1, 0.7)
    b = score(_model(rng.permutation(normal)), 1, 0.7)
    assert a == pytest.approx(b, rel=1e-12)


def test_score_shift_equivariant(normal):
    c = 3.25
    u = np.array([-1.0, 0.0, 0.4, 2.0])
    np.testing.assert_allclose(score(_model(normal + c), 1, u + c), score(_model(normal), 1, u),
                               rtol=1e-9, atol=1e-12)


def test_density_integrates_to_one(uniform):
    ch = _model(uniform).channels[0]
    h = ch.bandwidth
    total, _ = integrate.quad(lambda t: ch.density(t)[0], uniform.min() - 5 * h,
                              uniform.max() + 5 * h, limit=200)
    assert total == pytest.approx(1.0, abs=1e-3)


def test_entropy_uniform(uniform):
    assert entropy(uniform) == pytest.approx(0.0, abs=0.05)


def test_entropy_normal(normal):
    assert HALF_LOG_2PIE == pytest.approx(1.4189, abs=1e-4)
    assert entropy(normal) == pytest.approx(HALF_LOG_2PIE, abs=0.05)


def test_entropy_scaling_law(normal):
    c = 2.5
    assert entropy(c * normal) - entropy(normal) == pytest.approx(np.log(c), abs=0.05)


def test_entropy_translation_invariant(normal):
    assert entropy(normal + 10.0) == pytest.approx(entropy(normal), abs=1e-12)


def test_entropy_too_few_samples():
    with pytest.raises(TooFewSamples):
        entropy(np.arange(10.0))


def test_entropy_matches_direct_formula():
    x = np.random.default_rng(1).uniform(0, 1, 49)
    xs, n, m = np.sort(x), 49, 7
    direct = np.mean([np.log(n / (2 * m) * (xs[min(i + m, n - 1)] - xs[max(i - m, 0)]))
                      for i in range(n)])
    assert entropy(x) == pytest.approx(direct, rel=1e-13)
    assert silverman_bandwidth(x) > 0
