import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atm_bss import (
    InvalidDistribution,
    MixingParams,
    NonPositiveSample,
    SignalBatch,
    SourceSpec,
    generate_sources,
    mix,
    validate_domain,
)


def test_validate_domain_accepts_positive():
    b = validate_domain(SignalBatch([0.25], [0.5]), 2)
    assert b.positivity


def test_validate_domain_rejects_zero():
    with pytest.raises(NonPositiveSample) as info:
        validate_domain(SignalBatch([0.0], [0.5]), 2)
    assert info.value.index == 0 and info.value.channel == 1


def test_validate_domain_reports_second_channel():
    with pytest.raises(NonPositiveSample) as info:
        validate_domain(SignalBatch([0.3, 0.4, 0.5], [0.5, 0.2, -1.0]), 0.5)
    assert (info.value.index, info.value.channel) == (2, 2)


def test_linear_case_needs_no_positivity():
    validate_domain(SignalBatch([-1.0], [0.5]), 1)


def test_batch_length_mismatch():
    with pytest.raises(ValueError):
        SignalBatch([1.0, 2.0], [1.0])


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.7])
def test_zero_coupling_is_identity(k):
    s = SignalBatch([0.5], [0.7])
    x = mix(s, MixingParams(0.0, 0.0, k))
    assert x == s


def test_mix_linear_hand_value():
    x = mix(SignalBatch([1.0], [1.0]), MixingParams(0.2, 0.3, 1.0))
    np.testing.assert_allclose([x.ch1[0], x.ch2[0]], [1.2, 1.3], rtol=1e-15)


def test_mix_quadratic_hand_value():
    x = mix(SignalBatch([0.25], [0.5]), MixingParams(0.1, 0.2, 2.0))
    np.testing.assert_allclose([x.ch1[0], x.ch2[0]], [0.275, 0.6], rtol=1e-15)


def test_mix_rejects_nonpositive_sources():
    with pytest.raises(NonPositiveSample):
        mix(SignalBatch([0.2, -0.1], [0.5, 0.5]), MixingParams(0.1, 0.1, 2.0))


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    a12=st.floats(0, 0.4),
    a21=st.floats(0, 0.4),
    k=st.sampled_from([0.5, 1.0, 2.0]),
)
def test_observations_dominate_sources(seed, a12, a21, k):
    s = generate_sources(50, SourceSpec(), seed)
    x = mix(s, MixingParams(a12, a21, k))
    assert np.all(x.ch1 >= s.ch1) and np.all(x.ch2 >= s.ch2)
    assert mix(s, MixingParams(a12, a21, k)) == x


def test_generate_support():
    s = generate_sources(4, SourceSpec("uniform", 0.1, 1.0), seed=7)
    assert s.n == 4
    for ch in (s.ch1, s.ch2):
        assert np.all((ch > 0.1) & (ch < 1.0))


def test_generate_deterministic():
    a = generate_sources(2000, SourceSpec(), seed=7)
    b = generate_sources(2000, SourceSpec(), seed=7)
    assert a == b


def test_generate_independent_channels():
    s = generate_sources(2000, SourceSpec(), seed=7)
    assert abs(np.corrcoef(s.ch1, s.ch2)[0, 1]) < 0.05


def test_generate_lognormal_positive():
    s = generate_sources(500, SourceSpec("lognormal", mu=-0.5, sigma=0.3), seed=1)
    assert s.positivity and min(s.ch1.min(), s.ch2.min()) > 0


@pytest.mark.parametrize(
    "spec",
    [SourceSpec("uniform", 0.0, 1.0), SourceSpec("uniform", 0.5, 0.2),
     SourceSpec("lognormal", sigma=0.0), SourceSpec("gaussian")],
)
def test_invalid_distribution(spec):
    with pytest.raises(InvalidDistribution):
        generate_sources(10, spec, seed=0)


def test_mixing_params_reject_bad_exponent():
    with pytest.raises(ValueError):
        MixingParams(0.1, 0.1, 0.0)
