import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rayarray import (MultipathChannel, ScenarioConfig, effective_channel_hbf,
                      effective_channel_raa, generate_multi_user, generate_single_user,
                      hbf_output, raa_output)
from rayarray.channel import channels_from_csv, channels_to_csv
from rayarray.response import ISOTROPIC_MATCHED, RAA_DIRECTIONAL, AntennaPattern

UNIT = AntennaPattern.isotropic(0.0)


def test_single_user_table_row(rng):
    ch = generate_single_user(ScenarioConfig.single_user(), rng)
    assert ch.path_count == 5
    assert ch.angles[0] == pytest.approx(-0.35 * math.pi)
    np.testing.assert_allclose(ch.angles, -0.5 * math.pi + 0.15 * math.pi * np.arange(1, 6))
    np.testing.assert_allclose(np.abs(ch.gains), math.sqrt(0.2))
    assert np.sum(np.abs(ch.gains) ** 2) == pytest.approx(1.0)


def test_single_user_seeded():
    cfg = ScenarioConfig.single_user()
    a = generate_single_user(cfg, np.random.default_rng(7))
    b = generate_single_user(cfg, np.random.default_rng(7))
    np.testing.assert_array_equal(a.gains, b.gains)
    c = generate_single_user(cfg, np.random.default_rng(8))
    assert not np.array_equal(a.gains, c.gains)


def test_mode_mismatch(rng):
    with pytest.raises(ValueError):
        generate_single_user(ScenarioConfig.multi_user(), rng)
    with pytest.raises(ValueError):
        generate_multi_user(ScenarioConfig.single_user(), rng)


def test_multi_user_table_row(rng):
    cfg = ScenarioConfig.multi_user()
    assert cfg.mean_angles[2] == pytest.approx(-0.05 * math.pi)
    users = generate_multi_user(cfg, rng)
    assert len(users) == 5
    for k, u in enumerate(users):
        assert u.user == k and u.path_count == 2
        assert np.sum(np.abs(u.gains) ** 2) == pytest.approx(1.0)


def test_multi_user_containment_and_spread():
    cfg = ScenarioConfig.multi_user()
    rng = np.random.default_rng(3)
    draws = {k: [] for k in range(5)}
    for _ in range(2000):
        for u in generate_multi_user(cfg, rng):
            assert np.all(np.abs(u.angles) <= 0.5 * math.pi)
            draws[u.user].extend(u.angles)
    # the central user is barely truncated: sample mean/std close to the nominal values
    mid = np.array(draws[2])
    assert mid.mean() == pytest.approx(-0.05 * math.pi, abs=0.02)
    assert mid.std() == pytest.approx(0.1 * math.pi, rel=0.1)
    # the edge user is truncated at -pi/2, so no probability atom at the boundary
    edge = np.array(draws[0])
    assert np.count_nonzero(edge == -0.5 * math.pi) == 0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), eta_max=st.floats(0.2, 1.5))
def test_seed_determinism_and_containment(seed, eta_max):
    cfg = ScenarioConfig.multi_user(eta_max=eta_max)
    a = generate_multi_user(cfg, np.random.default_rng(seed))
    b = generate_multi_user(cfg, np.random.default_rng(seed))
    for x, y in zip(a, b):
        assert x.gains.tobytes() == y.gains.tobytes()
        assert x.angles.tobytes() == y.angles.tobytes()
        assert np.all(np.abs(x.angles) <= eta_max)


def test_effective_channel_single_path_on_ray(raa16):
    n = 3
    ch = MultipathChannel([1.0], [raa16.orientation(n)])
    h = effective_channel_raa(raa16, UNIT, ch)
    p = raa16.port(n)
    assert h[p] == pytest.approx(16.0)
    assert abs(h[p - 1]) < 1e-9 and abs(h[p + 1]) < 1e-9


def test_effective_channel_empty(raa16, dft16):
    empty = MultipathChannel([], [])
    np.testing.assert_array_equal(effective_channel_raa(raa16, UNIT, empty), np.zeros(25))
    np.testing.assert_array_equal(effective_channel_hbf(dft16, UNIT, empty), np.zeros(16))


def test_effective_channel_hbf_on_codeword(dft16):
    ch = MultipathChannel([1.0], [dft16.theta[11]])
    assert abs(effective_channel_hbf(dft16, UNIT, ch)[11]) == pytest.approx(16.0)


def test_effective_channel_path_sum(raa16, dft16, rng):
    for _ in range(50):
        L = int(rng.integers(1, 6))
        ch = MultipathChannel(rng.normal(size=L) + 1j * rng.normal(size=L),
                              rng.uniform(-math.pi / 2, math.pi / 2, size=L))
        want_raa = sum(a * raa_output(raa16, RAA_DIRECTIONAL, t).values
                       for a, t in zip(ch.gains, ch.angles))
        want_hbf = sum(a * hbf_output(dft16, ISOTROPIC_MATCHED, t).values
                       for a, t in zip(ch.gains, ch.angles))
        np.testing.assert_allclose(effective_channel_raa(raa16, RAA_DIRECTIONAL, ch), want_raa,
                                   atol=1e-10)
        np.testing.assert_allclose(effective_channel_hbf(dft16, ISOTROPIC_MATCHED, ch), want_hbf,
                                   atol=1e-10)


def test_effective_channel_linear(raa16, rng):
    ch = generate_single_user(ScenarioConfig.single_user(), rng)
    c = 0.3 - 1.7j
    np.testing.assert_allclose(effective_channel_raa(raa16, RAA_DIRECTIONAL, ch.scaled(c)),
                               c * effective_channel_raa(raa16, RAA_DIRECTIONAL, ch), atol=1e-12)


def test_channel_csv_roundtrip(rng):
    users = generate_multi_user(ScenarioConfig.multi_user(), rng)
    text = channels_to_csv(users)
    assert text.splitlines()[0] == "user,path,re_alpha,im_alpha,theta_rad"
    back = channels_from_csv(text)
    for a, b in zip(users, back):
        np.testing.assert_array_equal(a.gains, b.gains)
        np.testing.assert_array_equal(a.angles, b.angles)
    assert channels_to_csv(users, trial=4).splitlines()[1].startswith("4,0,0,")
