import json
import math

import numpy as np
import pytest

from mcmc_confidence import Rng, normal_cdf


def test_same_seed_same_streams():
    a, b = Rng(1976), Rng(1976)
    assert np.array_equal(a.uniforms(1000), b.uniforms(1000))
    assert np.array_equal(a.normals(1000), b.normals(1000))
    assert np.array_equal(a.gammas(1000, 2.5, 2.0), b.gammas(1000, 2.5, 2.0))


def test_distinct_seeds_differ():
    assert not np.array_equal(Rng(1).uniforms(100), Rng(2).uniforms(100))


def test_mixed_op_sequence_reproducible():
    def run(seed):
        r = Rng(seed)
        out = [r.uniform(), r.normal(0.0, 2.0), r.gamma(4.5, 22.0)]
        out.extend(r.uniforms(17).tolist())
        out.append(r.normal(-1.0, 0.5))
        out.extend(r.gammas(5, 1.0, 1.0).tolist())
        return out

    assert run(42) == run(42)


def test_scalar_and_batch_draws_share_the_stream():
    r1, r2 = Rng(3), Rng(3)
    assert np.array_equal(r1.uniforms(50), np.array([r2.uniform() for _ in range(50)]))
    r1, r2 = Rng(4), Rng(4)
    assert np.array_equal(r1.normals(50), np.array([r2.normal() for _ in range(50)]))
    r1, r2 = Rng(5), Rng(5)
    assert np.array_equal(
        r1.gammas(20, 2.5, 2.0), np.array([r2.gamma(2.5, 2.0) for _ in range(20)])
    )


def test_batch_composition():
    a, b = Rng(3), Rng(3)
    assert np.array_equal(np.concatenate([a.normals(137), a.normals(63)]), b.normals(200))


def test_state_round_trip_through_json():
    r = Rng(9)
    r.uniforms(123)
    snapshot = json.loads(json.dumps(r.state_dict()))
    restored = Rng.from_state_dict(snapshot)
    assert np.array_equal(r.normals(64), restored.normals(64))
    assert r.gamma(1.5, 3.0) == restored.gamma(1.5, 3.0)


def test_snapshot_is_independent_of_later_draws():
    r = Rng(9)
    snapshot = r.state_dict()
    r.uniforms(10)
    assert np.array_equal(Rng.from_state_dict(snapshot).uniforms(10), Rng(9).uniforms(10))


def test_seed_validation():
    with pytest.raises(ValueError):
        Rng(-1)
    with pytest.raises(ValueError):
        Rng(2**64)
    Rng(2**64 - 1)


def test_spawn_offsets_seed():
    base = Rng(100)
    child = base.spawn(3)
    assert child.seed == 103
    assert np.array_equal(child.uniforms(10), Rng(103).uniforms(10))
    with pytest.raises(ValueError):
        base.spawn(-1)


def test_uniform_range_and_moments():
    u = Rng(2024).uniforms(10**6)
    assert float(u.min()) >= 0.0
    assert float(u.max()) < 1.0
    assert abs(float(u.mean()) - 0.5) < 0.002
    assert abs(float(u.var()) - 1.0 / 12.0) < 0.002


def test_normal_moments():
    z = Rng(7).normals(10**6)
    assert abs(float(z.mean())) < 0.005
    assert abs(float(z.var()) - 1.0) < 0.01


def test_normal_empirical_cdf_points():
    z = Rng(8).normals(10**6)
    for point in (-1.96, 0.0, 1.96):
        assert abs(float(np.mean(z <= point)) - normal_cdf(point)) < 0.005


def test_normal_location_shift_is_exact():
    base = Rng(11).normals(1000, 0.0, 1.0)
    shifted = Rng(11).normals(1000, 5.0, 1.0)
    assert np.array_equal(shifted, base + 5.0)


def test_normal_rejects_bad_sd():
    r = Rng(0)
    with pytest.raises(ValueError):
        r.normal(0.0, 0.0)
    with pytest.raises(ValueError):
        r.normals(5, 0.0, -1.0)


def test_gamma_rejects_bad_params():
    r = Rng(0)
    for shape, rate in ((0.0, 1.0), (-2.0, 1.0), (1.0, 0.0), (1.0, -3.0)):
        with pytest.raises(ValueError):
            r.gamma(shape, rate)
        with pytest.raises(ValueError):
            r.gammas(5, shape, rate)


def test_gamma_positive_and_mean_examples():
    g = Rng(5).gammas(10**6, 2.5, 2.0)
    assert float(g.min()) > 0.0
    assert abs(float(g.mean()) - 1.25) < 0.01 * 1.25
    g = Rng(6).gammas(10**6, 4.5, 22.0)
    target = 4.5 / 22.0
    assert abs(float(g.mean()) - target) < 0.01 * target


@pytest.mark.parametrize("shape,rate", [(2.5, 2.0), (4.5, 22.0), (1.0, 1.0)])
def test_gamma_moment_recovery(shape, rate):
    n = 10**6
    g = Rng(int(10 * shape + rate)).gammas(n, shape, rate)
    mean, var = shape / rate, shape / rate**2
    se_mean = math.sqrt(var / n)
    assert abs(float(g.mean()) - mean) < 3.0 * se_mean
    # sampling error of the variance uses the gamma's excess kurtosis 6/shape
    se_var = var * math.sqrt((2.0 + 6.0 / shape) / n)
    assert abs(float(g.var(ddof=1)) - var) < 3.0 * se_var
