"""Sphere sampling laws and the tilt-rotation primitive."""

import numpy as np
import pytest

from spinrelay.rng import RandomStream
from spinrelay.sphere import (
    inverse_cdf_cos_tilt,
    require_unit,
    rotate_towards,
    sample_cos_tilt,
    sample_uniform_sphere,
    unit_vector,
)

# one-sample Kolmogorov-Smirnov critical value at the 1% level
KS_CRIT_1PCT = 1.62762


def test_unit_vector_normalizes():
    v = unit_vector(3.0, 0.0, 4.0)
    np.testing.assert_allclose(v, [0.6, 0.0, 0.8], atol=1e-15)
    with pytest.raises(ValueError):
        unit_vector(0.0, 0.0, 0.0)


def test_require_unit_rejects():
    with pytest.raises(ValueError):
        require_unit([1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        require_unit([1.0, 0.0])


class TestUniformSphere:
    def test_unit_norm(self):
        v = sample_uniform_sphere(RandomStream(1), 10_000)
        np.testing.assert_allclose(np.linalg.norm(v, axis=-1), 1.0, atol=1e-12)

    def test_scalar_shape(self):
        v = sample_uniform_sphere(RandomStream(1))
        assert v.shape == (3,)

    def test_first_moment(self):
        # each component has mean 0; analytic 3-sigma is ~0.0055 at 1e5
        v = sample_uniform_sphere(RandomStream(314), 100_000)
        assert np.all(np.abs(v.mean(axis=0)) < 0.01)

    def test_second_moment(self):
        # int z^2 dn = 1/3 by direct integration
        v = sample_uniform_sphere(RandomStream(314), 100_000)
        assert abs(np.mean(v[:, 2] ** 2) - 1.0 / 3.0) < 0.01


class TestCosTilt:
    def test_inverse_cdf_endpoints(self):
        assert inverse_cdf_cos_tilt(1.0, 1) == 1.0
        assert inverse_cdf_cos_tilt(0.0, 3) == -1.0
        assert inverse_cdf_cos_tilt(1.0, 50) == 1.0

    def test_rejects_no_copies(self):
        with pytest.raises(ValueError):
            sample_cos_tilt(RandomStream(0), 0)
        with pytest.raises(ValueError):
            inverse_cdf_cos_tilt(0.5, 0)

    @pytest.mark.parametrize("n_copies,mean", [(1, 1.0 / 3.0), (4, 4.0 / 6.0)])
    def test_mean(self, n_copies, mean):
        x = sample_cos_tilt(RandomStream(2718), n_copies, 100_000)
        se = x.std(ddof=1) / np.sqrt(x.size)
        assert abs(x.mean() - mean) < 3 * se, (
            f"N={n_copies}: mean {x.mean():.5f} vs {mean:.5f} (3se={3*se:.5f})")

    def test_range(self):
        x = sample_cos_tilt(RandomStream(3), 10_000)
        assert np.all((-1.0 <= x) & (x <= 1.0))

    @pytest.mark.parametrize("n_copies", [1, 4])
    def test_ks_against_analytic_cdf(self, n_copies):
        x = np.sort(sample_cos_tilt(RandomStream(2718), n_copies, 100_000))
        cdf = ((1.0 + x) / 2.0) ** (n_copies + 1)
        n = x.size
        ks = max(np.max(np.abs(np.arange(1, n + 1) / n - cdf)),
                 np.max(np.abs(np.arange(0, n) / n - cdf)))
        assert ks < KS_CRIT_1PCT / np.sqrt(n), f"KS={ks:.5f} beyond 1% critical value"


class TestRotateTowards:
    def test_tilt_one_returns_axis(self):
        axis = unit_vector(0.3, -0.5, 0.7)
        np.testing.assert_allclose(rotate_towards(axis, 1.0, 2.1), axis, atol=1e-12)

    def test_tilt_minus_one_flips(self):
        axis = unit_vector(0.3, -0.5, 0.7)
        np.testing.assert_allclose(rotate_towards(axis, -1.0, 0.4), -axis, atol=1e-12)

    def test_equator(self):
        out = rotate_towards(np.array([0.0, 0.0, 1.0]), 0.0, 0.0)
        assert abs(out[2]) < 1e-12
        assert abs(np.linalg.norm(out) - 1.0) < 1e-12

    def test_random_inputs_preserve_contract(self):
        gen = RandomStream(77).generator()
        axes = sample_uniform_sphere(gen, 10_000)
        tilts = gen.uniform(-1.0, 1.0, 10_000)
        azimuths = gen.uniform(0.0, 2 * np.pi, 10_000)
        out = rotate_towards(axes, tilts, azimuths)
        np.testing.assert_allclose(np.linalg.norm(out, axis=-1), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.sum(out * axes, axis=-1), tilts, atol=1e-12)

    def test_axis_near_x_uses_fallback_frame(self):
        for axis in ([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]):
            out = rotate_towards(np.array(axis), 0.25, 1.0)
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12
            assert abs(out @ np.array(axis) - 0.25) < 1e-12

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            rotate_towards(np.array([1.0, 1.0, 0.0]), 0.5, 0.0)
        with pytest.raises(ValueError):
            rotate_towards(np.array([0.0, 0.0, 1.0]), 1.5, 0.0)
