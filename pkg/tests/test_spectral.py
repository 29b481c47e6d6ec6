"""Transforms, norms, and the exactly-testable constant-1 inequalities."""

import numpy as np
import pytest

from muskat.errors import ConfigurationError, InvariantViolationError, PreconditionError
from muskat.grid import GridSpec, load_field, save_field
from muskat.spectral import (
    SpectralField,
    analyze,
    apply_lambda_power,
    besov_s_norm,
    check_interpolation,
    dealias_mask,
    gradient,
    lp_norm,
    norm_report,
    random_band_field,
    s_norm,
    sobolev_norm,
    synthesize,
)

TWO_PI = 2.0 * np.pi


def cos_field(grid, k=1, amp=2.0):
    x = grid.coords()[0]
    return amp * np.cos(TWO_PI * k / grid.length * x)


class TestGridSpec:
    def test_rejects_bad_dimension(self):
        with pytest.raises(ConfigurationError):
            GridSpec(d=3, n=64)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ConfigurationError):
            GridSpec(d=1, n=100)

    def test_rejects_small_grid(self):
        with pytest.raises(ConfigurationError):
            GridSpec(d=1, n=4)

    def test_rejects_nonpositive_length(self):
        with pytest.raises(ConfigurationError):
            GridSpec(d=1, n=64, length=0.0)


class TestAnalyzeSynthesize:
    def test_single_mode_identity(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid), grid)
        assert spec.coeffs[1] == pytest.approx(1.0, abs=1e-13)
        assert spec.coeffs[-1] == pytest.approx(1.0, abs=1e-13)
        others = np.abs(spec.coeffs)
        others[1] = others[-1] = 0.0
        assert np.max(others) <= 1e-13

    def test_zero_field(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(np.zeros(grid.shape), grid)
        assert np.max(np.abs(spec.coeffs)) == 0.0

    @pytest.mark.parametrize("d,n", [(1, 64), (1, 256), (2, 16), (2, 32)])
    def test_round_trip_random(self, d, n):
        grid = GridSpec(d=d, n=n)
        rng = np.random.default_rng(42 + n + d)
        f = rng.standard_normal(grid.shape)
        back = synthesize(analyze(f, grid))
        assert np.max(np.abs(back - f)) <= 1e-12 * np.max(np.abs(f))

    def test_synthesize_single_pair_is_cosine(self):
        grid = GridSpec(d=1, n=64)
        c = np.zeros(grid.shape, dtype=complex)
        c[1] = c[-1] = 1.0
        f = synthesize(SpectralField(coeffs=c, grid=grid))
        assert np.max(np.abs(f - cos_field(grid))) <= 1e-13

    def test_synthesize_zero(self):
        grid = GridSpec(d=1, n=64)
        f = synthesize(SpectralField(coeffs=np.zeros(grid.shape, complex), grid=grid))
        assert np.max(np.abs(f)) == 0.0

    def test_broken_symmetry_raises(self):
        grid = GridSpec(d=1, n=64)
        c = np.zeros(grid.shape, dtype=complex)
        c[1] = 1.0  # c[-1] missing
        with pytest.raises(InvariantViolationError):
            synthesize(SpectralField(coeffs=c, grid=grid))

    def test_size_mismatch_raises(self):
        grid = GridSpec(d=1, n=64)
        with pytest.raises(ConfigurationError):
            analyze(np.zeros(32), grid)


class TestSNorm:
    def test_single_mode_any_s(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid), grid)
        for s in (-1.5, -1.0, 0.0, 0.5, 1.0, 2.0):
            assert s_norm(spec, s) == pytest.approx(2.0, rel=1e-13)

    def test_two_modes_s1(self):
        grid = GridSpec(d=1, n=64)
        f = cos_field(grid, k=1) + cos_field(grid, k=2)
        assert s_norm(analyze(f, grid), 1.0) == pytest.approx(6.0, rel=1e-13)

    def test_two_modes_s_minus1(self):
        grid = GridSpec(d=1, n=64)
        f = cos_field(grid, k=1) + cos_field(grid, k=2)
        assert s_norm(analyze(f, grid), -1.0) == pytest.approx(3.0, rel=1e-13)

    def test_negative_s_requires_mean_zero(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid) + 1.0, grid)
        with pytest.raises(PreconditionError):
            s_norm(spec, -1.0)

    def test_scaling_homogeneity(self):
        grid = GridSpec(d=1, n=64)
        f = random_band_field(grid, (1, 8), seed=3)
        for s in (-1.0, 0.0, 1.7):
            base = s_norm(analyze(f, grid), s)
            assert s_norm(analyze(-2.5 * f, grid), s) == pytest.approx(2.5 * base, rel=1e-12)


class TestBesov:
    def test_two_mode_profile(self):
        grid = GridSpec(d=1, n=64)
        f = cos_field(grid, k=1) + cos_field(grid, k=2)
        sup, profile = besov_s_norm(analyze(f, grid), 1.0)
        assert profile[1] == pytest.approx(2.0, rel=1e-13)
        assert profile[2] == pytest.approx(4.0, rel=1e-13)
        assert sup == pytest.approx(4.0, rel=1e-13)

    def test_single_mode_sup_equals_norm(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid, k=3), grid)
        sup, _ = besov_s_norm(spec, 0.7)
        assert sup == pytest.approx(s_norm(spec, 0.7), rel=1e-13)

    @pytest.mark.parametrize("d", [1, 2])
    def test_sup_below_norm_random(self, d):
        grid = GridSpec(d=d, n=32)
        for seed in range(25):
            f = random_band_field(grid, (1, 8), seed=seed)
            spec = analyze(f, grid)
            for s in (-float(d), 0.0, 1.0):
                sup, _ = besov_s_norm(spec, s)
                assert sup <= s_norm(spec, s) * (1 + 1e-12)

    def test_annulus_indexing_exact_at_powers_of_two(self):
        grid = GridSpec(d=1, n=64)
        c = np.zeros(grid.shape, dtype=complex)
        c[2] = c[-2] = 1.0  # |k| = 2 sits in annulus j=2: [2, 4)
        _, profile = besov_s_norm(SpectralField(coeffs=c, grid=grid), 0.0)
        assert set(profile) == {2}
        c = np.zeros(grid.shape, dtype=complex)
        c[3] = c[-3] = 1.0  # |k| = 3 sits in annulus j=2 as well
        _, profile = besov_s_norm(SpectralField(coeffs=c, grid=grid), 0.0)
        assert set(profile) == {2}


class TestSobolevAndLebesgue:
    def test_l2_of_cosine(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid), grid)
        assert sobolev_norm(spec, 0.0) == pytest.approx(2.0 * np.sqrt(np.pi), rel=1e-12)

    @pytest.mark.parametrize("d", [1, 2])
    def test_parseval_matches_quadrature(self, d):
        grid = GridSpec(d=d, n=32)
        f = random_band_field(grid, (1, 6), seed=1)
        direct = lp_norm(f, grid, 2)
        assert sobolev_norm(analyze(f, grid), 0.0) == pytest.approx(direct, rel=1e-10)

    def test_zero_field(self):
        grid = GridSpec(d=1, n=64)
        assert sobolev_norm(analyze(np.zeros(grid.shape), grid), 2.0) == 0.0

    def test_sup_norm(self):
        grid = GridSpec(d=1, n=64)
        assert lp_norm(cos_field(grid), grid, np.inf) == pytest.approx(2.0, abs=1e-13)

    def test_l1_of_cosine(self):
        grid = GridSpec(d=1, n=1024)
        # trapezoid converges at order 2 to int |2 cos| = 8 over the period
        assert lp_norm(cos_field(grid), grid, 1) == pytest.approx(8.0, abs=1e-3)

    def test_constant_sup(self):
        grid = GridSpec(d=1, n=64)
        assert lp_norm(np.full(grid.shape, -0.7), grid, np.inf) == pytest.approx(0.7)

    def test_unsupported_p(self):
        grid = GridSpec(d=1, n=64)
        with pytest.raises(ConfigurationError):
            lp_norm(cos_field(grid), grid, 3)


class TestLambdaPower:
    def test_half_laplacian_on_cosine(self):
        grid = GridSpec(d=1, n=64)
        out = synthesize(apply_lambda_power(analyze(cos_field(grid), grid), 1.0))
        assert np.max(np.abs(out - cos_field(grid))) <= 1e-12

    def test_identity_at_zero(self):
        grid = GridSpec(d=1, n=64)
        f = random_band_field(grid, (1, 8), seed=5) + 0.3
        out = synthesize(apply_lambda_power(analyze(f, grid), 0.0))
        assert np.max(np.abs(out - f)) <= 1e-12

    def test_square_on_second_mode(self):
        grid = GridSpec(d=1, n=64)
        f = cos_field(grid, k=2)
        out = synthesize(apply_lambda_power(analyze(f, grid), 2.0))
        assert np.max(np.abs(out - 4.0 * f)) <= 1e-11

    def test_negative_power_requires_mean_zero(self):
        grid = GridSpec(d=1, n=64)
        with pytest.raises(PreconditionError):
            apply_lambda_power(analyze(cos_field(grid) + 1.0, grid), -1.0)


class TestInterpolation:
    def test_two_mode_example(self):
        grid = GridSpec(d=1, n=64)
        f = cos_field(grid, k=1) + cos_field(grid, k=2)
        rep = check_interpolation(analyze(f, grid), -1.0, 0.0, 1.0)
        assert rep.lhs == pytest.approx(4.0, rel=1e-12)
        assert rep.rhs == pytest.approx(np.sqrt(18.0), rel=1e-12)
        assert rep.holds

    def test_single_mode_equality(self):
        grid = GridSpec(d=1, n=64)
        rep = check_interpolation(analyze(cos_field(grid, k=3), grid), -1.0, 0.5, 2.0)
        assert rep.lhs == pytest.approx(rep.rhs, rel=1e-12)
        assert rep.holds

    def test_ordering_violation(self):
        grid = GridSpec(d=1, n=64)
        spec = analyze(cos_field(grid), grid)
        with pytest.raises(PreconditionError):
            check_interpolation(spec, 1.0, 0.0, 2.0)

    @pytest.mark.parametrize("d", [1, 2])
    def test_random_sweep(self, d):
        grid = GridSpec(d=d, n=32)
        rng = np.random.default_rng(77)
        for seed in range(50):
            f = random_band_field(grid, (1, 8), seed=seed)
            spec = analyze(f, grid)
            mu1 = float(rng.uniform(-d, 0.5))
            mu2 = float(rng.uniform(mu1 + 0.2, 3.0))
            s = float(rng.uniform(mu1 + 1e-3, mu2 - 1e-3))
            assert check_interpolation(spec, mu1, s, mu2).holds


class TestHausdorffYoung:
    @pytest.mark.parametrize("d", [1, 2])
    def test_sup_and_gradient_bounds(self, d):
        grid = GridSpec(d=d, n=32)
        for seed in range(25):
            f = random_band_field(grid, (1, 8), seed=seed)
            spec = analyze(f, grid)
            assert np.max(np.abs(f)) <= s_norm(spec, 0.0) * (1 + 1e-12)
            grad_sup = max(np.max(np.abs(g)) for g in gradient(spec))
            assert grad_sup <= s_norm(spec, 1.0) * (1 + 1e-12)


class TestHelpers:
    def test_dealias_mask_cut(self):
        grid = GridSpec(d=1, n=64)
        mask = dealias_mask(grid)
        m = np.fft.fftfreq(64, d=1 / 64)
        assert np.array_equal(mask, np.abs(m) <= 64 / 3)

    def test_norm_report_invariant_and_csv(self, tmp_path):
        grid = GridSpec(d=1, n=64)
        f = random_band_field(grid, (1, 8), seed=9)
        rep = norm_report(analyze(f, grid), [-1.0, 0.0, 1.0])
        for nv, bv in zip(rep.norms, rep.besov_sups):
            assert 0.0 <= bv <= nv * (1 + 1e-12)
        path = tmp_path / "norms.csv"
        rep.write_csv(path)
        header = path.read_text().splitlines()[0]
        assert header == "s,norm,besov_sup"

    def test_field_binary_round_trip(self, tmp_path):
        grid = GridSpec(d=2, n=16)
        f = random_band_field(grid, (1, 4), seed=2)
        path = tmp_path / "field.bin"
        save_field(path, f, grid)
        back, grid2 = load_field(path)
        assert grid2 == grid
        assert np.array_equal(back, f)

    def test_random_band_determinism(self):
        grid = GridSpec(d=1, n=64)
        a = random_band_field(grid, (1, 8), seed=4)
        b = random_band_field(grid, (1, 8), seed=4)
        assert np.array_equal(a, b)

    def test_random_band_empty_band(self):
        grid = GridSpec(d=1, n=64)
        with pytest.raises(ConfigurationError):
            random_band_field(grid, (40, 50), seed=0)
