import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qembench.encoders import (
    DisplacementParams,
    EncoderConfig,
    FeatureScaler,
    SqueezeParams,
    _squeezed_amplitudes,
    displace_vacuum,
    displace_vacuum_expm,
    encode_matrix,
    encode_row,
    fock_tail_bound,
    iqp_encode,
    iqp_phases,
    squeeze_vacuum,
)
from qembench.exceptions import DataError, EncodingDomainError, ShapeError
from qembench.fock import quadrature_variances

# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def poisson_probs(lam: float, count: int) -> np.ndarray:
    return np.array([lam**n * math.exp(-lam) / math.factorial(n) for n in range(count)])


def squeezed_series(r: float, phi: float, dim: int) -> np.ndarray:
    """Closed-form squeezed-vacuum amplitudes (even states only)."""
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0 / math.sqrt(math.cosh(r))
    factor = -np.exp(1j * phi) * math.tanh(r)
    for n in range(1, (dim - 1) // 2 + 1):
        amps[2 * n] = amps[2 * n - 2] * factor * math.sqrt((2 * n) * (2 * n - 1)) / (2 * n)
    return amps


def dense_iqp_state(x1: float, x2: float) -> np.ndarray:
    """Brute-force 4x4 product for the 2-qubit circuit."""
    z1 = np.diag([1.0, 1.0, -1.0, -1.0])
    z2 = np.diag([1.0, -1.0, 1.0, -1.0])
    z1z2 = np.diag([1.0, -1.0, -1.0, 1.0])
    h2 = 0.5 * np.array(
        [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], dtype=complex
    )
    diag_u = np.diag(np.exp(1j * np.diag(x1 * z1 + x2 * z2 + x1 * x2 * z1z2)))
    e0 = np.array([1, 0, 0, 0], dtype=complex)
    return h2 @ diag_u @ (h2 @ e0)


# ---------------------------------------------------------------------------
# displacement
# ---------------------------------------------------------------------------


class TestDisplacement:
    def test_poisson_probabilities_at_0p8(self):
        probs = displace_vacuum(DisplacementParams(0.8), 30).probabilities()
        assert np.allclose(probs[:5], poisson_probs(0.64, 5), atol=1e-12)

    def test_zero_displacement_is_vacuum(self):
        state = displace_vacuum(DisplacementParams(0.0), 8)
        expected = np.zeros(8, dtype=complex)
        expected[0] = 1.0
        assert np.array_equal(state.amps, expected)

    def test_alpha_0p5_against_poisson_oracle(self):
        probs = displace_vacuum(DisplacementParams(0.5), 20).probabilities()
        assert probs[0] == pytest.approx(0.778801, abs=5e-7)
        assert probs[1] == pytest.approx(0.194700, abs=5e-7)
        assert probs[2] == pytest.approx(0.024338, abs=5e-7)

    def test_clamp_is_hard_error(self):
        with pytest.raises(EncodingDomainError):
            DisplacementParams(1.6)

    def test_expm_path_matches_closed_form(self):
        a = displace_vacuum(DisplacementParams(0.8), 30)
        b = displace_vacuum_expm(DisplacementParams(0.8), 30)
        assert np.max(np.abs(a.amps - b.amps)) < 1e-8

    def test_expm_path_norm(self):
        state = displace_vacuum_expm(DisplacementParams(0.8), 30)
        # Poisson tail beyond n=30 at lam=0.64 is ~1e-23
        assert state.norm_sq() >= 1.0 - 1e-10

    @given(st.floats(min_value=-1.5, max_value=1.5, allow_nan=False))
    @settings(max_examples=30, deadline=None)
    def test_two_path_equivalence_property(self, alpha):
        a = displace_vacuum(DisplacementParams(alpha), 30)
        b = displace_vacuum_expm(DisplacementParams(alpha), 30)
        assert np.max(np.abs(a.amps - b.amps)) < 1e-8


# ---------------------------------------------------------------------------
# squeezing
# ---------------------------------------------------------------------------


class TestSqueezing:
    def test_zero_squeezing_is_vacuum(self):
        state = squeeze_vacuum(SqueezeParams(0.0, phi=1.3), 16)
        assert state.probabilities()[0] == pytest.approx(1.0, abs=1e-12)

    def test_matches_series_oracle(self):
        # agreement away from the truncation edge; the top of the basis
        # feels the cut generator at the ~1e-6 amplitude scale
        state = squeeze_vacuum(SqueezeParams(0.8), 60)
        oracle = squeezed_series(0.8, 0.0, 60)
        assert np.max(np.abs(state.amps - oracle)[:30]) < 1e-10
        assert np.max(np.abs(state.amps - oracle)) < 1e-5

    def test_ground_probability(self):
        state = squeeze_vacuum(SqueezeParams(0.8), 60)
        assert state.probabilities()[0] == pytest.approx(1.0 / math.cosh(0.8), abs=1e-9)

    @pytest.mark.parametrize("r", [0.2, 0.5, 0.8, 1.0])
    def test_odd_photon_probabilities_vanish(self, r):
        probs = squeeze_vacuum(SqueezeParams(r), 60).probabilities()
        assert probs[1::2].max() < 1e-12

    def test_quadrature_variances_r0p8(self):
        state = squeeze_vacuum(SqueezeParams(0.8), 60)
        var_x, var_p = quadrature_variances(state)
        assert var_x == pytest.approx(math.exp(-1.6) / 4.0, rel=1e-6)
        assert var_p == pytest.approx(math.exp(1.6) / 4.0, rel=1e-6)

    def test_nonzero_phase_matches_series(self):
        state = squeeze_vacuum(SqueezeParams(0.6, phi=2.1), 40)
        oracle = squeezed_series(0.6, 2.1, 40)
        assert np.max(np.abs(state.amps - oracle)[:20]) < 1e-10

    def test_clamp_is_hard_error(self):
        with pytest.raises(EncodingDomainError):
            SqueezeParams(1.2)
        with pytest.raises(EncodingDomainError):
            SqueezeParams(-0.1)

    def test_batch_path_matches_expm_path(self):
        rs = np.array([0.05, 0.3, 0.8, 1.0])
        batch = _squeezed_amplitudes(rs, 60)
        for k, r in enumerate(rs):
            direct = squeeze_vacuum(SqueezeParams(float(r)), 60)
            assert np.max(np.abs(batch[:, k] - direct.amps)) < 1e-10

    def test_coherent_state_keeps_vacuum_variances(self):
        state = displace_vacuum_expm(DisplacementParams(0.8), 40)
        var_x, var_p = quadrature_variances(state)
        assert var_x == pytest.approx(0.25, abs=1e-9)
        assert var_p == pytest.approx(0.25, abs=1e-9)

    def test_uncertainty_product_over_encoder_states(self):
        states = [displace_vacuum(DisplacementParams(a), 40) for a in (0.0, 0.4, 1.2)]
        states += [squeeze_vacuum(SqueezeParams(r), 60) for r in (0.1, 0.5, 1.0)]
        for state in states:
            var_x, var_p = quadrature_variances(state)
            assert var_x * var_p >= 1.0 / 16.0 - 1e-9


# ---------------------------------------------------------------------------
# IQP
# ---------------------------------------------------------------------------


class TestIqp:
    def test_worked_example_phases(self):
        phases = iqp_phases((0.5, 0.8), 2).phases
        # targets are correctly rounded sums of the inputs; the decimal
        # literals sit within one ulp
        assert phases == pytest.approx([1.7, -0.7, -0.1, -0.9], abs=5e-16)

    def test_zero_input_phases(self):
        assert np.array_equal(iqp_phases((0.0, 0.0), 2).phases, np.zeros(4))

    def test_three_qubit_sign_structure(self):
        phases = iqp_phases((1.0, 0.0, 0.0), 3).phases
        assert np.array_equal(phases, np.array([1, 1, 1, 1, -1, -1, -1, -1], dtype=float))

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            iqp_phases((0.5, 0.8, 0.1), 2)

    def test_term_order_independence_is_exact(self):
        x = np.array([0.37, -1.24, 2.9, 0.001])
        n = 4
        phases = iqp_phases(x, n).phases
        rng = np.random.default_rng(5)
        signs = 1 - 2 * ((np.arange(2**n)[:, None] >> np.arange(n - 1, -1, -1)) & 1)
        for z in range(2**n):
            s = signs[z]
            terms = [x[i] * s[i] for i in range(n)]
            terms += [x[i] * x[j] * (s[i] * s[j]) for i in range(n) for j in range(i + 1, n)]
            for _ in range(5):
                rng.shuffle(terms)
                assert math.fsum(terms) == phases[z]

    def test_zero_input_state_is_ground(self):
        probs = iqp_encode((0.0, 0.0), 2).probabilities()
        assert probs[0] == pytest.approx(1.0, abs=1e-15)

    def test_matches_dense_matrix_oracle(self):
        state = iqp_encode((0.5, 0.8), 2)
        assert np.max(np.abs(state.amps - dense_iqp_state(0.5, 0.8))) < 1e-12

    def test_global_phase_invariance(self):
        base = iqp_encode((0.5, 0.8), 2).probabilities()
        phases = iqp_phases((0.5, 0.8), 2).phases + 1.234
        shifted = np.exp(1j * phases) / 2.0
        # re-apply the Hadamard layer manually on the shifted phases
        from qembench.encoders import _walsh_hadamard

        shifted_probs = np.abs(_walsh_hadamard(shifted)) ** 2
        assert np.allclose(shifted_probs, base, atol=1e-12)

    @given(
        st.lists(
            st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False),
            min_size=1,
            max_size=6,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_unitarity_property(self, xs):
        probs = iqp_encode(np.array(xs), len(xs)).probabilities()
        assert abs(probs.sum() - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# row/matrix encoding
# ---------------------------------------------------------------------------


class TestEncodeRow:
    def test_classical_passthrough(self):
        cfg = EncoderConfig(method="classical-passthrough")
        assert np.array_equal(encode_row([0.3, 0.7], cfg), [0.3, 0.7])

    def test_displacement_row_matches_state_probabilities(self):
        cfg = EncoderConfig(method="displacement", probs_per_mode=5)
        out = encode_row([0.8], cfg)
        assert np.allclose(out, poisson_probs(0.64, 5), atol=1e-12)

    def test_iqp_row_matches_block_state(self):
        cfg = EncoderConfig(method="iqp", iqp_block=2)
        out = encode_row([0.5, 0.8], cfg)
        expected = iqp_encode((0.5, 0.8), 2).probabilities()
        assert np.array_equal(out, expected)
        assert out.sum() == pytest.approx(1.0, abs=1e-12)

    def test_iqp_zero_pads_last_block(self):
        cfg = EncoderConfig(method="iqp", iqp_block=2)
        out = encode_row([0.5, 0.8, 0.3], cfg)
        assert out.shape == (8,)
        tail = iqp_encode((0.3, 0.0), 2).probabilities()
        assert np.array_equal(out[4:], tail)

    def test_non_finite_rejected(self):
        cfg = EncoderConfig(method="displacement")
        with pytest.raises(DataError):
            encode_row([np.nan], cfg)


class TestEncodeMatrix:
    def test_displacement_two_rows(self):
        cfg = EncoderConfig(method="displacement", probs_per_mode=5)
        out = encode_matrix(np.array([[0.8], [0.0]]), cfg)
        assert np.allclose(out[0], poisson_probs(0.64, 5), atol=1e-12)
        assert np.array_equal(out[1], [1, 0, 0, 0, 0])

    def test_classical_bit_identical(self):
        cfg = EncoderConfig(method="classical-passthrough")
        x = np.random.default_rng(3).normal(size=(5, 4))
        assert np.array_equal(encode_matrix(x, cfg), x)

    @pytest.mark.parametrize("method", ["displacement", "squeezing"])
    def test_probability_group_sums(self, method):
        cfg = EncoderConfig(method=method)
        rng = np.random.default_rng(11)
        x = rng.uniform(0.0, 1.0, size=(20, 3))
        out = encode_matrix(x, cfg)
        k = cfg.probs_per_mode
        tail = fock_tail_bound(cfg)
        groups = out.reshape(20, 3, k).sum(axis=2)
        assert np.all(groups <= 1.0 + 1e-12)
        assert np.all(groups >= 1.0 - tail - 1e-12)

    def test_rows_equal_encode_row(self):
        cfg = EncoderConfig(method="squeezing")
        rng = np.random.default_rng(4)
        x = rng.uniform(0.0, 1.0, size=(6, 2))
        out = encode_matrix(x, cfg)
        for i in range(6):
            assert np.array_equal(out[i], encode_row(x[i], cfg))

    def test_row_permutation_equivariance(self):
        cfg = EncoderConfig(method="displacement")
        rng = np.random.default_rng(9)
        x = rng.uniform(0.0, 1.0, size=(8, 3))
        perm = rng.permutation(8)
        assert np.array_equal(encode_matrix(x, cfg)[perm], encode_matrix(x[perm], cfg))

    def test_error_carries_row_index(self):
        cfg = EncoderConfig(method="squeezing")
        x = np.array([[0.5], [1.7]])
        with pytest.raises(EncodingDomainError, match="row 1"):
            encode_matrix(x, cfg)

    def test_deterministic(self):
        cfg = EncoderConfig(method="squeezing")
        x = np.random.default_rng(2).uniform(0, 1, size=(7, 2))
        assert np.array_equal(encode_matrix(x, cfg), encode_matrix(x, cfg))


class TestEncoderConfig:
    def test_defaults_per_method(self):
        assert EncoderConfig(method="displacement").fock_dim == 30
        assert EncoderConfig(method="squeezing").fock_dim == 60

    def test_probs_per_mode_bounded_by_dim(self):
        with pytest.raises(DataError):
            EncoderConfig(method="displacement", fock_dim=4, probs_per_mode=5)

    def test_iqp_block_range(self):
        with pytest.raises(DataError):
            EncoderConfig(method="iqp", iqp_block=11)

    def test_unknown_method(self):
        with pytest.raises(DataError):
            EncoderConfig(method="amplitude")

    def test_output_width(self):
        assert EncoderConfig(method="iqp", iqp_block=2).output_width(5) == 12
        assert EncoderConfig(method="displacement").output_width(3) == 15
        assert EncoderConfig(method="classical-passthrough").output_width(9) == 9


class TestFeatureScaler:
    def test_minmax_maps_train_to_unit_interval(self):
        rng = np.random.default_rng(1)
        train = rng.normal(size=(50, 3)) * 4
        scaler = FeatureScaler("minmax").fit(train)
        scaled = scaler.transform(train)
        assert scaled.min() >= 0.0 and scaled.max() <= 1.0
        assert scaled.min(axis=0) == pytest.approx(np.zeros(3), abs=1e-12)

    def test_out_of_range_test_rows_are_clipped(self):
        scaler = FeatureScaler("minmax").fit(np.array([[0.0], [2.0]]))
        out = scaler.transform(np.array([[-5.0], [1.0], [9.0]]))
        assert np.array_equal(out.ravel(), [0.0, 0.5, 1.0])

    def test_none_rule_is_identity(self):
        x = np.array([[1.0, -3.0]])
        assert np.array_equal(FeatureScaler("none").transform(x), x)
