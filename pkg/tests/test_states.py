import numpy as np
import pytest

import ffcert as fc
from helpers import random_density, random_pure


def test_fidelity_pure_with_itself():
    rng = np.random.default_rng(0)
    psi = random_pure(rng, 8)
    sigma = fc.PreparedState.from_pure(psi)
    assert fc.fidelity(sigma, psi) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_maximally_mixed():
    rng = np.random.default_rng(1)
    for d in (2, 4, 6):
        psi = random_pure(rng, d)
        sigma = fc.PreparedState.maximally_mixed(d)
        assert fc.fidelity(sigma, psi) == pytest.approx(1.0 / d, abs=1e-12)


def test_fidelity_matches_dense_trace_oracle():
    rng = np.random.default_rng(2)
    for _ in range(20):
        rho = random_density(rng, 8)
        psi = random_pure(rng, 8)
        sigma = fc.PreparedState.from_dense(rho)
        oracle = float(np.real(np.trace(np.outer(psi, psi.conj()) @ rho)))
        assert fc.fidelity(sigma, psi) == pytest.approx(oracle, abs=1e-12)


def test_fidelity_dimension_mismatch():
    sigma = fc.PreparedState.maximally_mixed(4)
    with pytest.raises(fc.DimensionMismatch):
        fc.fidelity(sigma, random_pure(np.random.default_rng(0), 8))


def test_fidelity_linear_in_mixture():
    rng = np.random.default_rng(3)
    d = 8
    target = random_pure(rng, d)
    weights = rng.dirichlet(np.ones(5))
    vecs = [random_pure(rng, d) for _ in range(5)]
    rho = sum(w * np.outer(v, v.conj()) for w, v in zip(weights, vecs))
    mixed = fc.PreparedState.from_dense(rho)
    expected = sum(w * abs(np.vdot(target, v)) ** 2 for w, v in zip(weights, vecs))
    assert fc.fidelity(mixed, target) == pytest.approx(expected, abs=1e-10)


def test_trace_distance_basics():
    rng = np.random.default_rng(4)
    rho = fc.PreparedState.from_dense(random_density(rng, 4))
    assert fc.trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)
    zero = fc.PreparedState.from_pure(np.array([1, 0], dtype=complex))
    one = fc.PreparedState.from_pure(np.array([0, 1], dtype=complex))
    assert fc.trace_distance(zero, one) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_trace_distance_sandwich_1000_pairs():
    # 1 - F^(1/2) <= d <= (1 - F)^(1/2) whenever one state is pure
    rng = np.random.default_rng(5)
    for _ in range(1000):
        d = int(rng.integers(2, 65))
        psi = random_pure(rng, d)
        mixed = fc.PreparedState.from_dense(random_density(rng, d, rank=int(rng.integers(1, d + 1))))
        pure = fc.PreparedState.from_pure(psi)
        f = fc.fidelity(mixed, psi)
        dist = fc.trace_distance(mixed, pure)
        assert 1.0 - np.sqrt(f) <= dist + 1e-9
        assert dist <= np.sqrt(1.0 - f) + 1e-9


def test_depolarizing_endpoints():
    rng = np.random.default_rng(6)
    psi = random_pure(rng, 8)
    rho = fc.PreparedState.from_pure(psi)
    same = fc.apply_noise(rho, fc.NoiseSpec.depolarizing(0.0))
    assert np.max(np.abs(same.to_dense() - rho.to_dense())) <= 1e-12
    flat = fc.apply_noise(rho, fc.NoiseSpec.depolarizing(1.0))
    assert np.max(np.abs(flat.to_dense() - np.eye(8) / 8)) <= 1e-12


def test_depolarizing_fidelity_formula():
    rng = np.random.default_rng(7)
    psi = random_pure(rng, 8)
    rho = fc.PreparedState.from_pure(psi)
    for p in (0.1, 0.5, 0.9):
        noisy = fc.apply_noise(rho, fc.NoiseSpec.depolarizing(p))
        assert fc.fidelity(noisy, psi) == pytest.approx((1 - p) + p / 8, abs=1e-12)


def test_ground_mix_fidelity_linearity():
    rng = np.random.default_rng(8)
    psi = random_pure(rng, 8)
    rho0 = fc.PreparedState.from_pure(psi)
    other = fc.PreparedState.from_dense(random_density(rng, 8))
    for p in (0.2, 0.7):
        mixed = fc.apply_noise(rho0, fc.NoiseSpec.ground_mix(p, other))
        expected = (1 - p) + p * fc.fidelity(other, psi)
        assert fc.fidelity(mixed, psi) == pytest.approx(expected, abs=1e-12)


def test_dephasing_zeroes_off_diagonals():
    rng = np.random.default_rng(9)
    psi = random_pure(rng, 4)
    rho = fc.PreparedState.from_pure(psi)
    full = fc.apply_noise(rho, fc.NoiseSpec.dephasing(1.0))
    assert np.max(np.abs(full.to_dense() - np.diag(np.abs(psi) ** 2))) <= 1e-12
    partial = fc.apply_noise(rho, fc.NoiseSpec.dephasing(0.4))
    expected = 0.6 * rho.to_dense() + 0.4 * np.diag(np.abs(psi) ** 2)
    assert np.max(np.abs(partial.to_dense() - expected)) <= 1e-12


def test_noise_preserves_state_invariants():
    rng = np.random.default_rng(10)
    psi = random_pure(rng, 8)
    rho = fc.PreparedState.from_pure(psi)
    other = fc.PreparedState.from_pure(random_pure(rng, 8))
    for spec in (fc.NoiseSpec.depolarizing(0.3), fc.NoiseSpec.ground_mix(0.5, other),
                 fc.NoiseSpec.dephasing(0.8)):
        out = fc.apply_noise(rho, spec)
        dense = out.to_dense()
        assert np.trace(dense).real == pytest.approx(1.0, abs=1e-10)
        assert np.min(np.linalg.eigvalsh(dense)) >= -1e-10
        assert np.max(np.abs(dense - dense.conj().T)) <= 1e-12


def test_invalid_channel_strength():
    with pytest.raises(fc.InvalidParameter):
        fc.NoiseSpec.depolarizing(1.5)
    with pytest.raises(fc.InvalidParameter):
        fc.NoiseSpec.depolarizing(-0.1)


def test_lazy_reduced_matches_dense():
    # reduced density matrices of the lazy mixture equal the dense computation
    rng = np.random.default_rng(11)
    dims = (2, 2, 2, 2)
    psi = random_pure(rng, 16)
    state = fc.apply_noise(fc.PreparedState.from_pure(psi), fc.NoiseSpec.depolarizing(0.25))
    state = fc.apply_noise(state, fc.NoiseSpec.dephasing(0.5))
    dense = state.to_dense()
    for keep in [(0,), (2,), (0, 3), (3, 1), (1, 2, 3)]:
        got = state.reduced_density_matrix(dims, keep)
        oracle = fc.PreparedState.from_dense(dense).reduced_density_matrix(dims, keep)
        assert np.max(np.abs(got - oracle)) <= 1e-12


def test_lazy_representation_avoids_dense_at_scale():
    # 2^14 dimensions: diagonal and overlaps work, dense materialization refuses
    rng = np.random.default_rng(12)
    n = 14
    psi = random_pure(rng, 2**n)
    state = fc.apply_noise(fc.PreparedState.from_pure(psi), fc.NoiseSpec.depolarizing(0.1))
    assert state.diagonal_probabilities().sum() == pytest.approx(1.0, abs=1e-10)
    assert 0.89 <= state.overlap_with_pure(psi) <= 1.0
    red = state.reduced_density_matrix((2,) * n, (0, 7))
    assert red.shape == (4, 4)
    with pytest.raises(fc.BudgetExceeded):
        state.to_dense()


def test_negative_eigenvalue_rejected_beyond_tolerance():
    rho = np.diag([1.1, -0.1]).astype(complex)
    with pytest.raises(fc.InvalidParameter):
        fc.PreparedState.from_dense(rho)


def test_tiny_negativity_clipped():
    eps = 5e-11
    rho = np.diag([1.0 + eps, -eps]).astype(complex)
    state = fc.PreparedState.from_dense(rho)
    w = np.linalg.eigvalsh(state.to_dense())
    assert w.min() >= 0.0
    assert np.trace(state.to_dense()).real == pytest.approx(1.0, abs=1e-12)


def test_pure_state_norm_enforced():
    with pytest.raises(fc.InvalidParameter):
        fc.PureState(np.array([1.0, 1.0]))
