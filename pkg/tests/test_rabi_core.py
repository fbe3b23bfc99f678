import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from usc_rabi import (
    ModelParams,
    SpectrumResult,
    build_h_rabi,
    dressed_amplitude,
    dressed_amplitude_matrix,
    ground_state,
    make_space,
    parity_labels,
    parity_matrix,
    solve_spectrum,
)
from conftest import C10_EXACT, C30_EXACT, G0_OVERLAP, LAMBDA0


class TestModelParams:
    def test_rejects_nonpositive_omega0(self):
        with pytest.raises(ValueError):
            ModelParams(omega0=0.0, coupling=0.1)

    def test_rejects_negative_coupling(self):
        with pytest.raises(ValueError):
            ModelParams(omega0=1.0, coupling=-0.1)

    def test_rejects_rescaled_cavity(self):
        with pytest.raises(ValueError):
            ModelParams(omega0=1.0, coupling=0.1, omega_c=2.0)


class TestBuildHRabi:
    def test_rejects_three_level_space(self):
        with pytest.raises(ValueError):
            build_h_rabi(ModelParams(omega0=1.0, coupling=0.2), make_space(10, 3))

    def test_hermitian(self, base_params, space2):
        h = build_h_rabi(base_params, space2)
        assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_decoupled_eigenvalues(self):
        # coupling 0: spectrum is {+-omega0/2 + n}
        params = ModelParams(omega0=0.7, coupling=0.0)
        space = make_space(6, 2)
        spec = solve_spectrum(params, space)
        expected = sorted(
            [s * 0.35 + n for s in (-1, 1) for n in range(space.n_photon)]
        )
        assert np.allclose(spec.eigenvalues, expected, atol=1e-12)

    def test_ground_energy_matches_reported_value(self, spectrum):
        assert spectrum.ground_energy == pytest.approx(-0.633, abs=1e-3)
        assert spectrum.ground_energy == pytest.approx(LAMBDA0, abs=1e-9)


class TestGroundState:
    def test_decoupled_limit(self):
        params = ModelParams(omega0=1.0, coupling=0.0)
        space = make_space(10, 2)
        psi0, energy = ground_state(solve_spectrum(params, space))
        assert energy == pytest.approx(-0.5, abs=1e-12)
        assert abs(psi0[space.index("g", 0)]) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_weight(self, ground, space2):
        psi0, _ = ground
        amp = psi0[space2.index("g", 0)]
        assert amp.real == pytest.approx(G0_OVERLAP, abs=1e-9)
        assert abs(amp.imag) < 1e-12

    @pytest.mark.parametrize("lam", [0.1, 0.3, 0.5, 0.7])
    def test_phase_convention(self, lam):
        space = make_space(30, 2)
        psi0, _ = ground_state(solve_spectrum(ModelParams(omega0=1.0, coupling=lam), space))
        pivot = psi0[space.index("g", 0)]
        assert pivot.real > 0 and abs(pivot.imag) < 1e-12

    def test_perturbative_shift(self):
        # second-order oracle: ground energy ~ -omega0/2 - coupling^2/(omega0 + omega_c)
        lam = 0.1
        spec = solve_spectrum(ModelParams(omega0=1.0, coupling=lam), make_space(40, 2))
        assert spec.ground_energy == pytest.approx(-0.5 - lam**2 / 2.0, abs=1e-3)

    def test_degenerate_ground_rejected(self, space2, spectrum):
        w = spectrum.eigenvalues.copy()
        w[1] = w[0] + 1e-12
        doctored = SpectrumResult(
            space=space2,
            eigenvalues=w,
            eigenvectors=spectrum.eigenvectors,
            parities=spectrum.parities,
        )
        with pytest.raises(ValueError):
            ground_state(doctored)


class TestDressedAmplitudes:
    def test_vanishes_without_coupling(self):
        spec = solve_spectrum(ModelParams(omega0=1.0, coupling=0.0), make_space(10, 2))
        assert abs(dressed_amplitude(spec, 1)) < 1e-12

    def test_single_photon_amplitude(self, spectrum):
        c10 = dressed_amplitude(spectrum, 1)
        assert c10.real == pytest.approx(C10_EXACT, abs=1e-9)
        assert abs(c10) == pytest.approx(0.26, abs=0.01)

    def test_three_photon_amplitude(self, spectrum):
        assert dressed_amplitude(spectrum, 3).real == pytest.approx(C30_EXACT, abs=1e-9)

    @pytest.mark.parametrize("lam", [0.1, 0.2, 0.4, 0.6, 0.8])
    @pytest.mark.parametrize("n", [0, 2, 4])
    def test_even_amplitudes_vanish(self, lam, n):
        spec = solve_spectrum(ModelParams(omega0=1.0, coupling=lam), make_space(30, 2))
        assert abs(dressed_amplitude(spec, n)) < 1e-9

    def test_out_of_truncation_rejected(self, spectrum):
        with pytest.raises(ValueError):
            dressed_amplitude(spectrum, spectrum.space.n_max + 1)

    def test_completeness(self, spectrum):
        c = dressed_amplitude_matrix(spectrum)
        weights = np.sum(np.abs(c) ** 2, axis=1)
        for n in range(spectrum.space.n_max // 2 + 1):
            assert weights[n] == pytest.approx(1.0, abs=1e-8)


class TestParity:
    def test_commutes_with_hamiltonian(self, base_params, space2):
        h = build_h_rabi(base_params, space2)
        pi = parity_matrix(space2)
        assert np.max(np.abs(h @ pi - pi @ h)) < 1e-10

    def test_parity_matrix_squares_to_identity(self, space2):
        pi = parity_matrix(space2)
        assert np.allclose(pi @ pi, np.eye(space2.dim))

    def test_ground_state_is_even(self, spectrum):
        assert spectrum.parities[0] == 1.0

    def test_first_excited_is_odd_at_zero_coupling(self):
        spec = solve_spectrum(ModelParams(omega0=1.0, coupling=0.0), make_space(10, 2))
        assert spec.parities[1] == -1.0
        assert spec.parities[2] == -1.0

    def test_mixed_vector_rejected(self, space2, spectrum):
        v = spectrum.eigenvectors.copy()
        mixed = (v[:, 0] + v[:, 1]) / np.sqrt(2.0)
        v[:, 0] = mixed
        doctored = SpectrumResult(
            space=space2,
            eigenvalues=spectrum.eigenvalues,
            eigenvectors=v,
            parities=spectrum.parities,
        )
        with pytest.raises(ValueError):
            parity_labels(doctored)

    @settings(max_examples=15, deadline=None)
    @given(lam=st.floats(min_value=0.01, max_value=0.99))
    def test_random_coupling_labels(self, lam):
        spec = solve_spectrum(ModelParams(omega0=1.0, coupling=lam), make_space(24, 2))
        assert np.all(np.abs(spec.parities) == 1.0)


class TestSpectrumConvergence:
    def test_ground_energy_monotone_in_coupling(self):
        energies = [
            solve_spectrum(ModelParams(omega0=1.0, coupling=lam), make_space(40, 2)).ground_energy
            for lam in np.arange(0.0, 0.81, 0.1)
        ]
        assert all(e2 <= e1 + 1e-12 for e1, e2 in zip(energies, energies[1:]))

    @pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
    def test_truncation_doubling(self, lam):
        params = ModelParams(omega0=1.0, coupling=lam)
        e40 = solve_spectrum(params, make_space(40, 2)).ground_energy
        e80 = solve_spectrum(params, make_space(80, 2)).ground_energy
        assert abs(e40 - e80) < 1e-8
