import math

import numpy as np
import pytest

from squidmech import fock
from squidmech import hamiltonian as ham
from squidmech import lindblad


def rwa_spec(**overrides):
    base = dict(delta=0.0, small_delta=0.0, g0=0.0, alpha=0.0, omega_m=1.0,
                pump_amplitude=0.0, dims=fock.HilbertDims.of((4, 4)),
                frequency_scale=1.0)
    base.update(overrides)
    return ham.RwaModelSpec(**base)


class TestLabFrame:
    def test_bare_spectrum(self):
        h = ham.build_lab_frame_from_rates(
            cavity_frequency=2.0, mechanical_frequency=0.3, optomech_coupling=0.0,
            parametric_amplitude=0.0, modulation_frequency=4.0, pump_amplitude=0.0,
            pump_frequency=0.0, dims=(3, 3))
        assert h.cosine_parts == ()
        eigs = np.sort(np.linalg.eigvalsh(h.static_part.to_array()))
        expected = np.sort([2.0 * nc + 0.3 * nm for nc in range(3) for nm in range(3)])
        np.testing.assert_allclose(eigs, expected, atol=1e-12)

    def test_squared_quadrature_kept_whole(self):
        # <1,0| (a + a^dag)^2 (x) 1 |1,0> = 3: the vacuum term is retained
        dims = (4, 4)
        a = fock.mode_destroy(dims, 0)
        x2 = (a + a.dag()) @ (a + a.dag())
        state = fock.basis_state(dims, (1, 0))
        assert fock.expectation(x2, state).real == pytest.approx(3.0)
        # and it shows up in the optomechanical matrix element <1,1|H|1,0>
        g0 = 0.07
        h = ham.build_lab_frame_from_rates(
            cavity_frequency=2.0, mechanical_frequency=0.3, optomech_coupling=g0,
            parametric_amplitude=0.0, modulation_frequency=4.0, pump_amplitude=0.0,
            pump_frequency=0.0, dims=dims)
        mat = h.static_part.to_array()
        bra = 4 * 1 + 1  # |1,1>
        ket = 4 * 1 + 0  # |1,0>
        assert mat[bra, ket] == pytest.approx(-(g0 / 2.0) * 3.0, rel=1e-12)

    def test_cosine_part_census(self):
        def build(alpha, pump):
            return ham.build_lab_frame_from_rates(
                cavity_frequency=2.0, mechanical_frequency=0.3,
                optomech_coupling=0.0, parametric_amplitude=alpha,
                modulation_frequency=4.0, pump_amplitude=pump, pump_frequency=1.9,
                dims=(3, 3))

        assert len(build(0.0, 0.0).cosine_parts) == 0
        assert len(build(0.1, 0.0).cosine_parts) == 1
        # a rotating pump needs both quadratures
        assert len(build(0.0, 0.1).cosine_parts) == 2
        assert len(build(0.1, 0.1).cosine_parts) == 3

    def test_flux_drive_amplitude(self):
        # H(t) carries -alpha (a + a^dag)^2 cos(w_d t): full amplitude at t = 0
        alpha = 0.05
        h = ham.build_lab_frame_from_rates(
            cavity_frequency=2.0, mechanical_frequency=0.3, optomech_coupling=0.0,
            parametric_amplitude=alpha, modulation_frequency=4.0,
            pump_amplitude=0.0, pump_frequency=0.0, dims=(3, 2))
        a = fock.mode_destroy((3, 2), 0)
        x2 = ((a + a.dag()) @ (a + a.dag())).to_array()
        drive = h.value_at(0.0) - h.static_part.to_array()
        np.testing.assert_allclose(drive, -alpha * x2, atol=1e-14)
        # and vanishes a quarter period in
        quarter = h.value_at(2.0 * math.pi / 4.0 / 4.0)
        np.testing.assert_allclose(quarter, h.static_part.to_array(), atol=1e-12)

    def test_pump_quadratures_reconstruct_rotating_term(self):
        pump, wp = 0.2, 1.7
        h = ham.build_lab_frame_from_rates(
            cavity_frequency=2.0, mechanical_frequency=0.3, optomech_coupling=0.0,
            parametric_amplitude=0.0, modulation_frequency=4.0,
            pump_amplitude=pump, pump_frequency=wp, dims=(4, 2))
        a = fock.mode_destroy((4, 2), 0).to_array()
        for t in (0.0, 0.3, 1.1):
            expected = pump * (a * np.exp(1j * wp * t)
                               + a.conj().T * np.exp(-1j * wp * t))
            drive = h.value_at(t) - h.static_part.to_array()
            np.testing.assert_allclose(drive, expected, atol=1e-12)

    def test_device_builder(self, device):
        h = ham.build_lab_frame(device, (4, 4))
        assert len(h.cosine_parts) == 0  # reference device has no modulation or pump
        assert h.static_part.is_hermitian()

    def test_parts_must_be_hermitian(self):
        skew = fock.QuantumOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), (2,))
        with pytest.raises(ValueError):
            ham.PeriodicHamiltonian(skew, ())


class TestRwa:
    def test_free_mechanics_only(self):
        h = ham.build_rwa(rwa_spec(omega_m=0.8))
        b = fock.mode_destroy((4, 4), 1)
        np.testing.assert_allclose(h.to_array(), (0.8 * (b.dag() @ b)).to_array(),
                                   atol=1e-14)

    def test_pair_matrix_element(self):
        alpha = 0.3
        h = ham.build_rwa(rwa_spec(alpha=alpha)).to_array()
        vac = 0            # |0,0>
        two = 2 * 4 + 0    # |2,0>
        assert h[vac, two] == pytest.approx(-alpha * math.sqrt(2.0) / 2.0, rel=1e-12)

    def test_every_term_present(self):
        spec = rwa_spec(delta=0.4, g0=0.15, alpha=0.2, omega_m=1.3,
                        pump_amplitude=0.05)
        h = ham.build_rwa(spec)
        assert h.is_hermitian()
        dims = (4, 4)
        a = fock.mode_destroy(dims, 0)
        b = fock.mode_destroy(dims, 1)
        expected = (-0.4 * (a.dag() @ a) + 1.3 * (b.dag() @ b)
                    - 0.1 * (a @ a + a.dag() @ a.dag())
                    - 0.15 * ((a.dag() @ a) @ (b + b.dag()))
                    + 0.05 * (a + a.dag()))
        assert (h - expected).max_abs() < 1e-14

    def test_frequency_scale_divides(self):
        spec = rwa_spec(delta=1.0, omega_m=10.0, frequency_scale=10.0)
        h = ham.build_rwa(spec)
        dims = (4, 4)
        a = fock.mode_destroy(dims, 0)
        b = fock.mode_destroy(dims, 1)
        expected = -0.1 * (a.dag() @ a) + 1.0 * (b.dag() @ b)
        assert (h - expected).max_abs() < 1e-14

    def test_default_scale_is_mechanical(self):
        spec = rwa_spec(omega_m=40.0, frequency_scale=None)
        assert spec.frequency_scale == 40.0

    def test_detuned_pump_returns_periodic(self):
        spec = rwa_spec(pump_amplitude=0.1, small_delta=0.25)
        h = ham.build_rwa(spec)
        assert isinstance(h, ham.PeriodicHamiltonian)
        assert len(h.cosine_parts) == 2
        a = fock.mode_destroy((4, 4), 0).to_array()
        for t in (0.0, 0.4, 2.2):
            expected = 0.1 * (a * np.exp(-1j * 0.25 * t)
                              + a.conj().T * np.exp(+1j * 0.25 * t))
            np.testing.assert_allclose(h.value_at(t) - h.static_part.to_array(),
                                       expected, atol=1e-12)

    def test_needs_two_subsystems(self):
        with pytest.raises(ValueError):
            rwa_spec(dims=fock.HilbertDims.of((4,)))


class TestTwoMode:
    def make(self, device, kind, strength_scaled=0.2):
        # strength quoted in units of the mechanical frequency
        return ham.build_two_mode(device, (3, 3, 3), kind,
                                  strength_scaled * device.mechanical.frequency,
                                  frequency_scale=device.mechanical.frequency)

    def test_beam_splitter_conserves_photon_number(self, device):
        h = self.make(device, "beam_splitter")
        dims = (3, 3, 3)
        total = fock.mode_number(dims, 0) + fock.mode_number(dims, 1)
        assert h.commutator(total).max_abs() < 1e-12

    def test_nondegenerate_pair_element(self, device):
        h = self.make(device, "nondegenerate", strength_scaled=0.2)
        bra_index = (1 * 3 + 1) * 3 + 0  # |1,1,0>
        assert h.to_array()[bra_index, 0] == pytest.approx(0.2, rel=1e-12)

    def test_nondegenerate_conserves_mode_difference(self, device):
        h = self.make(device, "nondegenerate")
        dims = (3, 3, 3)
        total = fock.mode_number(dims, 0) + fock.mode_number(dims, 1)
        difference = fock.mode_number(dims, 0) - fock.mode_number(dims, 1)
        assert h.commutator(total).max_abs() > 1e-3      # pair terms create photons
        assert h.commutator(difference).max_abs() < 1e-12

    def test_subsystem_count_enforced(self, device):
        with pytest.raises(ValueError):
            ham.build_two_mode(device, (3, 3), "beam_splitter", 0.1)

    def test_unknown_kind(self, device):
        with pytest.raises(ValueError):
            ham.build_two_mode(device, (3, 3, 3), "squeezer", 0.1)

    def test_hermitian(self, device):
        for kind in ham.TWO_MODE_KINDS:
            assert self.make(device, kind).is_hermitian()


class TestFrameConsistency:
    def test_decoupled_evolution_keeps_products_pure(self):
        dims = (4, 4)
        h = ham.build_rwa(rwa_spec(delta=0.3, omega_m=0.8,
                                   dims=fock.HilbertDims.of(dims)))
        model = lindblad.LindbladModel(hamiltonian=h, channels=(), dims=dims)
        rho0 = fock.basis_state(dims, (1, 2))
        times = np.linspace(0.0, 3.0, 7)
        result = lindblad.evolve(model, rho0, times, rtol=1e-10, atol=1e-12)
        final = result.final_state
        for sub in (0, 1):
            assert final.reduced(sub).purity() == pytest.approx(1.0, abs=1e-10)

    def test_stroboscopic_rwa_fidelity(self):
        # lab frame vs rotating frame at matched ratios w_c/alpha = w_c/g0 = 100
        omega_c, omega_m = 1.0, 0.8
        alpha = g0 = 0.01
        omega_d = 2.0 * omega_c
        dims = (8, 8)
        lab = ham.build_lab_frame_from_rates(
            cavity_frequency=omega_c, mechanical_frequency=omega_m,
            optomech_coupling=g0, parametric_amplitude=alpha,
            modulation_frequency=omega_d, pump_amplitude=0.0, pump_frequency=0.0,
            dims=dims)
        rwa = ham.build_rwa(ham.RwaModelSpec(
            delta=omega_d / 2.0 - omega_c, small_delta=0.0, g0=g0, alpha=alpha,
            omega_m=omega_m, pump_amplitude=0.0, dims=fock.HilbertDims.of(dims),
            frequency_scale=1.0))
        psi0 = np.zeros(64, dtype=complex)
        psi0[0] = 1.0 / math.sqrt(2.0)   # |0,0>
        psi0[8] = 1.0 / math.sqrt(2.0)   # |1,0>
        period = 2.0 * math.pi / omega_d
        times = np.array([0.0] + [k * period for k in range(1, 11)])
        lab_kets = lindblad.evolve_closed(lab, psi0, times, rtol=1e-11, atol=1e-13)
        rwa_kets = lindblad.evolve_closed(rwa, psi0, times, rtol=1e-11, atol=1e-13)
        for k in range(1, 11):
            phases = ham.rotating_frame_phases(dims, omega_d / 2.0, times[k])
            rotated = phases * lab_kets[k]
            fidelity = abs(np.vdot(rwa_kets[k], rotated)) ** 2
            assert fidelity >= 0.999, f"period {k}: fidelity {fidelity}"

    def test_rotating_frame_phases_are_cavity_parity_at_half_period(self):
        dims = (3, 2)
        omega_d = 2.0
        t = math.pi / (omega_d / 2.0)  # (w_d/2) t = pi
        phases = ham.rotating_frame_phases(dims, omega_d / 2.0, t)
        np.testing.assert_allclose(phases, [1, 1, -1, -1, 1, 1], atol=1e-12)
