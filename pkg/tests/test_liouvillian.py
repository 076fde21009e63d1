import math

import numpy as np
import pytest
import scipy.linalg

from fridge_qpc.errors import NonUniqueSteadyState
from fridge_qpc.liouvillian import (
    IdealMeasurement,
    LeadParams,
    Superoperator,
    assemble_liouvillian,
    dissipator,
    fermi_occupancy,
    hole_occupancy,
    lead_lindbladian_global,
    lead_lindbladian_local,
    measurement_lindbladian_ideal,
    measurement_lindbladian_local,
    steady_state,
    unvectorize,
    vectorize,
)
from fridge_qpc.model import Basis, DotParams, charge_components, hamiltonian_matrix

import oracles


def random_hermitian(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return a + a.conj().T


def random_density(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_system(rng):
    p = DotParams(epsilon=float(rng.uniform(0, 8)), delta=float(rng.uniform(-5, 5)),
                  g=float(rng.uniform(0.3, 2.0)))
    lead_l = LeadParams(mu=float(rng.uniform(-2, 12)),
                        temperature=float(rng.uniform(0.2, 6.0)),
                        gamma=float(10 ** rng.uniform(-3, -1)))
    lead_r = LeadParams(mu=lead_l.mu, temperature=float(rng.uniform(0.2, 6.0)),
                        gamma=lead_l.gamma)
    gamma_m = float(10 ** rng.uniform(-3, 1))
    h = hamiltonian_matrix(p, Basis.EIGEN)
    liouv = assemble_liouvillian(h, [
        lead_lindbladian_global(p, lead_l, "L"),
        lead_lindbladian_global(p, lead_r, "R"),
        measurement_lindbladian_ideal(p, gamma_m),
    ])
    return p, liouv


class TestDissipator:
    def test_zero_operator(self):
        assert np.all(dissipator(np.zeros((3, 3))).matrix == 0)

    def test_single_decay_channel(self):
        x = np.zeros((3, 3), dtype=complex)
        x[0, 1] = 1.0  # |empty><upper|
        rho = np.diag([0.0, 1.0, 0.0]).astype(complex)
        out = dissipator(x).apply(rho)
        expected = np.diag([1.0, -1.0, 0.0])
        assert np.allclose(out, expected, atol=1e-15)

    def test_trace_annihilation(self, rng):
        for _ in range(100):
            x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            rho = random_density(rng)
            assert abs(np.trace(dissipator(x).apply(rho))) < 1e-14 * np.abs(x).max() ** 2


class TestLeadLindbladianGlobal:
    def test_empty_band_limit(self):
        # mu far below both transition energies at low temperature: only decay
        p = DotParams(epsilon=5.0, delta=1.0, g=1.0)
        lead = LeadParams(mu=-20.0, temperature=0.05, gamma=0.01)
        liouv = assemble_liouvillian(hamiltonian_matrix(p),
                                     [lead_lindbladian_global(p, lead, "L"),
                                      lead_lindbladian_global(p, lead, "R")])
        rho = steady_state(liouv)
        assert rho[0, 0].real == pytest.approx(1.0, abs=1e-12)

    def test_infinite_temperature_limit(self, fig2_dot):
        lead = LeadParams(mu=0.0, temperature=1e9, gamma=0.02)
        got = lead_lindbladian_global(fig2_dot, lead, "L").matrix
        c, s = fig2_dot.cos_theta, fig2_dot.sin_theta
        expected = np.zeros_like(got)
        for amp, idx in ((c, 1), (-s, 2)):
            a = np.zeros((3, 3), dtype=complex)
            a[0, idx] = amp
            expected += 0.5 * lead.gamma * (dissipator(a).matrix
                                            + dissipator(a.conj().T).matrix)
        assert np.allclose(got, expected, atol=1e-9 * lead.gamma)

    def test_fig2_fermi_factor(self, fig2_dot, fig2_leads):
        lead_l, _ = fig2_leads
        f = fermi_occupancy(fig2_dot.epsilon + fig2_dot.omega / 2, lead_l.mu,
                            lead_l.temperature)
        assert f == pytest.approx(0.7678682369390867, abs=1e-12)

    def test_rejects_bad_temperature(self):
        with pytest.raises(ValueError):
            LeadParams(mu=0.0, temperature=0.0, gamma=0.01)
        with pytest.raises(ValueError):
            LeadParams(mu=0.0, temperature=-1.0, gamma=0.01)


class TestMeasurementLindbladian:
    def test_zero_strength(self, fig2_dot):
        assert np.all(measurement_lindbladian_ideal(fig2_dot, 0.0).matrix == 0)

    def test_decoupled_dot_reduces_to_level_dephasing(self):
        p = DotParams(epsilon=1.0, delta=1e9, g=1.0)
        got = measurement_lindbladian_ideal(p, 2.0).matrix
        expected = 2.0 * dissipator(np.diag([0, 0, 1.0]).astype(complex)).matrix
        assert np.max(np.abs(got - expected)) < 1e-8

    def test_rejects_negative_strength(self, fig2_dot):
        with pytest.raises(ValueError):
            measurement_lindbladian_ideal(fig2_dot, -0.1)


class TestLeadLindbladianLocal:
    def test_symmetric_resonant_rates(self):
        p = DotParams(epsilon=3.0, delta=0.0, g=1.0)
        lead = LeadParams(mu=3.0, temperature=1.0, gamma=0.02)
        got = lead_lindbladian_local(p, lead, "L").matrix
        c = np.zeros((3, 3), dtype=complex)
        c[0, 1] = 1.0
        expected = 0.01 * (dissipator(c).matrix + dissipator(c.conj().T).matrix)
        assert np.allclose(got, expected, atol=1e-15)

    def test_rates_independent_of_splitting(self):
        lead = LeadParams(mu=2.0, temperature=1.5, gamma=0.05)
        a = lead_lindbladian_local(DotParams(epsilon=4.0, delta=0.5, g=0.7), lead, "R")
        b = lead_lindbladian_local(DotParams(epsilon=4.0, delta=4.0, g=2.0), lead, "R")
        assert np.array_equal(a.matrix, b.matrix)

    def test_fig2_rate_value(self, fig2_leads):
        lead_l, _ = fig2_leads
        p = DotParams(epsilon=5.4, delta=4.3, g=1.0)
        up_rate = lead_l.gamma * fermi_occupancy(p.epsilon, lead_l.mu, lead_l.temperature)
        assert up_rate == pytest.approx(0.01 * 0.9088770389851438, rel=1e-12)


class TestAssembleAndInvariants:
    def test_hamiltonian_only_keeps_populations(self, fig2_dot):
        h = hamiltonian_matrix(fig2_dot)
        liouv = assemble_liouvillian(h, [])
        rho0 = np.full((3, 3), 1 / 3, dtype=complex)
        prop = scipy.linalg.expm(liouv.matrix * 0.37)
        rho_t = unvectorize(prop @ vectorize(rho0))
        assert np.allclose(np.diag(rho_t), np.diag(rho0), atol=1e-12)
        assert abs(rho_t[1, 2]) == pytest.approx(abs(rho0[1, 2]), abs=1e-12)
        assert rho_t[1, 2] != rho0[1, 2]  # coherences rotate

    def test_sum_of_parts(self, fig2_dot, fig2_leads):
        lead_l, lead_r = fig2_leads
        parts = [lead_lindbladian_global(fig2_dot, lead_l, "L"),
                 lead_lindbladian_global(fig2_dot, lead_r, "R")]
        total = assemble_liouvillian(np.zeros((3, 3)), parts)
        assert np.allclose(total.matrix, parts[0].matrix + parts[1].matrix)

    def test_trace_and_hermiticity_preservation_random(self, rng):
        herm_basis = []
        for i in range(3):
            for j in range(3):
                e = np.zeros((3, 3), dtype=complex)
                if i == j:
                    e[i, j] = 1
                else:
                    e[i, j] = e[j, i] = 1
                herm_basis.append(e)
        for _ in range(1000):
            _, liouv = random_system(rng)
            scale = np.abs(liouv.matrix).max()
            for e in herm_basis:
                assert abs(np.trace(liouv.apply(e))) < 1e-12 * max(scale, 1.0)
            rho = random_hermitian(rng)
            out = liouv.apply(rho)
            assert np.allclose(out, out.conj().T, atol=1e-12 * max(scale, 1.0))

    def test_steady_state_positivity_random(self, rng):
        for _ in range(300):
            _, liouv = random_system(rng)
            rho = steady_state(liouv)
            assert np.linalg.eigvalsh(rho).min() > -1e-12
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-14)


class TestSteadyState:
    def test_gibbs_fixed_point_single_lead(self, rng):
        for _ in range(25):
            p = DotParams(epsilon=float(rng.uniform(0, 6)),
                          delta=float(rng.uniform(-4, 4)),
                          g=float(rng.uniform(0.3, 2.0)))
            lead = LeadParams(mu=float(rng.uniform(-2, 8)),
                              temperature=float(rng.uniform(0.5, 5.0)),
                              gamma=0.01)
            liouv = assemble_liouvillian(hamiltonian_matrix(p),
                                         [lead_lindbladian_global(p, lead, "L")])
            rho = steady_state(liouv)
            target = oracles.gibbs_state(p.epsilon, p.delta, p.g, lead.mu,
                                         lead.temperature)
            pops = np.real(np.diag(rho))
            # relative entropy to the grand-canonical state
            mask = pops > 0
            rel_ent = float(np.sum(pops[mask] * (np.log(pops[mask])
                                                 - np.log(target[mask]))))
            assert abs(rel_ent) < 1e-10

    def test_fig2_point_is_diagonal(self, fig2_config):
        p = fig2_config.dot
        h = hamiltonian_matrix(p)
        liouv = assemble_liouvillian(h, [
            lead_lindbladian_global(p, fig2_config.lead_l, "L"),
            lead_lindbladian_global(p, fig2_config.lead_r, "R"),
            measurement_lindbladian_ideal(p, fig2_config.measurement.gamma_m),
        ])
        rho = steady_state(liouv)
        offdiag = rho - np.diag(np.diag(rho))
        assert np.max(np.abs(offdiag)) < 1e-12

    def test_fig2_matches_rate_equation_oracle(self, fig2_config):
        p = fig2_config.dot
        gamma_m = fig2_config.measurement.gamma_m
        h = hamiltonian_matrix(p)
        liouv = assemble_liouvillian(h, [
            lead_lindbladian_global(p, fig2_config.lead_l, "L"),
            lead_lindbladian_global(p, fig2_config.lead_r, "R"),
            measurement_lindbladian_ideal(p, gamma_m),
        ])
        rho = steady_state(liouv)
        w = gamma_m * (p.cos_theta * p.sin_theta) ** 2
        pops, _ = oracles.pauli_rate_solve(
            p.epsilon, p.delta, p.g, fig2_config.lead_l.mu,
            fig2_config.lead_l.temperature, fig2_config.lead_r.temperature,
            fig2_config.lead_l.gamma, w, w)
        assert np.allclose(np.real(np.diag(rho)), pops, atol=1e-12)

    def test_degenerate_generator_rejected(self, fig2_dot):
        liouv = assemble_liouvillian(hamiltonian_matrix(fig2_dot), [])
        with pytest.raises(NonUniqueSteadyState):
            steady_state(liouv)

    def test_agrees_with_long_time_propagation(self, rng, fig2_config):
        p = fig2_config.dot
        h = hamiltonian_matrix(p)
        liouv = assemble_liouvillian(h, [
            lead_lindbladian_global(p, fig2_config.lead_l, "L"),
            lead_lindbladian_global(p, fig2_config.lead_r, "R"),
            measurement_lindbladian_ideal(p, fig2_config.measurement.gamma_m),
        ])
        rho_ss = steady_state(liouv)
        t = 50.0 / fig2_config.lead_l.gamma
        prop = scipy.linalg.expm(liouv.matrix * t)
        for _ in range(20):
            rho0 = random_density(rng)
            rho_t = unvectorize(prop @ vectorize(rho0))
            assert oracles.trace_distance(rho_t, rho_ss) < 1e-8


class TestFermiFunctions:
    def test_half_filling(self):
        assert fermi_occupancy(3.0, 3.0, 0.7) == 0.5

    def test_reference_value(self):
        assert fermi_occupancy(2.3, 0.0, 1.0) == pytest.approx(
            0.09112296101485616, abs=1e-15)

    def test_saturation(self):
        assert fermi_occupancy(1000.0, 0.0, 1.0) == 0.0
        assert fermi_occupancy(-1000.0, 0.0, 1.0) == 1.0

    def test_hole_complement(self, rng):
        for _ in range(50):
            e, mu, t = rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.1, 3)
            assert hole_occupancy(e, mu, t) == pytest.approx(
                1.0 - fermi_occupancy(e, mu, t), abs=1e-15)

    def test_rejects_bad_temperature(self):
        with pytest.raises(ValueError):
            fermi_occupancy(1.0, 0.0, 0.0)
