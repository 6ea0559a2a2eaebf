"""Collision kinematics and the fugacity closure."""

import numpy as np
import pytest

from qbm import (
    BE,
    FD,
    DegenerateQ,
    FugacityOutOfRange,
    GasSpec,
    ParticleSpec,
    energy_transfer,
    fugacity_from_density,
    ideal_gas_density,
    mb_fugacity,
    sigma,
)


class TestEnergyTransfer:
    def test_zero_momentum_transfer(self):
        particle = ParticleSpec(M=1.0)
        assert energy_transfer((0.0, 0.0, 0.0), (1.2, -0.3, 4.0), particle) == 0.0

    def test_recoil_only(self):
        # q = (2,0,0), p = 0, M = 1: E = q^2/2M = 2
        assert energy_transfer((2.0, 0.0, 0.0), (0.0, 0.0, 0.0), ParticleSpec(M=1.0)) == 2.0

    def test_direct_arithmetic(self):
        # q=(1,0,0), p=(3,0,0), M=2: 1/4 + 3/2
        val = energy_transfer((1.0, 0.0, 0.0), (3.0, 0.0, 0.0), ParticleSpec(M=2.0))
        assert val == pytest.approx(1.75, rel=0, abs=0)

    def test_scalar_q_means_z_axis(self):
        particle = ParticleSpec(M=2.0)
        vec = energy_transfer((0.0, 0.0, 1.5), (0.0, 0.0, -2.0), particle)
        scal = energy_transfer(1.5, -2.0, particle)
        assert vec == scal

    def test_vectorized(self):
        particle = ParticleSpec(M=1.0)
        qs = np.array([[1.0, 0, 0], [2.0, 0, 0]])
        ps = np.array([[0.0, 0, 0], [1.0, 0, 0]])
        out = energy_transfer(qs, ps, particle)
        assert out == pytest.approx([0.5, 4.0])


class TestSigma:
    def test_perpendicular_equal_masses(self):
        # p.q = 0 and m = M: sigma = q (1 + alpha)/2 = q
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.1)
        particle = ParticleSpec(M=1.0)
        q0 = 1.7
        val = sigma((q0, 0, 0), (0, 3.0, 0), gas, particle)
        assert val == pytest.approx(q0, rel=1e-14)

    def test_heavy_particle_limit(self):
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.1)
        particle = ParticleSpec(M=1e12)
        q0 = 2.0
        val = sigma((q0, 0, 0), (0.0, 0.0, 0.0), gas, particle)
        assert val == pytest.approx(q0 / 2.0, rel=1e-10)

    def test_energy_reflection_identity(self):
        # sigma(-E) = |q| - sigma(E); realized by p -> -(p + q)
        rng = np.random.default_rng(7)
        gas = GasSpec.maxwell_boltzmann(m=0.7, beta=2.0, n=0.05)
        particle = ParticleSpec(M=3.0)
        for _ in range(20):
            q = rng.normal(size=3)
            p = rng.normal(size=3)
            qmag = np.linalg.norm(q)
            s_fwd = sigma(q, p, gas, particle)
            s_rev = sigma(q, -(p + q), gas, particle)
            assert s_fwd + s_rev == pytest.approx(qmag, rel=1e-12)

    def test_zero_q_rejected(self):
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.1)
        with pytest.raises(DegenerateQ):
            sigma((0.0, 0.0, 0.0), (1.0, 0, 0), gas, ParticleSpec(M=1.0))


class TestFugacity:
    def test_unit_argument(self):
        # beta = m/(2 pi) makes the power's argument one
        assert mb_fugacity(n=1.0, beta=1.0 / (2 * np.pi), m=1.0) == pytest.approx(1.0, rel=1e-14)

    def test_linear_in_density(self):
        z1 = mb_fugacity(0.02, 1.3, 0.7)
        z2 = mb_fugacity(0.01, 1.3, 0.7)
        assert z1 == pytest.approx(2.0 * z2, rel=1e-14)

    def test_reference_value(self):
        assert mb_fugacity(0.01, 1.0, 1.0) == pytest.approx(0.01 * (2 * np.pi) ** 1.5, rel=1e-14)
        assert mb_fugacity(0.01, 1.0, 1.0) == pytest.approx(0.15749, rel=1e-4)

    def test_spec_roundtrip_consistency(self):
        gas = GasSpec.maxwell_boltzmann(m=0.8, beta=1.7, n=0.03)
        assert gas.z == pytest.approx(mb_fugacity(0.03, 1.7, 0.8), rel=1e-12)

    def test_eos_roundtrip_quantum(self):
        for stat, z in ((BE, 0.6), (FD, 2.5)):
            n = ideal_gas_density(z, beta=1.2, m=0.9, statistics=stat)
            z_back = fugacity_from_density(n, beta=1.2, m=0.9, statistics=stat)
            assert z_back == pytest.approx(z, rel=1e-9)

    def test_be_condensation_rejected(self):
        with pytest.raises(FugacityOutOfRange):
            fugacity_from_density(n=100.0, beta=1.0, m=1.0, statistics=BE)


class TestGasSpecValidation:
    def test_be_fugacity_bound(self):
        with pytest.raises(FugacityOutOfRange):
            GasSpec(m=1.0, beta=1.0, n=0.1, z=1.2, statistics=BE)
        with pytest.raises(FugacityOutOfRange):
            GasSpec(m=1.0, beta=1.0, n=0.1, z=1.0, statistics=BE)

    def test_fd_any_positive_z(self):
        GasSpec(m=1.0, beta=1.0, n=0.1, z=7.5, statistics=FD)
        with pytest.raises(FugacityOutOfRange):
            GasSpec(m=1.0, beta=1.0, n=0.1, z=-0.5, statistics=FD)

    def test_positivity(self):
        with pytest.raises(ValueError):
            GasSpec(m=-1.0, beta=1.0, n=0.1, z=0.1)
        with pytest.raises(ValueError):
            ParticleSpec(M=0.0)

    def test_alpha(self):
        gas = GasSpec.maxwell_boltzmann(m=0.5, beta=1.0, n=0.1)
        assert ParticleSpec(M=5.0).alpha(gas) == pytest.approx(0.1)
