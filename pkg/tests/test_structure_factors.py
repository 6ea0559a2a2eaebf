"""Dynamic structure factors against an independent oracle and their
invariants: positivity, detailed balance, low-density limit, Brownian
consistency, isotropy."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.spatial.transform import Rotation

from qbm import (
    BE,
    FD,
    DegenerateQ,
    FugacityOutOfRange,
    GasSpec,
    ParticleSpec,
    SFQuery,
    s_be,
    s_fd,
    s_mb,
    s_mb_brownian,
)


def occupation_integral_oracle(qmag, e, gas, sign):
    """Structure factor from first principles, bypassing the closed forms.

    Integrate the occupation product n(k) (1 -+ n(k+q)) over the transverse
    plane after the collision delta function fixes the longitudinal
    momentum.  In the convention where the gas donates (q, E) to the test
    particle this reads

        S = K int_0^inf du  z b e^-u / [(1 + s z b e^-u)(1 + s z a e^-u)]

    with b = exp(-(beta/2m) sigma^2), a = exp(-(beta/2m)(sigma-q)^2),
    K = m^2/(4 pi^2 n beta q), and s = -1 (BE) / +1 (FD).
    """
    m, beta, z = gas.m, gas.beta, gas.z
    sig = (qmag * qmag + 2.0 * m * e) / (2.0 * qmag)
    b = np.exp(-(beta / (2 * m)) * sig**2)
    a = np.exp(-(beta / (2 * m)) * (sig - qmag) ** 2)

    def f(u):
        w = np.exp(-u)
        return z * b * w / ((1.0 + sign * z * b * w) * (1.0 + sign * z * a * w))

    val, _ = quad(f, 0.0, 60.0, epsabs=0.0, epsrel=1e-13, limit=300)
    return gas.m**2 / (4 * np.pi**2 * gas.n * gas.beta * qmag) * val


def random_setup(rng, statistics):
    z = rng.uniform(0.05, 0.9) if statistics == BE else rng.uniform(0.05, 3.0)
    gas = GasSpec(m=rng.uniform(0.3, 2.0), beta=rng.uniform(0.3, 2.0),
                  n=rng.uniform(0.01, 0.5), z=z, statistics=statistics)
    particle = ParticleSpec(M=rng.uniform(1.0, 20.0))
    q = rng.normal(size=3) * rng.uniform(0.3, 2.0)
    p = rng.normal(size=3) * rng.uniform(0.3, 2.0)
    return gas, particle, q, p


class TestAgainstOracle:
    @pytest.mark.parametrize("statistics,func,sign", [(BE, s_be, -1.0), (FD, s_fd, +1.0)])
    def test_closed_form_matches_occupation_integral(self, statistics, func, sign):
        rng = np.random.default_rng(11)
        for _ in range(40):
            gas, particle, q, p = random_setup(rng, statistics)
            qmag = np.linalg.norm(q)
            e = qmag**2 / (2 * particle.M) + np.dot(p, q) / particle.M
            want = occupation_integral_oracle(qmag, e, gas, sign)
            got = func(SFQuery(q=q, p=p), gas, particle)
            assert got == pytest.approx(want, rel=2e-10)

    def test_mb_from_oracle_low_density(self):
        # at z -> 0 the occupation integral itself collapses onto the MB form
        gas = GasSpec(m=1.0, beta=1.0, n=0.04, z=1e-8, statistics=BE)
        particle = ParticleSpec(M=5.0)
        q, p = np.array([1.1, 0, 0.3]), np.array([0.2, -0.4, 0.9])
        qmag = np.linalg.norm(q)
        e = qmag**2 / (2 * particle.M) + np.dot(p, q) / particle.M
        want = occupation_integral_oracle(qmag, e, gas, -1.0)
        got = s_mb(SFQuery(q=q, p=p), gas, particle)
        assert got == pytest.approx(want, rel=1e-7)

    def test_removable_singularity_by_series(self):
        # zero energy transfer: p.q = -q^2/2 makes E = 0 exactly
        gas = GasSpec(m=1.0, beta=1.5, n=0.05, z=0.7, statistics=BE)
        particle = ParticleSpec(M=4.0)
        q = np.array([1.2, 0.0, 0.0])
        p = np.array([-0.6, 0.8, 0.0])  # p.q = -0.72 = -q^2/2
        want = occupation_integral_oracle(1.2, 0.0, gas, -1.0)
        got = s_be(SFQuery(q=q, p=p), gas, particle)
        assert got == pytest.approx(want, rel=1e-9)
        # accuracy holds across the series/log branch switch near E = 0
        for de in (1e-12, 1e-9, 1e-7, 1e-5, 1e-3):
            p2 = p + np.array([de, 0, 0])
            e2 = 1.2**2 / (2 * particle.M) + np.dot(p2, q) / particle.M
            want2 = occupation_integral_oracle(1.2, e2, gas, -1.0)
            got2 = s_be(SFQuery(q=q, p=p2), gas, particle)
            assert got2 == pytest.approx(want2, rel=1e-9)


class TestPositivityAndScaling:
    def test_positive_everywhere(self):
        rng = np.random.default_rng(23)
        particle = ParticleSpec(M=6.0)
        for stat, func in ((BE, s_be), (FD, s_fd)):
            for _ in range(200):
                gas, particle, q, p = random_setup(rng, stat)
                assert func(SFQuery(q=q, p=p), gas, particle) > 0.0
        for _ in range(200):
            gas, particle, q, p = random_setup(rng, BE)
            assert s_mb(SFQuery(q=q, p=p), gas, particle) > 0.0
            assert s_mb_brownian(SFQuery(q=q, p=p), gas, particle) > 0.0

    def test_mb_linear_in_fugacity(self):
        gas = GasSpec(m=1.0, beta=1.0, n=0.1, z=0.2)
        particle = ParticleSpec(M=3.0)
        query = SFQuery(q=(0.8, 0, 0), p=(0.1, 0.4, 0))
        assert s_mb(query, gas.with_fugacity(0.4), particle) == pytest.approx(
            2.0 * s_mb(query, gas, particle), rel=1e-14
        )

    def test_ordering_be_mb_fd(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            gas, particle, q, p = random_setup(rng, BE)
            query = SFQuery(q=q, p=p)
            vb = s_be(query, gas, particle)
            vm = s_mb(query, gas, particle)
            vf = s_fd(query, gas, particle)
            assert vb > vm > vf

    def test_degenerate_q(self):
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.1)
        particle = ParticleSpec(M=2.0)
        for func in (s_mb, s_mb_brownian):
            with pytest.raises(DegenerateQ):
                func(SFQuery(q=0.0, p=1.0), gas, particle)

    def test_fugacity_gates(self):
        particle = ParticleSpec(M=2.0)
        gas_fd = GasSpec(m=1.0, beta=1.0, n=0.1, z=1.4, statistics=FD)
        with pytest.raises(FugacityOutOfRange):
            s_be(SFQuery(q=1.0, p=0.0), gas_fd, particle)


class TestDetailedBalance:
    """S(q, E) = exp(-beta E) S(q, -E) at fixed |q|.

    The reflected kinematics are realized by the public API through
    p -> -(p + q), which maps E -> -E exactly.
    """

    @pytest.mark.parametrize("func,stat", [(s_mb, BE), (s_be, BE), (s_fd, FD), (s_mb_brownian, BE)])
    def test_detailed_balance(self, func, stat):
        rng = np.random.default_rng(31)
        worst = 0.0
        for _ in range(300):
            gas, particle, q, p = random_setup(rng, stat)
            lhs = func(SFQuery(q=q, p=p), gas, particle)
            rhs = func(SFQuery(q=q, p=-(p + q)), gas, particle)
            e = np.dot(q, q) / (2 * particle.M) + np.dot(p, q) / particle.M
            resid = abs(lhs - np.exp(-gas.beta * e) * rhs) / lhs
            worst = max(worst, resid)
        assert worst < 1e-9


class TestLowDensityLimit:
    def test_tiny_z_matches_mb(self):
        gas0 = GasSpec(m=1.0, beta=1.0, n=0.02, z=1e-6, statistics=BE)
        particle = ParticleSpec(M=8.0)
        query = SFQuery(q=(0.9, 0.2, 0), p=(0.5, -0.1, 0.7))
        ref = s_mb(query, gas0, particle)
        assert abs(s_be(query, gas0, particle) / ref - 1) < 1e-5
        assert abs(s_fd(query, gas0, particle) / ref - 1) < 1e-5

    def test_linear_slope_in_z(self):
        particle = ParticleSpec(M=8.0)
        qs = [0.4, 0.9, 1.7]
        ps = [-1.0, 0.0, 1.4]
        zs = np.array([1e-2, 1e-3, 1e-4])
        devs = []
        for z in zs:
            gas = GasSpec(m=1.0, beta=1.0, n=0.02, z=z, statistics=BE)
            worst = 0.0
            for qv in qs:
                for pv in ps:
                    query = SFQuery(q=qv, p=pv)
                    ref = s_mb(query, gas, particle)
                    worst = max(worst, abs(s_be(query, gas, particle) / ref - 1))
                    worst = max(worst, abs(s_fd(query, gas, particle) / ref - 1))
            assert worst <= 10 * z
            devs.append(worst)
        slope = np.polyfit(np.log(zs), np.log(devs), 1)[0]
        assert slope == pytest.approx(1.0, abs=0.1)

    def test_fitted_constant_stable(self):
        # |S_q - S_mb| / S_mb <= C z with C stable over a decade
        particle = ParticleSpec(M=8.0)
        query = SFQuery(q=1.1, p=0.6)
        cs = []
        for z in (1e-3, 3e-4, 1e-4):
            gas = GasSpec(m=1.0, beta=1.0, n=0.02, z=z, statistics=BE)
            ref = s_mb(query, gas, particle)
            cs.append(abs(s_be(query, gas, particle) / ref - 1) / z)
        assert max(cs) / min(cs) == pytest.approx(1.0, abs=0.05)


class TestBrownianLimit:
    def test_first_order_in_alpha(self):
        # fixed (q, p): the dropped term is O(alpha^2), within C' alpha
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.05)
        query = SFQuery(q=(1.0, 0, 0), p=(2.0, 1.0, 0))
        devs = []
        alphas = np.logspace(-4, -2, 5)
        for alpha in alphas:
            particle = ParticleSpec(M=gas.m / alpha)
            ref = s_mb(query, gas, particle)
            devs.append(abs(s_mb_brownian(query, gas, particle) / ref - 1))
        assert np.all(devs <= 3.0 * alphas)
        # thermal test-particle momentum: deviation is genuinely O(alpha)
        alpha = 1e-4
        particle = ParticleSpec(M=gas.m / alpha)
        p_th = np.sqrt(particle.M / gas.beta)
        query_th = SFQuery(q=1.0, p=p_th)
        dev = abs(
            s_mb_brownian(query_th, gas, particle) / s_mb(query_th, gas, particle) - 1
        )
        assert 0.01 * alpha < dev < 10.0 * alpha

    def test_infinite_mass_form(self):
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=2.0, n=0.05)
        particle = ParticleSpec(M=1e14)
        qmag = 1.3
        want = gas.m**2 / (4 * np.pi**2 * gas.n * gas.beta * qmag) * gas.z * np.exp(
            -gas.beta * qmag**2 / (8 * gas.m)
        )
        got = s_mb_brownian(SFQuery(q=qmag, p=0.0), gas, particle)
        assert got == pytest.approx(want, rel=1e-12)

    def test_exact_detailed_balance_of_brownian_form(self):
        gas = GasSpec.maxwell_boltzmann(m=1.0, beta=1.0, n=0.05)
        particle = ParticleSpec(M=4.0)
        q = np.array([0.7, -0.2, 0.4])
        p = np.array([1.0, 0.3, -0.8])
        e = np.dot(q, q) / (2 * particle.M) + np.dot(p, q) / particle.M
        lhs = s_mb_brownian(SFQuery(q=q, p=p), gas, particle)
        rhs = s_mb_brownian(SFQuery(q=q, p=-(p + q)), gas, particle)
        assert lhs == pytest.approx(np.exp(-gas.beta * e) * rhs, rel=1e-12)


class TestIsotropy:
    def test_rotation_invariance(self):
        rng = np.random.default_rng(17)
        gas = GasSpec(m=1.0, beta=1.2, n=0.05, z=0.4, statistics=BE)
        particle = ParticleSpec(M=5.0)
        q = np.array([0.9, -0.3, 0.5])
        p = np.array([0.2, 1.1, -0.7])
        funcs = (s_mb, s_be, s_fd, s_mb_brownian)
        base = [f(SFQuery(q=q, p=p), gas, particle) for f in funcs]
        for _ in range(25):
            rot = Rotation.random(rng=rng).as_matrix()
            rotated = [f(SFQuery(q=rot @ q, p=rot @ p), gas, particle) for f in funcs]
            assert rotated == pytest.approx(base, rel=1e-10)
