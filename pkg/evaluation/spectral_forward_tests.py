import math

import mpmath
import numpy as np
import pytest

from chpeakon.models.peakon import ConservativeState, DiscreteMeasure, PeakonConfig
from chpeakon.models.spectral import JostDirection, SpectralData, WeylRepresentation
from chpeakon.physics.moment_inverse import moments
from chpeakon.physics.peakon_core import hamiltonian, liouville_string, momentum_measure
from chpeakon.physics.spectral_forward import (
    continued_fraction_representation, coupling_constants, dipole_weights, eigenvalues,
    jost_solution, norming_constants, partial_fraction_representation, spectral_data,
    string_coefficients, weyl_eval, weyl_from_jost, wronskian_polynomial,
)
from chpeakon.utils.arithmetic import ExtendedField
from chpeakon.utils.exceptions import InvalidInputError, NotAnEigenvalueError


def random_points(rng, count, radius=3.0):
    """실수축을 피한 임의 복소수 점"""
    re = rng.uniform(-radius, radius, count)
    im = rng.uniform(0.05, radius, count) * rng.choice([-1.0, 1.0], count)
    return re + 1j * im


def brute_force_coupling(config, lam, dps=60):
    """mpmath 로 (A, B) 계수를 계면마다 전파해 c_λ = 1/B 계산"""
    mp = mpmath.MPContext()
    mp.dps = dps
    a, b = mp.mpf(1), mp.mpf(0)
    z = mp.mpf(lam)
    for p, q in zip(config.masses, config.positions):
        w = 2 * z * mp.mpf(p)
        q = mp.mpf(q)
        a, b = a - w * (a + b * mp.exp(-q)), b + w * (a * mp.exp(q) + b)
    return float(1 / b)


def brute_force_wronskian(config, z, mp):
    """W(z) 의 A 계수를 mpmath 컨텍스트에서 직접 전파"""
    a, b = mp.mpf(1), mp.mpf(0)
    for p, q in zip(config.masses, config.positions):
        w = 2 * z * mp.mpf(p)
        q = mp.mpf(q)
        a, b = a - w * (a + b * mp.exp(-q)), b + w * (a * mp.exp(q) + b)
    return a


class TestJostSolutions:
    """Jost 해와 Wronskian 테스트"""

    def test_plus_solution_left_of_unit_peakon(self, unit_peakon):
        # When
        jost = jost_solution(unit_peakon, JostDirection.PLUS)

        # Then: x<0 에서 φ₊ = 2z e^{x/2} + (1−2z) e^{−x/2}
        a, b = jost.coefficients[0]
        assert a(0.3) == pytest.approx(0.6)
        assert b(0.3) == pytest.approx(0.4)
        assert jost(0.3, -1.0) == pytest.approx(0.6 * math.exp(-0.5) + 0.4 * math.exp(0.5))

    def test_free_at_zero_spectral_parameter(self, rng, make_config):
        config = make_config(rng, 4, signed=True)
        for x in (-3.0, 0.1, 2.5):
            assert jost_solution(config, JostDirection.MINUS)(0.0, x) == pytest.approx(math.exp(x / 2))
            assert jost_solution(config, JostDirection.PLUS)(0.0, x) == pytest.approx(math.exp(-x / 2))

    def test_minus_solution_at_eigenvalue(self):
        a = 0.7
        jost = jost_solution(PeakonConfig.from_arrays([1.0], [a]), JostDirection.MINUS)
        assert jost(0.5, 0.0) == pytest.approx(1.0)
        assert jost(0.5, 2.0) == pytest.approx(math.exp(a - 1.0))

    def test_wronskian_examples(self, unit_peakon, antipeakon_pair, rng, make_config):
        np.testing.assert_allclose(wronskian_polynomial(unit_peakon).coef, [1.0, -2.0])
        w = wronskian_polynomial(antipeakon_pair)
        np.testing.assert_allclose(w.coef, [1.0, 0.0, -4.0 * hamiltonian(antipeakon_pair)], atol=1e-12)
        assert wronskian_polynomial(make_config(rng, 5, signed=True))(0.0) == pytest.approx(1.0)

    def test_wronskian_is_x_independent(self, rng, make_config):
        # Given
        config = make_config(rng, 3, signed=True)
        plus = jost_solution(config, JostDirection.PLUS)
        minus = jost_solution(config, JostDirection.MINUS)
        z = 0.37

        # When
        values = [
            plus(z, x) * minus.derivative(z, x) - plus.derivative(z, x) * minus(z, x)
            for x in (-4.0, -0.05, 0.3, 4.0)
        ]

        # Then
        np.testing.assert_allclose(values, wronskian_polynomial(config)(z), rtol=1e-10)


class TestEigenvalues:
    """고유값 계산 테스트"""

    def test_single_peakon(self):
        np.testing.assert_allclose(eigenvalues(PeakonConfig.from_arrays([1.7], [2.0])), [1.0 / 3.4])

    def test_mass_scaling(self, rng, make_config):
        config = make_config(rng, 5, signed=True)
        np.testing.assert_allclose(
            np.sort(eigenvalues(config.scale_masses(2.5))), np.sort(eigenvalues(config) / 2.5), rtol=1e-10
        )

    def test_positive_masses_give_positive_spectrum(self, rng, make_config):
        for _ in range(5):
            assert np.all(eigenvalues(make_config(rng, 6)) > 0.0)

    def test_trace_formulas(self, rng, make_config):
        config = make_config(rng, 6, signed=True)
        sigma = eigenvalues(config)
        scale = float(np.sum(np.abs(1.0 / sigma)))
        assert np.sum(1.0 / sigma) == pytest.approx(2.0 * np.sum(config.masses), abs=1e-10 * scale)
        assert np.sum(1.0 / sigma ** 2) == pytest.approx(8.0 * hamiltonian(config), rel=1e-9)

    def test_roots_are_polished(self, rng, make_config):
        config = make_config(rng, 8)
        w = wronskian_polynomial(config)
        norm = float(np.sum(np.abs(w.coef)))
        for lam in eigenvalues(config):
            scale = float(np.sum(np.abs(w.coef) * abs(lam) ** np.arange(len(w.coef))))
            assert abs(w(lam)) <= 1e-12 * max(norm, scale)

    def test_empty_config_rejected(self):
        with pytest.raises(InvalidInputError):
            eigenvalues(PeakonConfig())


class TestNormingAndCoupling:
    """노밍 상수와 결합 상수 테스트"""

    @pytest.mark.parametrize("a", [0.0, -1.3, 2.2])
    def test_single_peakon_constants(self, a):
        config = PeakonConfig.from_arrays([1.0], [a])
        sigma = eigenvalues(config)
        assert norming_constants(config, sigma)[0] == pytest.approx(math.exp(-a), rel=1e-12)
        assert coupling_constants(config, sigma)[0] == pytest.approx(math.exp(-a), rel=1e-12)

    def test_gammas_positive(self, rng, make_config):
        config = make_config(rng, 6, signed=True)
        assert np.all(norming_constants(config, eigenvalues(config)) > 0.0)

    def test_residues_match_norming_constants(self, rng, make_config):
        # Given
        config = make_config(rng, 4)
        sigma = eigenvalues(config)
        gammas = norming_constants(config, sigma)
        rep = continued_fraction_representation(config)

        # When: λ 근방에서 나머지 극을 뺀 (λ − z) M(z)
        for k, (lam, gamma) in enumerate(zip(sigma, gammas)):
            z = lam + 1e-6j * abs(lam)
            rest = sum(g / (s - z) for j, (s, g) in enumerate(zip(sigma, gammas)) if j != k)
            residue = ((lam - z) * (weyl_eval(rep, z) - rest)).real

            # Then
            assert residue == pytest.approx(gamma, rel=1e-6)

    def test_rejects_non_eigenvalue(self, unit_peakon):
        with pytest.raises(NotAnEigenvalueError):
            norming_constants(unit_peakon, [0.3])
        with pytest.raises(NotAnEigenvalueError):
            coupling_constants(unit_peakon, [0.3])

    def test_translation_rescales_couplings(self, rng, make_config):
        config = make_config(rng, 4, signed=True)
        sigma = eigenvalues(config)
        base = coupling_constants(config, sigma)
        shifted = coupling_constants(config.translate(0.8), sigma)
        np.testing.assert_allclose(shifted, base * math.exp(-0.8), rtol=1e-9)

    def test_two_peakon_coupling_matches_brute_force(self):
        config = PeakonConfig.from_arrays([1.3, -0.6], [-0.4, 1.1])
        sigma = eigenvalues(config)
        for lam, c in zip(sigma, coupling_constants(config, sigma)):
            assert c == pytest.approx(brute_force_coupling(config, lam), rel=1e-10)

    def test_widely_separated_staircase(self):
        # Given: 간격 20 → φ₋ 의 성장 모드가 감쇠 모드를 e^{20} 배 압도
        config = PeakonConfig.from_arrays([3.0, 2.0, 1.0], [-10.0, 0.0, 10.0])

        # When
        data = spectral_data(config)

        # Then
        assert all(g > 0.0 for g in data.gammas)
        for lam, c in zip(data.eigenvalues, data.couplings):
            assert c == pytest.approx(brute_force_coupling(config, lam), rel=1e-9)

    def test_rounded_eigenvalues_accepted(self):
        # Given
        config = PeakonConfig.from_arrays([3.0, 2.0, 1.0], [-10.0, 0.0, 10.0])
        sigma = eigenvalues(config)
        base = coupling_constants(config, sigma)

        for k in (-2, -1, 1, 2):
            # When: 고유값에서 몇 ulp 벗어난 입력
            nearby = [lam + k * np.spacing(lam) for lam in sigma]

            # Then
            np.testing.assert_allclose(coupling_constants(config, nearby), base, rtol=1e-12)
            np.testing.assert_allclose(
                norming_constants(config, nearby), norming_constants(config, sigma), rtol=1e-12
            )

    def test_eigenvalues_are_roots_to_full_precision(self):
        config = PeakonConfig.from_arrays([3.0, 2.0, 1.0], [-10.0, 0.0, 10.0])
        mp = mpmath.MPContext()
        mp.dps = 60
        for lam in eigenvalues(config):
            exact = mp.findroot(lambda z: brute_force_wronskian(config, z, mp), mp.mpf(lam))
            assert lam == pytest.approx(float(exact), rel=4 * np.finfo(float).eps)

    def test_spectral_data(self, unit_peakon):
        data = spectral_data(unit_peakon)
        assert isinstance(data, SpectralData)
        assert data.eigenvalues == pytest.approx((0.5,))
        assert data.gammas == pytest.approx((1.0,))
        assert data.couplings == pytest.approx((1.0,))


class TestStringCoefficients:
    """string 계수 테스트"""

    def test_unit_peakon(self, unit_peakon):
        m, l = string_coefficients(unit_peakon)
        np.testing.assert_allclose(m, [8.0])
        np.testing.assert_allclose(l, [0.5, 0.5])

    def test_lengths_sum_to_one(self, rng, make_config):
        for _ in range(10):
            _, l = string_coefficients(make_config(rng, 7, signed=True))
            assert float(np.sum(l)) == pytest.approx(1.0, abs=1e-14)

    def test_masses_match_liouville_string(self, rng, make_config):
        config = make_config(rng, 5, signed=True)
        m, _ = string_coefficients(config)
        np.testing.assert_allclose(m, liouville_string(momentum_measure(config)).weights, rtol=1e-13)

    def test_dipole_weights(self):
        state = ConservativeState(
            singular_energy=DiscreteMeasure.from_arrays([0.4], [2.0]), total_energy=2.0
        )
        np.testing.assert_allclose(dipole_weights(state), [8.0 * math.cosh(0.2) ** 2])


class TestWeylFunction:
    """Weyl 함수 표현 테스트"""

    def test_unit_peakon_both_forms(self, unit_peakon):
        cf = continued_fraction_representation(unit_peakon)
        pf = partial_fraction_representation(spectral_data(unit_peakon))
        expected = 1.0 / (0.5 - 1j)
        assert weyl_eval(cf, 1j) == pytest.approx(expected, abs=1e-12)
        assert weyl_eval(pf, 1j) == pytest.approx(expected, abs=1e-12)

    def test_forms_agree(self, rng, make_config):
        # Given
        for n in range(1, 9):
            config = make_config(rng, n, signed=bool(n % 2))
            cf = continued_fraction_representation(config)
            pf = partial_fraction_representation(spectral_data(config))

            # When / Then
            for z in random_points(rng, 100):
                a, b = weyl_eval(cf, z), weyl_eval(pf, z)
                assert abs(a - b) <= 1e-10 * max(abs(a), 1.0)

    def test_herglotz_symmetry(self, rng, make_config):
        rep = continued_fraction_representation(make_config(rng, 5, signed=True))
        for z in random_points(rng, 10):
            assert weyl_eval(rep, z.conjugate()) == pytest.approx(weyl_eval(rep, z).conjugate())

    def test_stieltjes_property(self, rng, make_config):
        rep = continued_fraction_representation(make_config(rng, 6))
        for z in random_points(rng, 50):
            assert z.imag * weyl_eval(rep, z).imag >= 0.0

    def test_limit_definition(self, rng, make_config):
        config = make_config(rng, 4, signed=True)
        rep = continued_fraction_representation(config)
        for z in random_points(rng, 10):
            assert weyl_from_jost(config, z) == pytest.approx(weyl_eval(rep, z), rel=1e-8)

    def test_laurent_expansion(self, rng, make_config):
        # Given: zM − 1 = −Σ s_k z^{−k}
        config = make_config(rng, 4)
        data = spectral_data(config)
        s = moments(data.eigenvalues, data.gammas, 12, ExtendedField(30)).as_floats()
        z = 1000.0 + 0.0j

        # When
        lhs = z * weyl_eval(continued_fraction_representation(config), z) - 1.0
        rhs = -sum(sk / z ** k for k, sk in enumerate(s))

        # Then
        assert abs(lhs - rhs) <= 1e-8 * abs(rhs)

    def test_pole_is_rejected(self):
        rep = WeylRepresentation.partial_fraction([0.5], [1.0])
        with pytest.raises(InvalidInputError):
            weyl_eval(rep, 0.5)

    def test_conservative_state_spectrum(self):
        # Given: υ = 4H₀²δ₀, H₀ = 0.8
        h0 = 0.8
        state = ConservativeState(
            singular_energy=DiscreteMeasure.from_arrays([0.0], [4.0 * h0 ** 2]),
            total_energy=4.0 * h0 ** 2,
        )

        # When
        sigma = eigenvalues(state)

        # Then
        np.testing.assert_allclose(sigma, [-1.0 / (2 * h0), 1.0 / (2 * h0)])
        np.testing.assert_allclose(norming_constants(state, sigma), [0.5, 0.5], rtol=1e-12)
