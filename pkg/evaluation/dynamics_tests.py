import math

import numpy as np
import pytest

from chpeakon.models.dynamics import IntegrationOptions
from chpeakon.models.peakon import KernelBranch, KernelParams, Peak, PeakonConfig
from chpeakon.physics.dynamics import (
    integrate, reduced_P, reduced_Q, rhs, two_peakon_blowup_time,
    two_peakon_collision_state, two_peakon_exact, two_peakon_reduced,
)
from chpeakon.physics.peakon_core import gap_energy, hamiltonian
from chpeakon.physics.spectral_forward import eigenvalues
from chpeakon.utils.exceptions import BlowUpError, InvalidInputError

H0_PAIR = 2.0 * math.sqrt(1.0 - math.exp(-2.0))


@pytest.fixture
def peakon_kernel():
    return KernelParams.peakon()


class TestRightHandSide:
    """운동 방정식 우변 테스트"""

    def test_lone_peakon_moves_at_its_height(self, peakon_kernel, unit_peakon):
        dq, dp = rhs(peakon_kernel, unit_peakon)
        np.testing.assert_allclose(dq, [1.0])
        np.testing.assert_allclose(dp, [0.0])

    def test_antipeakon_pair(self, peakon_kernel, antipeakon_pair):
        # When
        dq, dp = rhs(peakon_kernel, antipeakon_pair)

        # Then
        e = math.exp(-2.0)
        np.testing.assert_allclose(dq, [1.0 - e, e - 1.0])
        np.testing.assert_allclose(dp, [e, -e])

    def test_general_kernel_path_agrees(self, antipeakon_pair):
        # Given: 일반 커널 경로를 강제 (ν 가 1 과 미세하게 다름)
        params = KernelParams(branch=KernelBranch.HYPERBOLIC, a=0.0, b_plus=1.0, b_minus=-1.0,
                              nu=1.0 + 1e-15)
        assert not params.is_peakon

        # When
        dq, dp = rhs(params, antipeakon_pair)

        # Then
        expected_dq, expected_dp = rhs(KernelParams.peakon(), antipeakon_pair)
        np.testing.assert_allclose(dq, expected_dq, atol=1e-13)
        np.testing.assert_allclose(dp, expected_dp, atol=1e-13)

    def test_rejects_coincident_positions(self, peakon_kernel):
        config = PeakonConfig.model_construct(peaks=(Peak(p=1.0, q=0.0), Peak(p=2.0, q=0.0)))
        with pytest.raises(InvalidInputError):
            rhs(peakon_kernel, config)


class TestIntegrate:
    """적응형 적분 테스트"""

    def test_single_peakon_translates(self, peakon_kernel, unit_peakon):
        trajectory = integrate(peakon_kernel, unit_peakon, 3.0)
        assert trajectory.final.positions[0] == pytest.approx(3.0, abs=1e-10)
        assert trajectory.final.masses[0] == pytest.approx(1.0, abs=1e-12)
        assert not trajectory.collided

    def test_hamiltonian_drift(self, peakon_kernel):
        config = PeakonConfig.from_arrays([1.0, 2.0], [-2.0, 2.0])
        trajectory = integrate(peakon_kernel, config, 10.0, IntegrationOptions(samples=51))
        assert len(trajectory.times) == 51
        assert trajectory.hamiltonian_drift <= 1e-9
        assert trajectory.momentum_drift <= 1e-9

    def test_antipeakon_collision_event(self, peakon_kernel, antipeakon_pair):
        # When
        trajectory = integrate(peakon_kernel, antipeakon_pair, 5.0)

        # Then
        assert trajectory.collided
        event = trajectory.events[0]
        assert event.indices == (0, 1)
        assert event.gap <= 1e-8
        assert event.detected_at < event.time
        assert event.time == pytest.approx(two_peakon_blowup_time(antipeakon_pair), abs=1e-6)
        assert event.time == pytest.approx(1.7824516, abs=1e-6)

    def test_zero_time_is_trivial(self, peakon_kernel, antipeakon_pair):
        trajectory = integrate(peakon_kernel, antipeakon_pair, 0.0)
        assert trajectory.times == (0.0,)
        assert trajectory.final == antipeakon_pair

    def test_rejects_negative_time(self, peakon_kernel, unit_peakon):
        with pytest.raises(InvalidInputError):
            integrate(peakon_kernel, unit_peakon, -1.0)

    def test_six_peakon_conservation_with_defaults(self, peakon_kernel):
        # Given: 질량 비 50, 빠른 peak 이 느린 peak 들을 모두 추월
        config = PeakonConfig.from_arrays(
            [4.9, 0.1, 3.2, 0.4, 2.5, 1.1], [-4.0, -2.6, -1.1, 0.3, 1.9, 3.5]
        )

        # When
        trajectory = integrate(peakon_kernel, config, 10.0)

        # Then
        assert not trajectory.collided
        assert trajectory.hamiltonian_drift <= 1e-9
        assert trajectory.momentum_drift <= 1e-9

    @pytest.mark.slow
    def test_random_same_sign_conservation(self, peakon_kernel, rng, make_config):
        for n in range(1, 7):
            config = make_config(rng, n)
            trajectory = integrate(peakon_kernel, config, 10.0)
            assert trajectory.hamiltonian_drift <= 1e-9
            assert trajectory.momentum_drift <= 1e-9

    def test_snapshots_are_isospectral(self, peakon_kernel):
        config = PeakonConfig.from_arrays([2.0, 1.0, 0.5], [-1.0, 0.0, 1.5])
        trajectory = integrate(peakon_kernel, config, 4.0, IntegrationOptions(samples=5))
        reference = eigenvalues(config)
        for state in trajectory.states:
            np.testing.assert_allclose(eigenvalues(state), reference, rtol=1e-6)


class TestTwoPeakon:
    """two-peakon 닫힌 형식 테스트"""

    def test_blowup_time(self, antipeakon_pair):
        # Given
        t_cross = two_peakon_blowup_time(antipeakon_pair)

        # Then
        expected = math.log((-2.0 - H0_PAIR) / (-2.0 + H0_PAIR)) / H0_PAIR
        assert t_cross == pytest.approx(expected, rel=1e-14)
        assert t_cross == pytest.approx(1.7824516, abs=1e-7)
        assert two_peakon_blowup_time(PeakonConfig.from_arrays([1.0, 2.0], [0.0, 1.0])) is None
        assert two_peakon_blowup_time(PeakonConfig.from_arrays([2.0, -1.0], [-1.0, 1.0])) > 0.0

    def test_reduced_variables(self, antipeakon_pair):
        r = two_peakon_reduced(antipeakon_pair)
        assert r.P0 == 0.0
        assert r.h0 == pytest.approx(H0_PAIR)
        assert reduced_P(r, 0.0) == pytest.approx(r.P)
        assert reduced_Q(r, 0.0) == pytest.approx(r.Q)

    def test_identity_at_zero(self, antipeakon_pair):
        assert two_peakon_exact(antipeakon_pair, 0.0) == antipeakon_pair

    def test_reduced_system(self):
        # Given: Q' = P(1 − e^{−Q}), P' = ½(P₀² − P²)e^{−Q}
        r = two_peakon_reduced(PeakonConfig.from_arrays([1.0, 2.0], [0.0, 1.0]))
        t, h = 0.5, 1e-5

        # When
        dP = (reduced_P(r, t + h) - reduced_P(r, t - h)) / (2.0 * h)
        dQ = (reduced_Q(r, t + h) - reduced_Q(r, t - h)) / (2.0 * h)

        # Then
        P, Q = reduced_P(r, t), reduced_Q(r, t)
        assert dQ == pytest.approx(P * (1.0 - math.exp(-Q)), abs=1e-6)
        assert dP == pytest.approx(0.5 * (r.P0 ** 2 - P ** 2) * math.exp(-Q), abs=1e-6)

    @pytest.mark.parametrize(
        "masses,positions,t",
        [([1.0, 2.0], [0.0, 1.0], 1.0), ([1.0, -1.0], [-1.0, 1.0], 1.0), ([2.0, -1.0], [-1.0, 1.0], 0.3)],
    )
    def test_matches_ode(self, peakon_kernel, masses, positions, t):
        # Given
        init = PeakonConfig.from_arrays(masses, positions)

        # When
        exact = two_peakon_exact(init, t)
        numeric = integrate(peakon_kernel, init, t).final

        # Then
        np.testing.assert_allclose(exact.positions, numeric.positions, rtol=1e-8, atol=1e-8)
        np.testing.assert_allclose(exact.masses, numeric.masses, rtol=1e-8, atol=1e-8)

    def test_matches_ode_close_to_blowup(self, peakon_kernel, antipeakon_pair):
        t = two_peakon_blowup_time(antipeakon_pair) - 0.1
        exact = two_peakon_exact(antipeakon_pair, t)
        numeric = integrate(peakon_kernel, antipeakon_pair, t).final
        np.testing.assert_allclose(exact.positions, numeric.positions, rtol=1e-8, atol=1e-8)
        np.testing.assert_allclose(exact.masses, numeric.masses, rtol=1e-8)

    def test_energy_identity_along_solution(self):
        init = PeakonConfig.from_arrays([1.0, 2.0], [0.0, 1.0])
        for t in (0.5, 2.0, 5.0):
            r = two_peakon_reduced(two_peakon_exact(init, t))
            assert r.H0sq == pytest.approx(hamiltonian(init), rel=1e-10)

    def test_rejects_times_beyond_blowup(self, antipeakon_pair):
        with pytest.raises(BlowUpError) as info:
            two_peakon_exact(antipeakon_pair, 2.0)
        assert info.value.blowup_time == pytest.approx(two_peakon_blowup_time(antipeakon_pair))

    def test_gap_energy_concentrates(self, antipeakon_pair):
        # Given: 충돌 직전
        t = two_peakon_blowup_time(antipeakon_pair) - 1e-3
        config = two_peakon_exact(antipeakon_pair, t)

        # When
        ratio = gap_energy(config, 0) / (4.0 * hamiltonian(antipeakon_pair))

        # Then
        assert ratio == pytest.approx(1.0, abs=1e-3)
        assert config.positions[1] - config.positions[0] < 1e-5

    def test_collision_state(self, antipeakon_pair):
        state = two_peakon_collision_state(antipeakon_pair)
        assert state.peaks.n == 0
        np.testing.assert_allclose(state.singular_energy.positions, [0.0], atol=1e-14)
        assert state.singular_energy.total == pytest.approx(4.0 * hamiltonian(antipeakon_pair))

    def test_asymmetric_collision_state(self):
        init = PeakonConfig.from_arrays([2.0, -1.0], [-1.0, 1.0])
        state = two_peakon_collision_state(init)
        assert state.peaks.n == 1
        assert state.peaks.masses[0] == pytest.approx(1.0)
        assert state.total_energy == pytest.approx(4.0 * hamiltonian(init))
        assert state.singular_energy.total == pytest.approx(4.0 * hamiltonian(init) - 2.0)
