"""
Direct integration of the multi-peakon / Calogero–Françoise Hamiltonian ODEs
with collision detection, plus the closed-form two-peakon solution.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from chpeakon.models.dynamics import (
    CollisionEvent, IntegrationOptions, Trajectory, TwoPeakonReduced,
)
from chpeakon.models.peakon import DiscreteMeasure, KernelParams, PeakonConfig, ConservativeState
from chpeakon.physics.peakon_core import (
    cf_hamiltonian, hamiltonian, kernel_derivative, kernel_value,
)
from chpeakon.utils.exceptions import BlowUpError, InvalidInputError, StepSizeUnderflowError
from chpeakon.utils.logger import get_logger

MODULE = "dynamics"

logger = get_logger(__name__)


def _vector_field(params: KernelParams, p: np.ndarray, q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    d = q[:, None] - q[None, :]
    if params.is_peakon:
        kernel = np.exp(-np.abs(d))
        dq = kernel @ p
        dp = p * ((np.sign(d) * kernel) @ p)
    else:
        dq = kernel_value(params, d) @ p
        dp = -p * (kernel_derivative(params, d) @ p)
    return dq, dp


def rhs(params: KernelParams, config: PeakonConfig) -> Tuple[np.ndarray, np.ndarray]:
    """canonical equations dqₙ = ∂H/∂pₙ, dpₙ = −∂H/∂qₙ (sgn(0) = 0)"""
    q = config.positions
    if len(np.unique(q)) != len(q):
        raise InvalidInputError("coincident peak positions", MODULE)
    if config.n == 0:
        return np.zeros(0), np.zeros(0)
    return _vector_field(params, config.masses, q)


def _collision_event(
    params: KernelParams, t: float, y: np.ndarray, n: int
) -> CollisionEvent:
    q, p = y[:n], y[n:]
    gaps = np.diff(q)
    i = int(np.argmin(gaps))
    dq, _ = _vector_field(params, p, q)
    rate = dq[i + 1] - dq[i]
    gap = float(gaps[i])
    # gap ≈ a (t^× − t)² near a peakon–antipeakon collision
    eta = 2.0 * gap / -rate if rate < 0.0 else 0.0
    return CollisionEvent(time=t + eta, detected_at=t, indices=(i, i + 1), gap=gap)


def integrate(
    params: KernelParams,
    config0: PeakonConfig,
    t_final: float,
    options: Optional[IntegrationOptions] = None,
) -> Trajectory:
    """적응형 임베디드 Runge–Kutta 적분 (충돌 시 이벤트와 함께 종료)"""
    options = options or IntegrationOptions()
    if t_final < 0.0:
        raise InvalidInputError("t_final must be nonnegative", MODULE)
    n = config0.n
    h0 = cf_hamiltonian(params, config0)

    if t_final == 0.0 or n == 0:
        times = (0.0, t_final) if t_final > 0.0 else (0.0,)
        states = (config0,) * len(times)
        return Trajectory(times=times, states=states, hamiltonians=(h0,) * len(times))

    def fun(_t, y):
        dq, dp = _vector_field(params, y[n:], y[:n])
        return np.concatenate([dq, dp])

    def gap_event(_t, y):
        return float(np.min(np.diff(y[:n]))) - options.collision_gap

    def mass_event(_t, y):
        return options.collision_mass - float(np.max(np.abs(y[n:])))

    gap_event.terminal = True
    gap_event.direction = -1
    mass_event.terminal = True
    mass_event.direction = -1
    events = [mass_event] + ([gap_event] if n > 1 else [])

    t_eval = np.linspace(0.0, t_final, options.samples) if options.samples else None
    y0 = np.concatenate([config0.positions, config0.masses])
    sol = solve_ivp(
        fun, (0.0, t_final), y0,
        method=options.method, rtol=options.rtol, atol=options.atol,
        max_step=options.max_step, events=events, t_eval=t_eval, dense_output=True,
    )
    if sol.status == -1:
        raise StepSizeUnderflowError(f"integration failed: {sol.message}", MODULE)

    times = list(sol.t)
    ys = [sol.y[:, k] for k in range(sol.y.shape[1])]
    collision = None
    if sol.status == 1:
        hits = [(te[0], ye[0]) for te, ye in zip(sol.t_events, sol.y_events) if len(te)]
        t_hit, y_hit = min(hits, key=lambda item: item[0])
        if n > 1:
            collision = _collision_event(params, float(t_hit), y_hit, n)
        if not times or t_hit > times[-1]:
            times.append(float(t_hit))
            ys.append(y_hit)
        logger.warning(
            f"collision detected at t={t_hit:.12g}"
            + (f", extrapolated instant {collision.time:.12g}" if collision else "")
        )

    states = tuple(PeakonConfig.from_arrays(y[n:], y[:n]) for y in ys)
    energies = tuple(cf_hamiltonian(params, s) for s in states)
    momenta = np.array([np.sum(s.masses) for s in states])
    scale_h = max(abs(h0), np.finfo(float).tiny)
    scale_p = max(abs(momenta[0]), 1.0)
    trajectory = Trajectory(
        times=tuple(float(t) for t in times),
        states=states,
        hamiltonians=energies,
        events=(collision,) if collision else (),
        hamiltonian_drift=float(np.max(np.abs(np.array(energies) - h0)) / scale_h),
        momentum_drift=float(np.max(np.abs(momenta - momenta[0])) / scale_p),
    )
    logger.info(
        f"integrated N={n} to t={trajectory.times[-1]:.6g} in {len(times)} samples, "
        f"relative H drift {trajectory.hamiltonian_drift:.3e}"
    )
    return trajectory


# ---------------------------------------------------------------------------
# Two-peakon closed form
# ---------------------------------------------------------------------------

def _require_pair(config: PeakonConfig) -> None:
    if config.n != 2:
        raise InvalidInputError(f"two-peakon formulas need N=2, got N={config.n}", MODULE)


def two_peakon_reduced(config: PeakonConfig) -> TwoPeakonReduced:
    _require_pair(config)
    (p1, p2), (q1, q2) = config.masses, config.positions
    h = hamiltonian(config)
    P0 = p1 + p2
    return TwoPeakonReduced(
        P0=P0, P=p2 - p1, Q=q2 - q1, H0sq=h, h0=math.sqrt(max(4.0 * h - P0 ** 2, 0.0)),
    )


def _alpha(r: TwoPeakonReduced) -> float:
    return (r.P - r.h0) / (r.P + r.h0)


def reduced_P(r: TwoPeakonReduced, t: float) -> float:
    rho = _alpha(r) * math.exp(-r.h0 * t)
    return r.h0 * (1.0 + rho) / (1.0 - rho)


def reduced_Q(r: TwoPeakonReduced, t: float) -> float:
    alpha = _alpha(r)
    beta = (r.P0 + r.h0) / (r.P0 - r.h0)
    rho = alpha * math.exp(-r.h0 * t)
    return (
        r.Q + r.h0 * t
        + math.log(abs(1.0 - beta * rho)) + math.log(abs(1.0 - rho / beta))
        - math.log(abs(1.0 - beta * alpha)) - math.log(abs(1.0 - alpha / beta))
    )


def _centre_shift(r: TwoPeakonReduced, t: float) -> float:
    """(q₁+q₂)(t) − (q₁+q₂)(0) = P₀ ∫₀ᵗ (1 + e^{−Q}) ds"""
    if r.P0 == 0.0 or t == 0.0:
        return 0.0
    value, _ = quad(lambda s: 1.0 + math.exp(-reduced_Q(r, s)), 0.0, t,
                    epsabs=1e-14, epsrel=1e-13, limit=200)
    return r.P0 * value


def two_peakon_blowup_time(init: PeakonConfig) -> Optional[float]:
    """t^× = (1/h₀) log((P(0)−h₀)/(P(0)+h₀)), 같은 부호 질량이면 None

    A negative value means the pair collided in the past.
    """
    r = two_peakon_reduced(init)
    p1, p2 = r.masses
    if p1 * p2 >= 0.0:
        return None
    return math.log(_alpha(r)) / r.h0


def two_peakon_exact(init: PeakonConfig, t: float) -> PeakonConfig:
    """닫힌 형식 P(t), Q(t) 와 질량중심 구적으로 (p, q)(t) 복원"""
    r = two_peakon_reduced(init)
    t_cross = two_peakon_blowup_time(init)
    if t_cross is not None and (0.0 < t_cross <= t or t <= t_cross < 0.0):
        raise BlowUpError(f"t={t} lies at or beyond the blow-up time {t_cross}", t_cross, MODULE)
    if t == 0.0:
        return init
    P, Q = reduced_P(r, t), reduced_Q(r, t)
    S = float(np.sum(init.positions)) + _centre_shift(r, t)
    return PeakonConfig.from_arrays(
        [0.5 * (r.P0 - P), 0.5 * (r.P0 + P)], [0.5 * (S - Q), 0.5 * (S + Q)]
    )


def two_peakon_collision_state(config0: PeakonConfig) -> ConservativeState:
    """혼합 부호 쌍의 충돌 순간 상태: 질량 P₀ 의 peak + υ = (4H − 2P₀²)δ_x"""
    t_cross = two_peakon_blowup_time(config0)
    if t_cross is None:
        raise InvalidInputError("same-sign pairs never collide", MODULE)
    r = two_peakon_reduced(config0)
    x = 0.5 * (float(np.sum(config0.positions)) + _centre_shift(r, t_cross))
    energy = 4.0 * r.H0sq
    singular = energy - 2.0 * r.P0 ** 2
    peaks = PeakonConfig.from_arrays([r.P0], [x]) if r.P0 != 0.0 else PeakonConfig()
    return ConservativeState(
        peaks=peaks,
        singular_energy=DiscreteMeasure.from_arrays([x], [singular]) if singular > 0.0 else DiscreteMeasure(),
        total_energy=energy,
    )
