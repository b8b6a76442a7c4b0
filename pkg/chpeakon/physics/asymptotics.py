"""
Long-time peakon resolution: phase shifts, the asymptotic train of single
peakons along the rays x = t/(2λ), and its distance to the exact solution.
"""

import math
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.typing import ArrayLike

from chpeakon.models.peakon import PeakonConfig
from chpeakon.models.spectral import PhaseShiftTable, SpectralData
from chpeakon.physics.isospectral_flow import locate_collisions, solve_conservative
from chpeakon.physics.peakon_core import eval_profile
from chpeakon.physics.spectral_forward import spectral_data
from chpeakon.utils.config import get_settings
from chpeakon.utils.exceptions import InvalidInputError
from chpeakon.utils.logger import get_logger

MODULE = "asymptotics"

logger = get_logger(__name__)


def phase_shifts(sigma: Sequence[float], couplings: Sequence[float]) -> PhaseShiftTable:
    """ξ_λ = ln|c_λ| + Σ_{k≠λ} sgn(1/λ − 1/k)·ln|1 − λ/k|"""
    if len(sigma) != len(couplings):
        raise InvalidInputError("one coupling constant per eigenvalue is required", MODULE)
    if len(set(sigma)) != len(sigma) or any(lam == 0.0 for lam in sigma):
        raise InvalidInputError("eigenvalues must be distinct and nonzero", MODULE)
    if any(c == 0.0 for c in couplings):
        raise InvalidInputError("coupling constants must be nonzero", MODULE)
    shifts = []
    for lam, c in zip(sigma, couplings):
        xi = float(mpmath.log(abs(c)))
        for k in sigma:
            if k != lam:
                xi += math.copysign(1.0, 1.0 / lam - 1.0 / k) * math.log(abs(1.0 - lam / k))
        shifts.append(xi)
    return PhaseShiftTable(eigenvalues=tuple(sigma), shifts=tuple(shifts))


def asymptotic_rays(
    sigma: Sequence[float], shifts: PhaseShiftTable, t: float
) -> List[Tuple[float, float, float]]:
    """(λ, 위치 t/(2λ) − ξ_λ, 높이 1/(2λ))"""
    return [
        (lam, t / (2.0 * lam) - xi, 1.0 / (2.0 * lam))
        for lam, xi in zip(sigma, shifts.shifts)
    ]


def asymptotic_profile(sigma: Sequence[float], shifts: PhaseShiftTable, x: ArrayLike, t: float):
    """Σ_λ (1/(2λ))·e^{−|x − t/(2λ) + ξ_λ|}"""
    xs = np.asarray(x, dtype=float)
    total = np.zeros_like(xs)
    for _, position, height in asymptotic_rays(sigma, shifts, t):
        total = total + height * np.exp(-np.abs(xs - position))
    return total if total.ndim else float(total)


def peak_positions(config: PeakonConfig) -> List[Tuple[float, float]]:
    """정확한 해의 peak 위치와 높이 u(qₙ)"""
    heights = eval_profile(config, config.positions)
    return [(float(q), float(u)) for q, u in zip(config.positions, heights)]


def _check_past_collisions(data: SpectralData, t: float, horizon: float) -> None:
    """혼합 부호 스펙트럼: t 가 마지막 충돌 이후인지 확인"""
    sigma = data.eigenvalues
    if min(sigma) > 0.0 or max(sigma) < 0.0:
        return
    far = t + horizon if t >= 0.0 else t - horizon
    collisions = locate_collisions(data, *sorted((0.0, far)))
    ahead = [s for s, _ in collisions if abs(s) > abs(t) and s * far > 0.0]
    if ahead:
        raise InvalidInputError(
            f"t={t!r} precedes a collision at t={ahead[0]!r}; "
            "the peakon train forms only after the last collision",
            MODULE,
        )
    if collisions:
        logger.info(f"{len(collisions)} collision(s) before t={t:.6g}")


def resolution_error(
    config0: PeakonConfig, t: float, data: Optional[SpectralData] = None
) -> float:
    """sup_x |u(x,t) − u_asym(x,t)| on [min ray − margin, max ray + margin]"""
    data = data or spectral_data(config0)
    settings = get_settings()
    _check_past_collisions(data, t, settings.collision_horizon)
    table = phase_shifts(data.eigenvalues, data.couplings)
    rays = [position for _, position, _ in asymptotic_rays(data.eigenvalues, table, t)]
    grid = np.arange(
        min(rays) - settings.grid_margin,
        max(rays) + settings.grid_margin + 0.5 * settings.grid_step,
        settings.grid_step,
    )
    state = solve_conservative(config0, t, data)
    exact = eval_profile(state.peaks, grid)
    error = float(np.max(np.abs(exact - asymptotic_profile(data.eigenvalues, table, grid, t))))
    logger.debug(f"resolution error at t={t:.6g}: {error:.3e} on {len(grid)} points")
    return error
