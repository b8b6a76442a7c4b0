"""
Conservative multi-peakon flow solved on the spectral side.

The eigenvalues are constant and every norming / coupling constant decays as
e^{−t/(2λ)}; positions and masses at time t come from the moment inversion.
Collisions show up as a vanishing Stieltjes denominator Δ1[n].
"""

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from chpeakon.models.peakon import ConservativeState, DiscreteMeasure, PeakonConfig, interface_atoms
from chpeakon.models.spectral import SpectralData, WeylRepresentation
from chpeakon.physics.dynamics import two_peakon_collision_state
from chpeakon.physics.moment_inverse import (
    invert_spectral, spectral_hankel_table, working_precision,
)
from chpeakon.physics.peakon_core import conservative_state, hamiltonian
from chpeakon.physics.spectral_forward import continued_fraction_representation, spectral_data
from chpeakon.utils.arithmetic import ExtendedField
from chpeakon.utils.config import get_settings
from chpeakon.utils.exceptions import CollisionError, InvalidInputError
from chpeakon.utils.logger import get_logger

MODULE = "isospectral-flow"

logger = get_logger(__name__)


def evolve_spectral(base: SpectralData, t: float) -> SpectralData:
    """γ_λ(t) = γ_λ(0)e^{−t/(2λ)}, c_λ(t) = c_λ(0)e^{−t/(2λ)}

    Values outside the float range stay mpmath numbers.
    """
    if t == 0.0:
        return base
    field = ExtendedField(get_settings().hankel_dps)
    ctx = field.ctx
    decay = [ctx.exp(-ctx.mpf(t) / (2 * ctx.mpf(lam))) for lam in base.eigenvalues]
    return SpectralData(
        eigenvalues=base.eigenvalues,
        gammas=tuple(field.to_machine(ctx.mpf(g) * d) for g, d in zip(base.gammas, decay)),
        couplings=(
            tuple(field.to_machine(ctx.mpf(c) * d) for c, d in zip(base.couplings, decay))
            if base.couplings is not None else None
        ),
    )


def _evolved_gammas(base: SpectralData, t: float, field: ExtendedField) -> list:
    # in the field, so large |t/λ| neither underflows nor overflows
    ctx = field.ctx
    return [ctx.mpf(g) * ctx.exp(-ctx.mpf(t) / (2 * ctx.mpf(lam)))
            for lam, g in zip(base.eigenvalues, base.gammas)]


def collision_profile(base: SpectralData, n: int, t: float) -> float:
    """Δ1[n](t) / Δ̃1[n](t) ∈ [−1, 1]; 부호 변화가 충돌을 뜻함"""
    if not 1 <= n <= base.n:
        raise InvalidInputError(f"collision index must lie in 1..{base.n}", MODULE)
    settings = get_settings()
    scout = ExtendedField(settings.hankel_dps)
    dps = working_precision(base.eigenvalues, _evolved_gammas(base, t, scout), settings.hankel_dps)
    field = ExtendedField(dps)
    table = spectral_hankel_table(base.eigenvalues, _evolved_gammas(base, t, field), field, size=n)
    return float(table.delta1[n] / table.scale1[n])


def locate_collisions(
    base: SpectralData, t_start: float, t_end: float, samples: int = 401
) -> List[Tuple[float, int]]:
    """정규화된 Δ1[n] 의 부호 변화를 표본화하고 brentq 로 세밀화"""
    if not t_start < t_end:
        raise InvalidInputError("collision search needs t_start < t_end", MODULE)
    times = np.linspace(t_start, t_end, samples)
    found = []
    for n in range(1, base.n):
        f = lambda s, n=n: collision_profile(base, n, s)
        values = [f(s) for s in times]
        for k in range(samples - 1):
            if values[k] == 0.0:
                found.append((float(times[k]), n))
            elif values[k] * values[k + 1] < 0.0:
                root = brentq(f, times[k], times[k + 1], xtol=1e-13, rtol=4 * np.finfo(float).eps)
                found.append((float(root), n))
    found.sort()
    for time, n in found:
        logger.info(f"Δ1[{n}] changes sign at t={time:.12g}")
    return found


def antipeakon_collision_state(
    H0: float, center: float = 0.0
) -> Tuple[ConservativeState, WeylRepresentation]:
    """대칭 peakon–antipeakon 충돌 순간: u ≡ 0, υ = 4H₀²δ_center"""
    if not H0 > 0.0:
        raise InvalidInputError("H0 must be positive", MODULE)
    energy = 4.0 * H0 ** 2
    state = ConservativeState(
        singular_energy=DiscreteMeasure.from_arrays([center], [energy]),
        total_energy=energy,
    )
    return state, continued_fraction_representation(state)


def solve_conservative(
    config0: PeakonConfig, t: float, data: Optional[SpectralData] = None
) -> ConservativeState:
    """순방향 변환 → 시간 발전 → 역변환 (충돌 순간에는 특이 에너지 상태)"""
    if config0.n == 0:
        return conservative_state(config0)
    data = data or spectral_data(config0)
    settings = get_settings()
    scout = ExtendedField(settings.hankel_dps)
    try:
        return conservative_state(invert_spectral(data.eigenvalues, _evolved_gammas(data, t, scout)))
    except CollisionError as exc:
        p = config0.masses
        if config0.n == 2 and p[0] * p[1] < 0.0:
            logger.warning(f"two-peakon collision at t={t:.12g}: energy concentrates at a point")
            if p[0] + p[1] == 0.0:
                state, _ = antipeakon_collision_state(
                    math.sqrt(hamiltonian(config0)), float(np.mean(config0.positions))
                )
                return state
            return two_peakon_collision_state(config0)
        raise CollisionError(
            f"peakons {exc.index} and {exc.index + 1} collide at t={t!r}; "
            "the singular part is only reconstructed for two peakons",
            index=exc.index,
            time=t,
            determinant=exc.determinant,
            module=MODULE,
        ) from exc


def trace_identities(
    sigma: Sequence[float], state: Union[PeakonConfig, ConservativeState]
) -> Tuple[float, float, float, float]:
    """(Σ1/λ, ∫dω, Σ1/λ², 2∫dμ)"""
    lam = np.asarray(sigma, dtype=float)
    omega = sum(w for _, w, _ in interface_atoms(state))
    if isinstance(state, PeakonConfig):
        energy = 8.0 * hamiltonian(state)
    else:
        energy = 2.0 * state.total_energy
    return float(np.sum(1.0 / lam)), float(omega), float(np.sum(1.0 / lam ** 2)), float(energy)
