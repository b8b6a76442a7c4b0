"""
Inverse spectral transform through the Stieltjes moment problem.

moments → Hankel determinants → string coefficients (m, l) → peakons.
Float mode works in an mpmath context whose precision follows the dynamic
range of the spectral data; rational mode is exact.
"""

import math
from typing import Any, List, Optional, Sequence, Tuple

import mpmath

from chpeakon.models.peakon import PeakonConfig
from chpeakon.models.spectral import HankelTable, MomentSequence
from chpeakon.utils.arithmetic import (
    Arithmetic, ExtendedField, Field, RationalField, hankel_rows, make_field,
)
from chpeakon.utils.config import get_settings
from chpeakon.utils.exceptions import CollisionError, InvalidInputError, NumericalError
from chpeakon.utils.logger import get_logger

MODULE = "moment-inverse"

logger = get_logger(__name__)

# digits of l_N that must survive the subtraction 1 − Σ lₙ
_RETAINED_DIGITS = 20
_MAX_ATTEMPTS = 4


def _field(field: Optional[Field], arithmetic: Optional[Arithmetic] = None) -> Field:
    if field is not None:
        return field
    settings = get_settings()
    return make_field(arithmetic or settings.arithmetic, settings.hankel_dps)


def moments(
    sigma: Sequence[Any], gammas: Sequence[Any], K: int, field: Optional[Field] = None
) -> MomentSequence:
    """s₀ = 1 + Σγ, s_k = Σλ^kγ (k = 0..K)"""
    if K < 0:
        raise InvalidInputError("moment count must be nonnegative", MODULE)
    f = _field(field)
    lam = [f.convert(x) for x in sigma]
    gam = [f.convert(g) for g in gammas]
    s = [f.convert(1) + sum(gam, f.convert(0))]
    powers = list(gam)
    for _ in range(K):
        powers = [pw * x for pw, x in zip(powers, lam)]
        s.append(sum(powers, f.convert(0)))
    return MomentSequence(s=tuple(s), arithmetic=f.arithmetic)


def absolute_moments(
    sigma: Sequence[Any], gammas: Sequence[Any], K: int, field: Optional[Field] = None
) -> MomentSequence:
    """|λ|γ 측도의 이동 모멘트 s̃_k = Σ|λ|λ^{k−1}γ (k ≥ 1, s̃₀ 미사용)"""
    f = _field(field)
    lam = [f.convert(x) for x in sigma]
    weights = [abs(x) * f.convert(g) for x, g in zip(lam, gammas)]
    s = [f.convert(0)]
    for _ in range(K):
        s.append(sum(weights, f.convert(0)))
        weights = [w * x for w, x in zip(weights, lam)]
    return MomentSequence(s=tuple(s), arithmetic=f.arithmetic)


def hankel_determinants(
    s: MomentSequence,
    N: int,
    field: Optional[Field] = None,
    absolute: Optional[MomentSequence] = None,
) -> HankelTable:
    """k×k 선행 Hankel 행렬식 Δ0[k] = det(s_{i+j}), Δ1[k] = det(s_{i+j+1})

    The table runs to k = N, or N+1 when the sequence is long enough.
    """
    f = _field(field, s.arithmetic)
    values = s.s
    if len(values) < 2 * N:
        raise InvalidInputError(f"{2 * N} moments are needed for N={N}, got {len(values)}", MODULE)
    top = N + 1 if len(values) >= 2 * N + 2 else N
    delta0 = tuple(f.det(hankel_rows(values, k, 0)) for k in range(top + 1))
    delta1 = tuple(f.det(hankel_rows(values, k, 1)) for k in range(top + 1))
    scale1: Tuple[Any, ...] = ()
    if absolute is not None:
        scale1 = tuple(f.det(hankel_rows(absolute.s, k, 1)) for k in range(top + 1))
    return HankelTable(delta0=delta0, delta1=delta1, scale1=scale1, arithmetic=f.arithmetic)


def stieltjes_coefficients(
    table: HankelTable, N: int, field: Optional[Field] = None
) -> Tuple[Tuple[Any, ...], Tuple[Any, ...]]:
    """mₙ = Δ0[n]²/(Δ1[n−1]Δ1[n]), l_{n−1} = Δ1[n−1]²/(Δ0[n−1]Δ0[n]), l_N = 1 − Σ"""
    f = _field(field, table.arithmetic)
    tol = get_settings().hankel_tolerance
    d0, d1 = table.delta0, table.delta1
    if len(d0) < N + 1 or len(d1) < N + 1:
        raise InvalidInputError(f"Hankel table too short for N={N}", MODULE)

    m: List[Any] = []
    l: List[Any] = []
    for n in range(1, N + 1):
        scale = table.scale1[n] if table.scale1 else abs(d1[n]) or 1
        if d1[n] == 0 or f.is_negligible(d1[n], scale, tol):
            ratio = 0.0 if d1[n] == 0 else float(d1[n] / scale)
            raise CollisionError(
                f"Stieltjes denominator Δ1[{n}] vanishes (normalized value {ratio:.3e})",
                index=n,
                determinant=ratio,
                module=MODULE,
            )
        if not d0[n] > 0:
            raise NumericalError(f"Δ0[{n}] is not positive: moments lost positivity", MODULE)
        m.append(d0[n] ** 2 / (d1[n - 1] * d1[n]))
        l.append(d1[n - 1] ** 2 / (d0[n - 1] * d0[n]))
    l.append(f.convert(1) - sum(l, f.convert(0)))
    return tuple(m), tuple(l)


def peakons_from_coefficients(
    m: Sequence[Any], l: Sequence[Any], field: Optional[Field] = None
) -> PeakonConfig:
    """tanh(qₙ/2) = 2Σ_{k<n}l_k − 1, pₙ = mₙ/(8cosh²(qₙ/2))"""
    if len(l) != len(m) + 1:
        raise InvalidInputError("need len(l) == len(m) + 1", MODULE)
    if any(mn == 0 for mn in m):
        raise InvalidInputError("string masses must be nonzero", MODULE)
    if abs(float(sum(l)) - 1.0) > 1e-10:
        raise InvalidInputError(f"string lengths sum to {float(sum(l))!r}, not 1", MODULE)
    log = field.log if field is not None else math.log

    masses, positions = [], []
    for n in range(1, len(m) + 1):
        head, tail = sum(l[:n]), sum(l[n:])
        if not (0 < head and 0 < tail):
            raise InvalidInputError(
                f"partial sum {float(head)!r} at n={n} lies outside (0, 1)", MODULE
            )
        positions.append(float(log(head / tail)))
        masses.append(float(m[n - 1] * head * tail / 2))
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise InvalidInputError("recovered positions are not increasing", MODULE)
    return PeakonConfig.from_arrays(masses, positions)


def working_precision(sigma: Sequence[Any], gammas: Sequence[Any], base: int) -> int:
    """mpmath 자릿수: 기본값 + γ 와 λ^k 의 자릿수 폭"""
    n = len(sigma)
    spread = sum(abs(float(mpmath.log10(g))) for g in gammas)
    spread += (2 * n + 1) * max(abs(float(mpmath.log10(abs(x)))) for x in sigma)
    return base + int(math.ceil(spread))


def spectral_hankel_table(
    sigma: Sequence[Any], gammas: Sequence[Any], field: Field, size: Optional[int] = None
) -> HankelTable:
    """스펙트럼 데이터로부터 Δ0, Δ1 과 절대측도 스케일"""
    N = len(sigma) if size is None else size
    s = moments(sigma, gammas, 2 * N - 1, field)
    absolute = absolute_moments(sigma, gammas, 2 * N - 1, field)
    return hankel_determinants(s, N, field, absolute)


def _check_spectrum(sigma: Sequence[Any], gammas: Sequence[Any]) -> None:
    if len(sigma) != len(gammas):
        raise InvalidInputError("one norming constant per eigenvalue is required", MODULE)
    if any(x == 0 for x in sigma) or len(set(sigma)) != len(sigma):
        raise InvalidInputError("eigenvalues must be distinct and nonzero", MODULE)
    if any(not g > 0 for g in gammas):
        raise InvalidInputError("norming constants must be positive", MODULE)


def invert_spectral(
    sigma: Sequence[Any],
    gammas: Sequence[Any],
    arithmetic: Optional[Arithmetic] = None,
) -> PeakonConfig:
    """(σ, γ) → PeakonConfig, Δ1 소멸 시 CollisionError"""
    _check_spectrum(sigma, gammas)
    N = len(sigma)
    if N == 0:
        return PeakonConfig()
    settings = get_settings()
    arithmetic = Arithmetic(arithmetic or settings.arithmetic)

    if arithmetic is Arithmetic.RATIONAL:
        field = RationalField()
        table = spectral_hankel_table([field.convert(x) for x in sigma],
                                      [field.convert(g) for g in gammas], field)
        m, l = stieltjes_coefficients(table, N, field)
        return peakons_from_coefficients(m, l, field)

    if N > settings.max_float_n:
        raise InvalidInputError(
            f"float mode is capped at N={settings.max_float_n}; use rational arithmetic", MODULE
        )
    dps = working_precision(sigma, gammas, settings.hankel_dps)
    for attempt in range(_MAX_ATTEMPTS):
        field = ExtendedField(dps)
        table = spectral_hankel_table(sigma, gammas, field)
        m, l = stieltjes_coefficients(table, N, field)
        tail = l[-1]
        if tail > 0 and dps + float(field.log(tail)) / math.log(10) >= _RETAINED_DIGITS:
            return peakons_from_coefficients(m, l, field)
        logger.info(f"l_N lost its digits at dps={dps}; retrying at dps={2 * dps}")
        dps *= 2
    raise NumericalError(f"moment inversion did not stabilise up to dps={dps // 2}", MODULE)
