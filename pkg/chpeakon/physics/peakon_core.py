"""
Pure evaluations on multi-peakon configurations: profiles, momentum,
Hamiltonians (peakon and Calogero–Françoise kernels) and the Liouville map
to string coordinates.
"""

from typing import Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from chpeakon.models.peakon import (
    ConservativeState, DiscreteMeasure, KernelBranch, KernelParams, PeakonConfig,
)
from chpeakon.utils.exceptions import InvalidInputError

MODULE = "peakon-core"

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _distance_matrix(xs: np.ndarray, qs: np.ndarray) -> np.ndarray:
    return xs[:, None] - qs[None, :]


def eval_profile(config: PeakonConfig, xs: ArrayLike) -> np.ndarray:
    """u(x) = Σ pₙ e^{−|x−qₙ|}"""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if config.n == 0:
        return np.zeros_like(xs)
    return np.exp(-np.abs(_distance_matrix(xs, config.positions))) @ config.masses


def eval_slope(config: PeakonConfig, xs: ArrayLike) -> np.ndarray:
    """u_x, 피크 위치에서는 우극한"""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if config.n == 0:
        return np.zeros_like(xs)
    d = _distance_matrix(xs, config.positions)
    sign = np.where(d >= 0.0, 1.0, -1.0)
    return -(sign * np.exp(-np.abs(d))) @ config.masses


def h1_energy_density(config: PeakonConfig, xs: ArrayLike) -> np.ndarray:
    return eval_profile(config, xs) ** 2 + eval_slope(config, xs) ** 2


def momentum_measure(config: PeakonConfig) -> DiscreteMeasure:
    """ω = 2 Σ pₙ δ_{qₙ}"""
    return DiscreteMeasure.from_arrays(config.positions, 2.0 * config.masses)


def hamiltonian(config: PeakonConfig) -> float:
    """H = ½ Σ pₙ pₖ e^{−|qₙ−qₖ|}"""
    if config.n == 0:
        return 0.0
    p, q = config.masses, config.positions
    kernel = np.exp(-np.abs(q[:, None] - q[None, :]))
    return float(0.5 * p @ kernel @ p)


def h1_norm_squared(config: PeakonConfig) -> float:
    """‖u‖²_{H¹} = 4H"""
    return 4.0 * hamiltonian(config)


def kernel_value(params: KernelParams, x: ArrayLike) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if params.branch is KernelBranch.HYPERBOLIC:
        return params.a + params.b_plus * np.cosh(params.nu * x) + params.b_minus * np.sinh(params.nu * ax)
    if params.branch is KernelBranch.TRIGONOMETRIC:
        return params.a + params.b_plus * np.cos(params.nu * x) + params.b_minus * np.sin(params.nu * ax)
    return params.a + params.b * ax + params.c * x ** 2


def kernel_derivative(params: KernelParams, x: ArrayLike) -> np.ndarray:
    """G'(x), G'(0) := 0"""
    x = np.asarray(x, dtype=float)
    sign = np.sign(x)
    nu = params.nu
    if params.branch is KernelBranch.HYPERBOLIC:
        value = params.b_plus * nu * np.sinh(nu * x) + params.b_minus * nu * sign * np.cosh(nu * x)
    elif params.branch is KernelBranch.TRIGONOMETRIC:
        value = -params.b_plus * nu * np.sin(nu * x) + params.b_minus * nu * sign * np.cos(nu * x)
    else:
        value = params.b * sign + 2.0 * params.c * x
    return np.where(x == 0.0, 0.0, value)


def cf_hamiltonian(params: KernelParams, config: PeakonConfig) -> float:
    """Calogero–Françoise 해밀토니안 ½ Σ pₙ pₖ G(qₙ−qₖ)"""
    if config.n == 0:
        return 0.0
    p, q = config.masses, config.positions
    value = float(0.5 * p @ kernel_value(params, q[:, None] - q[None, :]) @ p)
    if not np.isfinite(value):
        raise InvalidInputError("kernel Hamiltonian is not finite", MODULE)
    return value


def liouville_string(measure: DiscreteMeasure) -> DiscreteMeasure:
    """x ↦ ½tanh(x/2), w ↦ 4cosh²(x/2)·w

    In floats the image reaches ±½ once |x| exceeds about 36.7; such atoms
    are rejected.
    """
    if measure.is_zero:
        return DiscreteMeasure()
    x = measure.positions
    mapped = 0.5 * np.tanh(0.5 * x)
    if np.any(np.abs(mapped) >= 0.5):
        raise InvalidInputError(
            f"atom at x={float(x[np.argmax(np.abs(mapped))])!r} maps onto the string end ±1/2", MODULE
        )
    try:
        return DiscreteMeasure.from_arrays(mapped, 4.0 * np.cosh(0.5 * x) ** 2 * measure.weights)
    except ValidationError as exc:
        raise InvalidInputError(f"atoms merge under the Liouville map: {exc}", MODULE) from exc


def liouville_inverse(measure: DiscreteMeasure) -> DiscreteMeasure:
    if measure.is_zero:
        return DiscreteMeasure()
    xt = measure.positions
    if np.any(np.abs(xt) >= 0.5):
        raise InvalidInputError("string positions must lie in (-1/2, 1/2)", MODULE)
    x = 2.0 * np.arctanh(2.0 * xt)
    return DiscreteMeasure.from_arrays(x, measure.weights / (4.0 * np.cosh(0.5 * x) ** 2))


def reflect(config: PeakonConfig) -> PeakonConfig:
    """x ↦ −x, p ↦ −p"""
    return PeakonConfig.from_arrays(-config.masses[::-1], -config.positions[::-1])


def conservative_state(
    config: PeakonConfig, singular: Optional[DiscreteMeasure] = None
) -> ConservativeState:
    singular = singular or DiscreteMeasure()
    return ConservativeState(
        peaks=config,
        singular_energy=singular,
        total_energy=h1_norm_squared(config) + singular.total,
    )


def gap_energy(config: PeakonConfig, n: int) -> float:
    """∫_{qₙ}^{qₙ₊₁} (u² + u_x²) dx between adjacent peaks n, n+1 (0-based)"""
    if not 0 <= n < config.n - 1:
        raise InvalidInputError(f"no gap after peak index {n}", MODULE)
    p, q = config.masses, config.positions
    a, b = q[n], q[n + 1]
    right = slice(n + 1, None)
    left = slice(0, n + 1)
    # u = A e^{x} + B e^{−x} on [a, b], u² + u_x² = 2A²e^{2x} + 2B²e^{−2x}
    return float(
        np.sum(p[right] * np.exp(b - q[right])) ** 2
        - np.sum(p[right] * np.exp(a - q[right])) ** 2
        + np.sum(p[left] * np.exp(q[left] - a)) ** 2
        - np.sum(p[left] * np.exp(q[left] - b)) ** 2
    )
