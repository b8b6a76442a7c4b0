"""
Spectral-side models: Jost solutions, spectral data, Weyl function
representations, moments and Hankel tables.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from chpeakon.utils.arithmetic import Arithmetic


class JostDirection(str, Enum):
    PLUS = "plus"    # e^{-x/2} near +∞
    MINUS = "minus"  # e^{+x/2} near −∞


@dataclass(frozen=True)
class JostSolution:
    """구간별 계수 (A_j(z), B_j(z)): φ = A_j e^{x/2} + B_j e^{−x/2}

    Interval j is (x_j, x_{j+1}) with x_0 = −∞ and x_{N+1} = +∞.
    """
    direction: JostDirection
    breakpoints: Tuple[float, ...]
    coefficients: Tuple[Tuple[Polynomial, Polynomial], ...]

    def interval_index(self, x: float) -> int:
        return int(np.searchsorted(np.asarray(self.breakpoints), x, side="right"))

    def __call__(self, z: complex, x: float) -> complex:
        a, b = self.coefficients[self.interval_index(x)]
        return a(z) * math.exp(x / 2.0) + b(z) * math.exp(-x / 2.0)

    def derivative(self, z: complex, x: float) -> complex:
        a, b = self.coefficients[self.interval_index(x)]
        return 0.5 * a(z) * math.exp(x / 2.0) - 0.5 * b(z) * math.exp(-x / 2.0)


def _finite_number(x) -> bool:
    try:
        return bool(mpmath.isfinite(x))
    except (TypeError, ValueError):
        return False


class SpectralData(BaseModel):
    """고유값 σ, 노밍 상수 γ_λ, 결합 상수 c_λ"""
    model_config = ConfigDict(frozen=True)

    eigenvalues: Tuple[float, ...]
    # floats, or mpmath numbers once they leave the float range
    gammas: Tuple[Any, ...]
    couplings: Optional[Tuple[Any, ...]] = None

    @field_validator("gammas", "couplings", mode="before")
    @classmethod
    def _plain_floats(cls, values):
        if values is None:
            return None
        return tuple(float(v) if isinstance(v, (int, float, str)) else v for v in values)

    @model_validator(mode="after")
    def _check(self) -> "SpectralData":
        sigma = self.eigenvalues
        if any(b <= a for a, b in zip(sigma, sigma[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        if any(lam == 0.0 or not math.isfinite(lam) for lam in sigma):
            raise ValueError("eigenvalues must be finite and nonzero")
        if len(self.gammas) != len(sigma):
            raise ValueError("one norming constant per eigenvalue is required")
        if any(not _finite_number(g) or not g > 0 for g in self.gammas):
            raise ValueError("norming constants must be positive")
        if self.couplings is not None:
            if len(self.couplings) != len(sigma):
                raise ValueError("one coupling constant per eigenvalue is required")
            if any(not _finite_number(c) or c == 0 for c in self.couplings):
                raise ValueError("coupling constants must be nonzero")
        return self

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def to_json_dict(self) -> dict:
        data = {"eigenvalues": list(self.eigenvalues), "gammas": [float(g) for g in self.gammas]}
        if self.couplings is not None:
            data["couplings"] = [float(c) for c in self.couplings]
        return data


class WeylForm(str, Enum):
    PARTIAL_FRACTION = "partial_fraction"
    CONTINUED_FRACTION = "continued_fraction"


@dataclass(frozen=True)
class WeylRepresentation:
    """M(z) 의 부분분수 또는 연분수 표현

    Continued-fraction levels carry mₙz + vₙz²; vₙ is nonzero only for
    dipoles of a conservative state.
    """
    form: WeylForm
    poles: Tuple[Any, ...] = ()
    residues: Tuple[Any, ...] = ()
    m: Tuple[Any, ...] = ()
    l: Tuple[Any, ...] = ()
    v: Tuple[Any, ...] = ()

    def __post_init__(self):
        if self.form is WeylForm.PARTIAL_FRACTION:
            if len(self.poles) != len(self.residues):
                raise ValueError("poles and residues differ in length")
        else:
            if len(self.l) != len(self.m) + 1:
                raise ValueError("continued fraction needs len(l) == len(m) + 1")
            if self.v and len(self.v) != len(self.m):
                raise ValueError("dipole weights must match the m levels")
            levels = self.v or (0,) * len(self.m)
            if any(mn == 0 and vn == 0 for mn, vn in zip(self.m, levels)):
                raise ValueError("every continued-fraction level needs m or v nonzero")
            total = sum(self.l)
            if abs(float(total) - 1.0) > 1e-10:
                raise ValueError(f"string lengths must sum to 1, got {float(total)!r}")

    @classmethod
    def partial_fraction(cls, poles: Sequence[Any], residues: Sequence[Any]) -> "WeylRepresentation":
        return cls(WeylForm.PARTIAL_FRACTION, poles=tuple(poles), residues=tuple(residues))

    @classmethod
    def continued_fraction(
        cls, m: Sequence[Any], l: Sequence[Any], v: Sequence[Any] = ()
    ) -> "WeylRepresentation":
        return cls(WeylForm.CONTINUED_FRACTION, m=tuple(m), l=tuple(l), v=tuple(v))


@dataclass(frozen=True)
class MomentSequence:
    """s_0..s_K (s_0 = 1 + Σγ, s_k = Σ λ^k γ)"""
    s: Tuple[Any, ...]
    arithmetic: Arithmetic = Arithmetic.FLOAT

    def __len__(self) -> int:
        return len(self.s)

    def as_floats(self) -> List[float]:
        return [float(v) for v in self.s]


@dataclass(frozen=True)
class HankelTable:
    """k×k Hankel 행렬식 표 (Δ0[0] = Δ1[0] = 1)

    scale1[k] is the Hankel determinant of the absolute measure Σ|λ|γδ_λ,
    the magnitude the collision test compares Δ1[k] against.
    """
    delta0: Tuple[Any, ...]
    delta1: Tuple[Any, ...]
    scale1: Tuple[Any, ...] = ()
    arithmetic: Arithmetic = Arithmetic.FLOAT


@dataclass(frozen=True)
class FlowState:
    """t=0 스펙트럼 데이터와 시각 t"""
    base: SpectralData
    t: float

    def spectral(self) -> SpectralData:
        from chpeakon.physics.isospectral_flow import evolve_spectral
        return evolve_spectral(self.base, self.t)


@dataclass(frozen=True)
class PhaseShiftTable:
    eigenvalues: Tuple[float, ...]
    shifts: Tuple[float, ...]

    def __post_init__(self):
        if len(self.eigenvalues) != len(self.shifts):
            raise ValueError("one phase shift per eigenvalue is required")
        if not all(math.isfinite(x) for x in self.shifts):
            raise ValueError("phase shifts must be finite")

    def as_dict(self) -> dict:
        return {"eigenvalues": list(self.eigenvalues), "phase_shifts": list(self.shifts)}
