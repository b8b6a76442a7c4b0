"""
Models for direct ODE integration of the multi-peakon system.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from chpeakon.models.peakon import PeakonConfig
from chpeakon.utils.config import get_settings


class IntegrationOptions(BaseModel):
    """적분기 옵션 (기본값은 Settings)"""
    model_config = ConfigDict(frozen=True)

    method: str = "DOP853"
    rtol: float = Field(default_factory=lambda: get_settings().rtol, gt=0)
    atol: float = Field(default_factory=lambda: get_settings().atol, gt=0)
    collision_gap: float = Field(default_factory=lambda: get_settings().collision_gap, gt=0)
    collision_mass: float = Field(default_factory=lambda: get_settings().collision_mass, gt=0)
    max_step: float = Field(default=math.inf, gt=0)
    samples: Optional[int] = Field(default=None, ge=2, description="uniform output times")


class CollisionEvent(BaseModel):
    """인접 peak 충돌 이벤트"""
    model_config = ConfigDict(frozen=True)

    time: float = Field(..., description="extrapolated collision instant")
    detected_at: float = Field(..., description="time the threshold was crossed")
    indices: Tuple[int, int]
    gap: float

    @model_validator(mode="after")
    def _adjacent(self) -> "CollisionEvent":
        if self.indices[1] != self.indices[0] + 1:
            raise ValueError("collision indices must be adjacent")
        return self


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    times: Tuple[float, ...]
    states: Tuple[PeakonConfig, ...]
    hamiltonians: Tuple[float, ...]
    events: Tuple[CollisionEvent, ...] = ()
    hamiltonian_drift: float = 0.0
    momentum_drift: float = 0.0

    @model_validator(mode="after")
    def _check(self) -> "Trajectory":
        if len(self.times) != len(self.states) or len(self.times) != len(self.hamiltonians):
            raise ValueError("times, states and hamiltonians differ in length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("trajectory times must be strictly increasing")
        return self

    @property
    def final(self) -> PeakonConfig:
        return self.states[-1]

    @property
    def collided(self) -> bool:
        return len(self.events) > 0


@dataclass(frozen=True)
class TwoPeakonReduced:
    """P₀ = p₁+p₂, P = p₂−p₁, Q = q₂−q₁, H₀² = H(p,q), h₀ = √(4H₀² − P₀²)"""
    P0: float
    P: float
    Q: float
    H0sq: float
    h0: float

    def __post_init__(self):
        if not self.Q > 0.0:
            raise ValueError("two-peakon reduction needs q1 < q2")
        lhs = 2.0 * self.H0sq
        rhs = 0.5 * (self.P0 ** 2 + self.P ** 2) + 0.5 * (self.P0 ** 2 - self.P ** 2) * math.exp(-self.Q)
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(lhs)):
            raise ValueError("reduced variables violate the two-peakon energy identity")

    @property
    def masses(self) -> Tuple[float, float]:
        return 0.5 * (self.P0 - self.P), 0.5 * (self.P0 + self.P)
