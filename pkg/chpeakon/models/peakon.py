"""
Domain models for multi-peakon configurations and conservative states.
"""

import math
from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Peak(BaseModel):
    """단일 peakon (질량 p, 위치 q)"""
    model_config = ConfigDict(frozen=True)

    p: float = Field(..., description="mass / height")
    q: float = Field(..., description="position")

    @field_validator("p", "q")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("peak parameters must be finite")
        return value

    @field_validator("p")
    @classmethod
    def _nonzero_mass(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("peak masses must be nonzero")
        return value


class PeakonConfig(BaseModel):
    """u(x) = Σ pₙ e^{−|x−qₙ|}, 위치는 엄격히 증가"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    peaks: Tuple[Peak, ...] = Field(default=(), alias="peakons")

    @model_validator(mode="after")
    def _check_order(self) -> "PeakonConfig":
        qs = [peak.q for peak in self.peaks]
        if any(b <= a for a, b in zip(qs, qs[1:])):
            raise ValueError("peak positions must be strictly increasing")
        return self

    @classmethod
    def from_arrays(cls, masses, positions) -> "PeakonConfig":
        masses = [float(p) for p in masses]
        positions = [float(q) for q in positions]
        if len(masses) != len(positions):
            raise ValueError("masses and positions differ in length")
        return cls(peaks=tuple(Peak(p=p, q=q) for p, q in zip(masses, positions)))

    @property
    def n(self) -> int:
        return len(self.peaks)

    @property
    def masses(self) -> np.ndarray:
        return np.array([peak.p for peak in self.peaks], dtype=float)

    @property
    def positions(self) -> np.ndarray:
        return np.array([peak.q for peak in self.peaks], dtype=float)

    def translate(self, d: float) -> "PeakonConfig":
        return PeakonConfig.from_arrays(self.masses, self.positions + d)

    def scale_masses(self, c: float) -> "PeakonConfig":
        return PeakonConfig.from_arrays(c * self.masses, self.positions)

    def to_json_dict(self) -> dict:
        return {"peakons": [{"p": peak.p, "q": peak.q} for peak in self.peaks]}


class Atom(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    w: float


class DiscreteMeasure(BaseModel):
    """점질량 측도 Σ w δ_x (빈 원자 목록 = 영 측도)"""
    model_config = ConfigDict(frozen=True)

    atoms: Tuple[Atom, ...] = ()

    @model_validator(mode="after")
    def _check_atoms(self) -> "DiscreteMeasure":
        xs = [atom.x for atom in self.atoms]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("atom positions must be strictly increasing")
        if any(atom.w == 0.0 for atom in self.atoms):
            raise ValueError("atom weights must be nonzero; use an empty measure for zero")
        if not all(math.isfinite(a.x) and math.isfinite(a.w) for a in self.atoms):
            raise ValueError("atoms must be finite")
        return self

    @classmethod
    def from_arrays(cls, xs, ws) -> "DiscreteMeasure":
        return cls(atoms=tuple(Atom(x=float(x), w=float(w)) for x, w in zip(xs, ws)))

    @property
    def positions(self) -> np.ndarray:
        return np.array([atom.x for atom in self.atoms], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([atom.w for atom in self.atoms], dtype=float)

    @property
    def total(self) -> float:
        return float(sum(atom.w for atom in self.atoms))

    @property
    def is_zero(self) -> bool:
        return len(self.atoms) == 0


class KernelBranch(str, Enum):
    HYPERBOLIC = "hyperbolic"
    TRIGONOMETRIC = "trigonometric"
    POLYNOMIAL = "polynomial"


class KernelParams(BaseModel):
    """Calogero–Françoise 커널 G 의 매개변수"""
    model_config = ConfigDict(frozen=True)

    branch: KernelBranch = KernelBranch.HYPERBOLIC
    a: float = 0.0
    b_plus: float = 1.0
    b_minus: float = -1.0
    nu: float = 1.0
    # polynomial branch: G(x) = a + b|x| + c x²
    b: float = 0.0
    c: float = 0.0

    @model_validator(mode="after")
    def _finite(self) -> "KernelParams":
        values = (self.a, self.b_plus, self.b_minus, self.nu, self.b, self.c)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("kernel parameters must be finite")
        return self

    @classmethod
    def peakon(cls) -> "KernelParams":
        return cls(branch=KernelBranch.HYPERBOLIC, a=0.0, b_plus=1.0, b_minus=-1.0, nu=1.0)

    @classmethod
    def periodic(cls) -> "KernelParams":
        # G(x) = cosh(|x| − 1/2) / sinh(1/2) on |x| ≤ 1
        return cls(branch=KernelBranch.HYPERBOLIC, a=0.0,
                   b_plus=1.0 / math.tanh(0.5), b_minus=-1.0, nu=1.0)

    @classmethod
    def hunter_saxton(cls, a: float = 0.0, b: float = 1.0, c: float = 0.0) -> "KernelParams":
        return cls(branch=KernelBranch.POLYNOMIAL, a=a, b=b, c=c)

    @property
    def is_peakon(self) -> bool:
        return (
            self.branch is KernelBranch.HYPERBOLIC
            and (self.a, self.b_plus, self.b_minus, self.nu) == (0.0, 1.0, -1.0, 1.0)
        )


class ConservativeState(BaseModel):
    """보존적 해 (u, μ): peakon 부분 + 특이 에너지 측도 υ"""
    model_config = ConfigDict(frozen=True)

    peaks: PeakonConfig = Field(default_factory=PeakonConfig)
    singular_energy: DiscreteMeasure = Field(default_factory=DiscreteMeasure)
    total_energy: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _check_energy(self) -> "ConservativeState":
        from chpeakon.physics.peakon_core import hamiltonian

        if any(atom.w < 0.0 for atom in self.singular_energy.atoms):
            raise ValueError("singular energy weights must be nonnegative")
        expected = 4.0 * hamiltonian(self.peaks) + self.singular_energy.total
        if abs(expected - self.total_energy) > 1e-8 * max(1.0, abs(expected)):
            raise ValueError(
                f"total_energy {self.total_energy!r} != 4H + Συ = {expected!r}"
            )
        return self

    @property
    def is_regular(self) -> bool:
        return self.singular_energy.is_zero

    def to_json_dict(self) -> dict:
        return {
            "peakons": self.peaks.to_json_dict()["peakons"],
            "singular_energy": [
                {"x": atom.x, "w": atom.w} for atom in self.singular_energy.atoms
            ],
            "total_energy": self.total_energy,
        }


def interface_atoms(
    state,
) -> List[Tuple[float, float, float]]:
    """스펙트럼 문제의 계면 목록 (x, ω, υ), x 오름차순"""
    if isinstance(state, PeakonConfig):
        return [(peak.q, 2.0 * peak.p, 0.0) for peak in state.peaks]
    merged = {}
    for peak in state.peaks.peaks:
        merged[peak.q] = [2.0 * peak.p, 0.0]
    for atom in state.singular_energy.atoms:
        merged.setdefault(atom.x, [0.0, 0.0])[1] += atom.w
    return [(x, w[0], w[1]) for x, w in sorted(merged.items())]
