"""
CLI run description: command, paths, times and grid.
"""

import os
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from chpeakon.models.peakon import KernelParams
from chpeakon.utils.arithmetic import Arithmetic


class CommandType(str, Enum):
    SIMULATE = "simulate"
    SPECTRAL = "spectral"
    INVERT = "invert"
    EVOLVE = "evolve"
    ASYMPTOTICS = "asymptotics"
    COMPARE = "compare"


class GridSpec(BaseModel):
    """min:max:step 샘플 격자"""
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "GridSpec":
        if not self.start < self.stop:
            raise ValueError("grid bounds must be ordered (min < max)")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like min:max:step, got {text!r}")
        return cls(start=float(parts[0]), stop=float(parts[1]), step=float(parts[2]))

    def points(self) -> List[float]:
        count = int(round((self.stop - self.start) / self.step)) + 1
        return [self.start + i * self.step for i in range(count)]


class RunSpec(BaseModel):
    """CLI 실행 명세"""
    model_config = ConfigDict(frozen=True)

    command: CommandType
    input_path: str
    output_path: str
    t_final: float = Field(default=1.0, ge=0.0)
    times: Tuple[float, ...] = ()
    grid: Optional[GridSpec] = None
    tol: Optional[float] = Field(default=None, gt=0)
    arithmetic: Arithmetic = Arithmetic.FLOAT
    kernel: Optional[KernelParams] = None
    samples: int = Field(default=101, ge=2)

    @field_validator("input_path")
    @classmethod
    def _input_exists(cls, value: str) -> str:
        if not os.path.exists(value):
            raise ValueError(f"input file not found: {value}")
        return value

    @property
    def sample_times(self) -> List[float]:
        return list(self.times) if self.times else [self.t_final]
