import os
from typing import Any, Dict, Optional

from dotenv import dotenv_values
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

CONFIG_ENV_VAR = "CHPEAKON_CONFIG"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CHPEAKON_", env_file=".env", extra="ignore")

    # Logging
    log_level: str = "INFO"

    # Integrator
    rtol: float = Field(1e-12, gt=0)
    atol: float = Field(1e-14, gt=0)
    collision_gap: float = Field(1e-8, gt=0)
    collision_mass: float = Field(1e8, gt=0)

    # Spectral transforms
    root_tolerance: float = Field(1e-13, gt=0)
    eigen_residual_tolerance: float = Field(1e-8, gt=0)
    coupling_tolerance: float = Field(1e-10, gt=0)

    # Moment problem
    arithmetic: str = "float"
    hankel_tolerance: float = Field(1e-10, gt=0)
    hankel_dps: int = Field(50, ge=20)
    max_float_n: int = Field(16, ge=1)

    # Profiles / asymptotics
    tail_width: float = Field(40.0, gt=0)
    grid_margin: float = Field(20.0, gt=0)
    grid_step: float = Field(1e-2, gt=0)
    collision_horizon: float = Field(50.0, gt=0)

    # CLI
    workers: int = Field(4, ge=1)
    config_path: Optional[str] = None

    @field_validator("arithmetic")
    @classmethod
    def _check_arithmetic(cls, value: str) -> str:
        if value not in ("float", "rational"):
            raise ValueError(f"arithmetic must be 'float' or 'rational', got {value!r}")
        return value


def read_config_file(path: str) -> Dict[str, Any]:
    """key=value 설정 파일 읽기 (대소문자 무시, CHPEAKON_ 접두어 허용)"""
    values = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            continue
        name = key.lower()
        if name.startswith("chpeakon_"):
            name = name[len("chpeakon_"):]
        values[name] = value
    return values


def load_settings(path: Optional[str] = None, **overrides: Any) -> Settings:
    """환경변수 < 설정 파일 < 명령행 플래그 순서로 설정을 병합"""
    path = path or os.getenv(CONFIG_ENV_VAR)
    values: Dict[str, Any] = {}
    if path:
        if not os.path.exists(path):
            raise FileNotFoundError(f"config file not found: {path}")
        values.update(read_config_file(path))
        values["config_path"] = path
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings(**values)


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def configure(settings: Settings) -> Settings:
    """병합된 설정을 프로세스 전역 설정으로 적용"""
    global _settings
    _settings = settings
    return settings
