"""
Reading run inputs and writing CSV / JSON artifacts.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import pandas as pd

from chpeakon.models.peakon import KernelParams, PeakonConfig
from chpeakon.models.spectral import SpectralData
from chpeakon.utils.logger import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


class OutputService:
    """실행 입력 로딩과 결과 파일 기록"""

    def read_json(self, path: str) -> Dict[str, Any]:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)

    def load_config(self, path: str) -> Tuple[PeakonConfig, Optional[KernelParams]]:
        """{"peakons": [{"p", "q"}, ...], "kernel": {...}?}"""
        data = self.read_json(path)
        config = PeakonConfig.model_validate({"peakons": data.get("peakons", [])})
        kernel = KernelParams.model_validate(data["kernel"]) if data.get("kernel") else None
        return config, kernel

    def load_spectral(self, path: str) -> SpectralData:
        data = self.read_json(path)
        return SpectralData(
            eigenvalues=tuple(data["eigenvalues"]),
            gammas=tuple(data["gammas"]),
            couplings=tuple(data["couplings"]) if data.get("couplings") else None,
        )

    def write_json(self, path: str, payload: Dict[str, Any]) -> str:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(payload, indent=2, sort_keys=True))
            handle.write("\n")
        logger.info(f"wrote {path}")
        return path

    def write_csv(
        self, path: str, frame: pd.DataFrame, footer: Optional[Dict[str, float]] = None
    ) -> str:
        """17 유효숫자 CSV, footer 는 'key,value' 레코드로 추가"""
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        if footer:
            with open(path, "a", encoding="utf-8") as handle:
                for key, value in footer.items():
                    handle.write(f"{key},{FLOAT_FORMAT % value}\n")
        logger.info(f"wrote {path} ({len(frame)} rows)")
        return path

    @staticmethod
    def companion_path(path: str, suffix: str = ".json") -> str:
        """같은 stem 의 보조 파일 경로"""
        return str(Path(path).with_suffix(suffix))
