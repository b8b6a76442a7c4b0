"""
Error hierarchy shared by every chpeakon module.

Each error names the module it came from so the CLI can report it.
"""

from typing import Optional


class PeakonError(Exception):
    def __init__(self, message: str, module: str = "chpeakon"):
        super().__init__(message)
        self.module = module

    def __str__(self) -> str:
        return f"[{self.module}] {super().__str__()}"


class InvalidInputError(PeakonError, ValueError):
    """전제조건 위반 (잘못된 입력)"""


class BlowUpError(InvalidInputError):
    """요청 시각이 two-peakon 붕괴 시각 이후"""

    def __init__(self, message: str, blowup_time: float, module: str = "dynamics"):
        super().__init__(message, module)
        self.blowup_time = blowup_time


class CollisionError(PeakonError):
    """Stieltjes 분모가 소멸: 인접한 peakon 충돌 신호"""

    def __init__(
        self,
        message: str,
        index: int,
        time: Optional[float] = None,
        determinant: Optional[float] = None,
        module: str = "moment-inverse",
    ):
        super().__init__(message, module)
        self.index = index
        self.time = time
        self.determinant = determinant

    def to_report(self) -> dict:
        return {
            "collision": True,
            "module": self.module,
            "index": self.index,
            "time": self.time,
            "determinant": self.determinant,
            "message": super(PeakonError, self).__str__(),
        }


class NumericalError(PeakonError):
    """수치 계산 실패 (조건수, 근 찾기 등)"""


class StepSizeUnderflowError(NumericalError):
    pass


class NotAnEigenvalueError(NumericalError):
    pass
