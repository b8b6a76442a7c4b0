import numpy as np
import pytest

from chpeakon.models.peakon import PeakonConfig


@pytest.fixture
def rng():
    """고정 시드 난수 생성기"""
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_peakon():
    """원점의 단위 peakon {(1, 0)}"""
    return PeakonConfig.from_arrays([1.0], [0.0])


@pytest.fixture
def antipeakon_pair():
    """대칭 peakon–antipeakon (1,−1), (−1,1)"""
    return PeakonConfig.from_arrays([1.0, -1.0], [-1.0, 1.0])


@pytest.fixture
def make_config():
    """임의 배치 생성기: |p| ∈ [0.1, 5], 간격 ≥ 0.2"""

    def factory(rng, n, signed=False, gap=(0.2, 2.0)):
        gaps = rng.uniform(gap[0], gap[1], n)
        positions = np.cumsum(gaps) - gaps.sum() / 2.0
        masses = rng.uniform(0.1, 5.0, n)
        if signed:
            masses = masses * rng.choice([-1.0, 1.0], n)
        return PeakonConfig.from_arrays(masses, positions)

    return factory
