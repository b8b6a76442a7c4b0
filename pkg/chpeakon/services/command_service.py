"""
Command orchestration for the chpeakon CLI.

Each command is a thin composition of library operations; errors are mapped
to exit statuses (2 bad input, 3 collision, 4 numerical failure).
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

import numpy as np
import pandas as pd
from pydantic import ValidationError

from chpeakon.models.commands import CommandType, RunSpec
from chpeakon.models.dynamics import IntegrationOptions
from chpeakon.models.peakon import ConservativeState, KernelParams
from chpeakon.physics.asymptotics import asymptotic_rays, phase_shifts, resolution_error
from chpeakon.physics.dynamics import integrate
from chpeakon.physics.isospectral_flow import solve_conservative
from chpeakon.physics.moment_inverse import invert_spectral
from chpeakon.physics.peakon_core import eval_profile
from chpeakon.physics.spectral_forward import spectral_data, string_coefficients
from chpeakon.services.output_service import OutputService
from chpeakon.utils.config import Settings, get_settings
from chpeakon.utils.exceptions import (
    CollisionError, InvalidInputError, NumericalError, PeakonError,
)
from chpeakon.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_COLLISION = 3
EXIT_NUMERICAL = 4

T = TypeVar("T")


class CommandService:
    """simulate / spectral / invert / evolve / asymptotics / compare 실행"""

    def __init__(self, settings: Optional[Settings] = None, output: Optional[OutputService] = None):
        self.settings = settings or get_settings()
        self.output = output or OutputService()
        self._handlers: Dict[CommandType, Callable[[RunSpec], None]] = {
            CommandType.SIMULATE: self._simulate,
            CommandType.SPECTRAL: self._spectral,
            CommandType.INVERT: self._invert,
            CommandType.EVOLVE: self._evolve,
            CommandType.ASYMPTOTICS: self._asymptotics,
            CommandType.COMPARE: self._compare,
        }

    def run_command(self, spec: RunSpec) -> int:
        """명령 실행 후 종료 코드 반환"""
        logger.info(f"running {spec.command.value} on {spec.input_path}")
        try:
            self._handlers[spec.command](spec)
            return EXIT_OK
        except CollisionError as exc:
            logger.error(str(exc))
            self.output.write_json(self.output.companion_path(spec.output_path), exc.to_report())
            return EXIT_COLLISION
        except (InvalidInputError, ValidationError, KeyError, ValueError, OSError) as exc:
            logger.error(f"bad input: {exc}")
            return EXIT_BAD_INPUT
        except NumericalError as exc:
            logger.error(str(exc))
            return EXIT_NUMERICAL
        except PeakonError as exc:
            logger.error(str(exc))
            return EXIT_NUMERICAL

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _map(self, fn: Callable[[float], T], times: Sequence[float]) -> List[T]:
        """시각별 평가를 워커 풀로 분산 (결과 순서 유지)"""
        with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
            return list(pool.map(fn, times))

    def _load_peakons(self, spec: RunSpec):
        config, kernel = self.output.load_config(spec.input_path)
        return config, spec.kernel or kernel or KernelParams.peakon()

    def _grid(self, spec: RunSpec, states: Sequence[ConservativeState]) -> np.ndarray:
        if spec.grid is not None:
            return np.array(spec.grid.points())
        xs = [x for s in states for x in s.peaks.positions] + [
            x for s in states for x in s.singular_energy.positions
        ]
        lo, hi = (min(xs), max(xs)) if xs else (0.0, 0.0)
        step = self.settings.grid_step
        count = int(round((hi - lo + 2.0 * self.settings.tail_width) / step)) + 1
        return lo - self.settings.tail_width + step * np.arange(count)

    @staticmethod
    def _require_peakon_kernel(kernel: KernelParams) -> None:
        if not kernel.is_peakon:
            raise InvalidInputError(
                "spectral methods apply to the peakon kernel e^{-|x|} only", "cli"
            )

    # ------------------------------------------------------------------
    # commands
    # ------------------------------------------------------------------

    def _simulate(self, spec: RunSpec) -> None:
        config, kernel = self._load_peakons(spec)
        options = IntegrationOptions(samples=spec.samples, rtol=spec.tol or self.settings.rtol)
        trajectory = integrate(kernel, config, spec.t_final, options)
        rows = []
        for t, state, h in zip(trajectory.times, trajectory.states, trajectory.hamiltonians):
            row = {"t": t}
            row.update({f"q{n + 1}": q for n, q in enumerate(state.positions)})
            row.update({f"p{n + 1}": p for n, p in enumerate(state.masses)})
            row["H"] = h
            rows.append(row)
        self.output.write_csv(spec.output_path, pd.DataFrame(rows))
        if trajectory.collided:
            self.output.write_json(
                self.output.companion_path(spec.output_path),
                {"events": [event.model_dump() for event in trajectory.events]},
            )

    def _spectral(self, spec: RunSpec) -> None:
        config, kernel = self._load_peakons(spec)
        self._require_peakon_kernel(kernel)
        data = spectral_data(config)
        m, l = string_coefficients(config)
        payload = data.to_json_dict()
        payload.update({"m": [float(x) for x in m], "l": [float(x) for x in l]})
        self.output.write_json(spec.output_path, payload)

    def _invert(self, spec: RunSpec) -> None:
        data = self.output.load_spectral(spec.input_path)
        config = invert_spectral(data.eigenvalues, data.gammas, spec.arithmetic)
        self.output.write_json(spec.output_path, config.to_json_dict())

    def _evolve(self, spec: RunSpec) -> None:
        config, kernel = self._load_peakons(spec)
        self._require_peakon_kernel(kernel)
        data = spectral_data(config)
        times = spec.sample_times
        states = self._map(lambda t: solve_conservative(config, t, data), times)
        grid = self._grid(spec, states)
        frames = [
            pd.DataFrame({"t": t, "x": grid, "u": eval_profile(state.peaks, grid)})
            for t, state in zip(times, states)
        ]
        self.output.write_csv(spec.output_path, pd.concat(frames, ignore_index=True))
        self.output.write_json(
            self.output.companion_path(spec.output_path),
            {"states": [dict(t=t, **state.to_json_dict()) for t, state in zip(times, states)]},
        )

    def _asymptotics(self, spec: RunSpec) -> None:
        config, kernel = self._load_peakons(spec)
        self._require_peakon_kernel(kernel)
        data = spectral_data(config)
        table = phase_shifts(data.eigenvalues, data.couplings)
        times = spec.sample_times
        errors = self._map(lambda t: resolution_error(config, t, data), times)
        self.output.write_csv(spec.output_path, pd.DataFrame({"t": times, "sup_error": errors}))
        payload = table.as_dict()
        payload["rays"] = [
            {"t": t, "rays": [{"eigenvalue": lam, "position": x, "height": h}
                              for lam, x, h in asymptotic_rays(data.eigenvalues, table, t)]}
            for t in times
        ]
        self.output.write_json(self.output.companion_path(spec.output_path), payload)

    def _compare(self, spec: RunSpec) -> None:
        config, kernel = self._load_peakons(spec)
        self._require_peakon_kernel(kernel)
        options = IntegrationOptions(samples=spec.samples, rtol=spec.tol or self.settings.rtol)
        trajectory = integrate(kernel, config, spec.t_final, options)
        data = spectral_data(config)
        exact = self._map(lambda t: solve_conservative(config, t, data), trajectory.times)
        grid = self._grid(spec, exact)

        rows = []
        for t, ode, state in zip(trajectory.times, trajectory.states, exact):
            row = {"t": t}
            for n in range(ode.n):
                row[f"q{n + 1}_ode"] = ode.positions[n]
                row[f"q{n + 1}_spectral"] = state.peaks.positions[n] if n < state.peaks.n else np.nan
            for n in range(ode.n):
                row[f"p{n + 1}_ode"] = ode.masses[n]
                row[f"p{n + 1}_spectral"] = state.peaks.masses[n] if n < state.peaks.n else np.nan
            row["deviation"] = float(
                np.max(np.abs(eval_profile(ode, grid) - eval_profile(state.peaks, grid)))
            )
            rows.append(row)
        frame = pd.DataFrame(rows)
        self.output.write_csv(
            spec.output_path, frame, footer={"max_deviation": float(frame["deviation"].max())}
        )
