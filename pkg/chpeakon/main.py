"""
chpeakon command-line entry point.

    python -m chpeakon.main spectral --input peakons.json --output spectral.json
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from chpeakon.models.commands import CommandType, GridSpec, RunSpec
from chpeakon.models.peakon import KernelBranch, KernelParams
from chpeakon.services.command_service import EXIT_BAD_INPUT, CommandService
from chpeakon.utils.config import configure, load_settings
from chpeakon.utils.logger import apply_log_level, get_logger

logger = get_logger(__name__)

KERNEL_CHOICES = ["peakon"] + [branch.value for branch in KernelBranch]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chpeakon",
        description="Camassa–Holm multi-peakons: ODE integration, spectral transforms, "
                    "conservative flow and peakon-resolution asymptotics",
    )
    parser.add_argument("command", choices=[c.value for c in CommandType])
    parser.add_argument("--input", required=True, help="input JSON (peakons or spectral data)")
    parser.add_argument("--output", required=True, help="output CSV / JSON path")
    parser.add_argument("--t-final", type=float, default=1.0)
    parser.add_argument("--times", default=None, help="comma-separated sample times")
    parser.add_argument("--grid", default=None, help="profile grid min:max:step")
    parser.add_argument("--samples", type=int, default=101, help="ODE output samples")
    parser.add_argument("--tol", type=float, default=None, help="integrator relative tolerance")
    parser.add_argument("--arithmetic", choices=["float", "rational"], default=None)
    parser.add_argument("--config", default=None, help="key=value config file (default $CHPEAKON_CONFIG)")
    parser.add_argument("--log-level", default=None)

    kernel = parser.add_argument_group("kernel")
    kernel.add_argument("--kernel", choices=KERNEL_CHOICES, default=None)
    kernel.add_argument("--kernel-a", type=float, default=None)
    kernel.add_argument("--kernel-b-plus", type=float, default=None)
    kernel.add_argument("--kernel-b-minus", type=float, default=None)
    kernel.add_argument("--kernel-nu", type=float, default=None)
    kernel.add_argument("--kernel-b", type=float, default=None)
    kernel.add_argument("--kernel-c", type=float, default=None)
    return parser


def parse_kernel(args: argparse.Namespace) -> Optional[KernelParams]:
    """--kernel 과 매개변수 플래그로 KernelParams 구성"""
    if args.kernel is None:
        return None
    if args.kernel == "peakon":
        return KernelParams.peakon()
    values = {
        "a": args.kernel_a, "b_plus": args.kernel_b_plus, "b_minus": args.kernel_b_minus,
        "nu": args.kernel_nu, "b": args.kernel_b, "c": args.kernel_c,
    }
    return KernelParams(branch=KernelBranch(args.kernel),
                        **{k: v for k, v in values.items() if v is not None})


def parse_times(text: Optional[str]) -> tuple:
    if not text:
        return ()
    return tuple(float(item) for item in text.split(",") if item.strip())


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = configure(load_settings(
            args.config, log_level=args.log_level, arithmetic=args.arithmetic, rtol=args.tol,
        ))
        apply_log_level(settings.log_level)
        spec = RunSpec(
            command=CommandType(args.command),
            input_path=args.input,
            output_path=args.output,
            t_final=args.t_final,
            times=parse_times(args.times),
            grid=GridSpec.parse(args.grid) if args.grid else None,
            tol=args.tol,
            arithmetic=settings.arithmetic,
            kernel=parse_kernel(args),
            samples=args.samples,
        )
    except (ValidationError, ValueError, FileNotFoundError) as exc:
        logger.error(f"[cli] invalid arguments: {exc}")
        return EXIT_BAD_INPUT
    return CommandService(settings).run_command(spec)


if __name__ == "__main__":
    sys.exit(main())
