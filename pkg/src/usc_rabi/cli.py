"""Command-line front end.

    usc-rabi <preset> --config <path> [--out <path>] [--nmax <int>] [--dt <float>]

Exit codes: 0 success, 2 convergence-guard (or norm-drift) failure, 3 config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import PRESETS, ConfigError, load_experiment
from .dynamics import NormDriftError
from .presets import ConvergenceGuardError, run_preset

_PRESET_HELP = {
    "fig2-sweep": "virtual-photon amplitude vs coupling, exact and closed form",
    "fig3-evolve": "transfer probability to |f,1> vs time for several drive strengths",
    "resonance-scan": "peak transfer vs drive frequency around the 1/2/3-photon channels",
    "convergence-report": "truncation and step-size refinement study",
    "two-state-compare": "full propagation against the analytic two-state curves",
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; 2 is reserved for the
    # convergence guard, so usage problems map to the config-error code 3.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="usc-rabi",
        description="Driven quantum Rabi model simulator (energies in cavity units)",
    )
    sub = parser.add_subparsers(dest="preset", required=True, metavar="preset")
    for name in PRESETS:
        p = sub.add_parser(name, help=_PRESET_HELP[name])
        p.add_argument("--config", type=Path, help="key=value config file")
        p.add_argument("--out", type=Path, help="output CSV path")
        p.add_argument("--nmax", type=int, help="Fock truncation override")
        p.add_argument("--dt", type=float, help="time step override (1/omega_c)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_experiment(
            args.preset, config_path=args.config, out=args.out, n_max=args.nmax, dt=args.dt
        )
    except (ConfigError, OSError) as exc:
        print(f"usc-rabi: config error: {exc}", file=sys.stderr)
        return 3
    try:
        result = run_preset(cfg)
    except ConfigError as exc:
        print(f"usc-rabi: config error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceGuardError as exc:
        print(f"usc-rabi: convergence guard: {exc}", file=sys.stderr)
        return 2
    except NormDriftError as exc:
        print(f"usc-rabi: propagation aborted: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
