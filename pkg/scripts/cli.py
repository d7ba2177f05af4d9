"""
Command-line surface

    python main.py run circuits/deutsch_jozsa.cvq --backend gaussian
    python main.py wigner circuits/displaced_squeezed.cvq --format csv --pgm displaced_squeezed.pgm
    python main.py grover --bins 64 --target 12
    python main.py dj --oracle balanced --shots 100
    python main.py verify --json

JSON and CSV go to --out (stdout by default); banners, run summaries and
diagnostics go to stderr. Exit codes: 0 ok, 1 verify failures, 2 parse error,
3 capability or domain error, 4 configuration or command-line usage error.
"""
import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from scripts import verify, wigner
from scripts.algorithms import deutsch_jozsa, grover
from scripts.circuit import executor, parser
from scripts.utils.errors import ConfigurationError, DomainError, SimulatorError
from scripts.utils.helpers import (
    configure_logging,
    load_config,
    make_rng,
    output_dir,
    print_banner,
    print_run_summary,
    write_csv,
    write_json,
)

logger = logging.getLogger(__name__)

VERIFY_FAILED = 1
USAGE_ERROR = ConfigurationError.exit_code


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the configuration code; 2 belongs to .cvq parse errors"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")



def _common_options() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('--hbar', type=float, default=None, help="hbar convention (config default 2.0)")
    common.add_argument('--seed', type=int, default=None, help="RNG seed (config default 0)")
    common.add_argument('--out', type=Path, default=None, help="output file (stdout when omitted)")
    common.add_argument('--config', type=Path, default=None, help="alternative YAML config")
    common.add_argument('-v', '--verbose', action='store_true', help="debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    root = _ArgumentParser(prog='cvsim', description="Continuous-variable quantum circuit simulator")
    commands = root.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', parents=[common], help="execute a .cvq circuit")
    run.add_argument('input', type=Path)
    run.add_argument('--backend', choices=executor.BACKENDS, default='gaussian')
    run.add_argument('--grid', default=None, help="grid preset name (config active_grid by default)")
    run.add_argument('--cutoff', type=int, default=None)

    wig = commands.add_parser('wigner', parents=[common], help="Wigner function of one mode after a circuit")
    wig.add_argument('input', type=Path)
    wig.add_argument('--backend', choices=executor.BACKENDS, default='gaussian')
    wig.add_argument('--grid', default=None)
    wig.add_argument('--cutoff', type=int, default=None)
    wig.add_argument('--mode', type=int, default=0)
    wig.add_argument('--format', choices=('csv', 'json'), default='csv')
    wig.add_argument('--points', type=int, default=None)
    wig.add_argument('--half-width', type=float, default=None, help="axis half width in units of sqrt(hbar/2)")
    wig.add_argument('--pgm', type=Path, default=None, help="also write a grayscale heatmap")

    grv = commands.add_parser('grover', parents=[common], help="CV Grover search on a self-dual grid")
    grv.add_argument('--bins', type=int, default=None)
    grv.add_argument('--target', type=int, default=None)
    grv.add_argument('--iterations', type=int, default=None)
    grv.add_argument('--start', type=float, default=0.0, help="x0 of the initial state")
    grv.add_argument('--realistic', action='store_true', help="start from a squeezed Gaussian, not a grid delta")
    grv.add_argument('--R', type=float, default=None, help="squeezing factor of the realistic start state")
    grv.add_argument('--trace', type=Path, default=None, help="trace CSV (default <base_dir>/grover_trace.csv)")

    dj = commands.add_parser('dj', parents=[common], help="CV Deutsch-Jozsa decision")
    dj.add_argument('--oracle', default='constant',
                    help=f"{' | '.join(deutsch_jozsa.REFERENCE_ORACLES)} | path to a two-mode .cvq file")
    dj.add_argument('--shots', type=int, default=None)
    dj.add_argument('--squeeze-r', type=float, default=None)
    dj.add_argument('--threshold', type=float, default=None)
    dj.add_argument('--query-shift', type=float, default=0.0)

    ver = commands.add_parser('verify', parents=[common], help="run the invariant suites")
    ver.add_argument('--json', action='store_true', help="machine-readable report")
    ver.add_argument('--only', nargs='+', default=None, choices=list(verify.SUITES), metavar='SUITE')
    ver.add_argument('--grid-hbar', type=float, default=None, help="build test grids with another hbar")
    return root


def _settings(args: argparse.Namespace):
    config = load_config(args.config)
    hbar = float(config['physics']['hbar']) if args.hbar is None else args.hbar
    if not hbar > 0:
        raise ConfigurationError(f"--hbar must be positive, got {hbar}")
    seed = int(config['project']['random_seed']) if args.seed is None else args.seed
    return config, hbar, seed


def _execute(args: argparse.Namespace, config, hbar: float, seed: int):
    circuit = parser.parse_file(args.input)
    backend = executor.backend_from_config(config, args.backend, hbar, args.grid, args.cutoff)
    result = executor.execute(circuit, backend, make_rng(seed))
    return circuit, backend, result


# ========================================
# COMMANDS
# ========================================


def cmd_run(args: argparse.Namespace) -> int:
    config, hbar, seed = _settings(args)
    start = datetime.now()
    print_banner(f"RUN {args.input} ({args.backend})")
    circuit, _, result = _execute(args, config, hbar, seed)
    write_json(result.to_json(), args.out)
    print_run_summary("Circuit executed", len(circuit.ops), start, unit="ops")
    return 0


def _live_mode(circuit, backend_kind: str, mode: int) -> int:
    """Index of a circuit mode in the post-run snapshot"""
    if not 0 <= mode < circuit.mode_count:
        raise DomainError(f"mode {mode} out of range for a {circuit.mode_count}-mode circuit")
    measured = circuit.measured_modes()
    if backend_kind == 'grid':
        return mode
    if mode in measured:
        raise DomainError(f"mode {mode} was measured; the {backend_kind} backend keeps no state for it")
    return [m for m in range(circuit.mode_count) if m not in measured].index(mode)


def cmd_wigner(args: argparse.Namespace) -> int:
    config, hbar, seed = _settings(args)
    start = datetime.now()
    print_banner(f"WIGNER {args.input} mode {args.mode} ({args.backend})")
    circuit, backend, result = _execute(args, config, hbar, seed)
    mode = _live_mode(circuit, args.backend, args.mode)

    wcfg = config['wigner']
    points = int(wcfg['points'] if args.points is None else args.points)
    half_width = float(wcfg['half_width_units'] if args.half_width is None else args.half_width)
    if points < 2:
        raise DomainError(f"--points must be at least 2, got {points}")
    axes = wigner.default_axes(hbar, points, half_width)
    w = wigner.wigner_of_state(result.snapshot, axes, axes, mode, backend.grid)

    wigner.export(w, args.format, args.out)
    if args.pgm is not None:
        wigner.to_pgm(w, args.pgm)
    print(f"   normalization: {wigner.normalization_check(w):.9f}", file=sys.stderr)
    print_run_summary("Wigner grid written", w.values.size, start, unit="points")
    return 0


def cmd_grover(args: argparse.Namespace) -> int:
    config, hbar, _ = _settings(args)
    gcfg = config['grover']
    start = datetime.now()
    problem = grover.GroverProblem(
        bins=int(gcfg['bins'] if args.bins is None else args.bins),
        target_bin=int(gcfg['target'] if args.target is None else args.target),
        hbar=hbar,
        start_x=args.start,
    )
    R = args.R if args.R is not None else gcfg.get('realistic_R')
    print_banner(f"GROVER N={problem.bins} target={problem.target_bin}")
    trace = grover.grover_search(problem, iterations=args.iterations, realistic=args.realistic,
                                 R=R, window_mass=float(gcfg['window_mass']))

    trace_path = args.trace if args.trace is not None else output_dir(config) / 'grover_trace.csv'
    write_csv(trace.to_frame(), trace_path)
    write_json(trace.to_json(), args.out)
    print(f"   trace: {trace_path}", file=sys.stderr)
    print_run_summary("Grover search complete", trace.iterations_run, start, unit="iterations")
    return 0


def cmd_dj(args: argparse.Namespace) -> int:
    config, hbar, seed = _settings(args)
    dcfg = config['deutsch_jozsa']
    start = datetime.now()
    kick = float(dcfg['balanced_kick'])
    if args.oracle in deutsch_jozsa.REFERENCE_ORACLES:
        oracle = deutsch_jozsa.reference_oracle(args.oracle, kick)
    elif Path(args.oracle).exists():
        oracle = deutsch_jozsa.oracle_from_file(args.oracle)
    else:
        raise DomainError(f"--oracle must be a reference oracle or an existing .cvq file, got {args.oracle!r}")

    shots = int(dcfg['shots'] if args.shots is None else args.shots)
    squeeze_r = float(dcfg['squeeze_r'] if args.squeeze_r is None else args.squeeze_r)
    threshold = float(dcfg['threshold'] if args.threshold is None else args.threshold)
    print_banner(f"DEUTSCH-JOZSA oracle={oracle.name}")
    result = deutsch_jozsa.dj_run(oracle, squeeze_r, make_rng(seed), shots, threshold, hbar, args.query_shift)
    write_json(result.to_json(), args.out)
    print_run_summary(f"Verdict: {result.verdict}", shots, start, unit="shots")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config, hbar, seed = _settings(args)
    dcfg = config['deutsch_jozsa']
    ctx = verify.VerifyContext(
        hbar=hbar,
        seed=seed,
        grid_hbar=args.grid_hbar,
        cutoff=int(config['fock']['cutoff']),
        dj_threshold=float(dcfg['threshold']),
        dj_kick=float(dcfg['balanced_kick']),
    )
    start = datetime.now()
    print_banner("VERIFY")
    results = verify.run_suites(ctx, args.only)

    if args.json:
        write_json({'passed': all(r.passed for r in results), 'suites': [r.to_json() for r in results]}, args.out)
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<18} {r.detail}" for r in results]
        text = "\n".join(lines) + "\n"
        if args.out is None:
            sys.stdout.write(text)
        else:
            args.out.parent.mkdir(parents=True, exist_ok=True)
            args.out.write_text(text)

    failed = [r.name for r in results if not r.passed]
    print_run_summary("Suites run", len(results), start, unit="suites")
    if failed:
        print(f"\n❌ Failed: {', '.join(failed)}", file=sys.stderr)
        return VERIFY_FAILED
    return 0


COMMANDS = {
    'run': cmd_run,
    'wigner': cmd_wigner,
    'grover': cmd_grover,
    'dj': cmd_dj,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except SimulatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
