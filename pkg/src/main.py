#!/usr/bin/env python3
import argparse
import dataclasses
import logging
import sys
import time
from typing import List, Optional, Sequence

from src.config import COMMANDS, PRESETS, RunConfig, config_to_text, load_config
from src.csv_exporter import CsvExporter
from src.errors import EntanglementToolError, IoError, NoWindow, NumericalError, ValidationError
from src.experiment_runner import ExperimentRunner
from src.systems import SWEEP_PARAMETER

# Set up logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

EXIT_CODES_HELP = ('exit codes: 0 success, 1 invalid input or a file that cannot be read or written, '
                   '2 numerical failure (no crossing, no window, quadrature did not converge)')

DEFAULT_FAMILY = {
    'harmonic-negativity': 'harmonic-nearest',
    'harmonic-phase': 'harmonic-nearest',
    'harmonic-limit': 'harmonic-nearest',
    'spin-negativity': 'spin-XX',
    'spin-phase': 'spin-XX',
    'certify': 'harmonic-nearest',
}


class _ArgumentParser(argparse.ArgumentParser):
    """Argument errors are validation errors (exit 1), not argparse's exit 2"""

    def error(self, message):
        raise ValidationError(message)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--preset', '-p', choices=sorted(PRESETS), help='Start from a built-in figure preset')
    parser.add_argument('--config', help='Path to a JSON run configuration')
    parser.add_argument('--family', '-f', help='System family, e.g. harmonic-nearest or spin-XX')
    parser.add_argument('--n', type=int, nargs='+', help='System size(s)')
    parser.add_argument('--T', type=float, nargs='+', help='Temperature(s)')
    parser.add_argument('--c', type=float, nargs='+', help='Nearest-neighbour coupling(s)')
    parser.add_argument('--mu', type=float, nargs='+', help='Next-nearest coupling(s)')
    parser.add_argument('--J', type=float, nargs='+', help='Spin exchange coupling(s)')
    parser.add_argument('--B', type=float, nargs='+', help='Magnetic field(s)')
    parser.add_argument('--partition', nargs='+', help='Partition kinds, e.g. even-odd half-half one-vs-rest')
    parser.add_argument('--boundary', choices=['periodic', 'open'], help='Spin-chain boundary condition')
    parser.add_argument('--t-max', type=float, help='Upper end of threshold and window scans')
    parser.add_argument('--tol', type=float, help='Bisection tolerance of threshold scans')
    parser.add_argument('--m', type=int, help='Partial-sum order of the macroscopic-limit bound')
    parser.add_argument('--s', type=int, help='Integration-by-parts order of the macroscopic-limit bound')
    parser.add_argument('--n-jobs', type=int, help='Worker count for grid evaluations (-1 for all cores)')
    parser.add_argument('--output', '-o', help='Path of the CSV to write')
    parser.add_argument('--metadata', help='Path of the JSON metadata sidecar to write')
    parser.add_argument('--plot-script', help='Path of a matplotlib script plotting the CSV')
    parser.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse command line arguments

    Returns:
        argparse.Namespace: Parsed arguments
    """
    parser = _ArgumentParser(description='Thermal entanglement of harmonic and spin chains: '
                                         'negativities, threshold temperatures and bound-entanglement windows',
                             epilog=EXIT_CODES_HELP)
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        _add_run_options(subparsers.add_parser(command, help=f"Run {command}"))
    reproduce = subparsers.add_parser('reproduce', help='Run a built-in figure preset')
    reproduce.add_argument('figure', choices=sorted(PRESETS), help='Preset name')
    reproduce.add_argument('--output', '-o', help='Path of the CSV to write')
    reproduce.add_argument('--metadata', help='Path of the JSON metadata sidecar to write')
    reproduce.add_argument('--plot-script', help='Path of a matplotlib script plotting the CSV')
    reproduce.add_argument('--n-jobs', type=int, help='Worker count for grid evaluations (-1 for all cores)')
    reproduce.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge preset, config file and command line flags into one RunConfig

    Flags override the config file, which overrides the preset. A coupling flag
    given for the swept parameter of a sweeping command fills the sweep grid;
    otherwise it must hold a single value.
    """
    if args.command == 'reproduce':
        config = PRESETS[args.figure]
        overrides = {}
        if args.output:
            overrides['output'] = args.output
        if args.n_jobs is not None:
            overrides['n_jobs'] = args.n_jobs
        return dataclasses.replace(config, **overrides)

    if args.config:
        base = load_config(args.config)
    elif args.preset:
        base = PRESETS[args.preset]
    else:
        base = None
    if base is not None and base.command != args.command:
        raise ValidationError(f"Configuration is for '{base.command}', not '{args.command}'")

    values = dataclasses.asdict(base) if base is not None else {'command': args.command}
    values['family'] = args.family or values.get('family') or DEFAULT_FAMILY[args.command]
    if args.mu is not None and args.family is None and args.command.startswith('harmonic-'):
        values['family'] = 'harmonic-next-nearest'
    if base is not None and values['family'] != base.family:
        values['couplings'] = {}

    sweeping = args.command in ('harmonic-phase', 'spin-phase', 'harmonic-limit', 'spin-negativity')
    parameter = values.get('parameter') or _default_parameter(args.command, values['family'])

    couplings = dict(values.get('couplings') or {})
    for name in ('c', 'mu', 'J', 'B'):
        given: Optional[List[float]] = getattr(args, name)
        if given is None:
            continue
        if sweeping and name == parameter:
            values['sweep'] = tuple(given)
            couplings.pop(name, None)
        elif len(given) == 1:
            couplings[name] = given[0]
        else:
            raise ValidationError(f"--{name} takes a single value for {args.command}")
    values['couplings'] = couplings

    if args.n is not None:
        values['sizes'] = tuple(args.n)
    if args.T is not None:
        values['temperatures'] = tuple(args.T)
    if args.partition is not None:
        values['partitions'] = tuple(kind.replace('-', '_') for kind in args.partition)
    for flag, name in (('boundary', 'boundary'), ('t_max', 't_max'), ('tol', 'tolerance'), ('m', 'm'),
                       ('s', 's'), ('n_jobs', 'n_jobs'), ('output', 'output')):
        if getattr(args, flag) is not None:
            values[name] = getattr(args, flag)
    for name in ('sizes', 'temperatures', 'sweep', 'partitions'):
        if name in values:
            values[name] = tuple(values[name])
    return RunConfig(**values)


def _default_parameter(command: str, family: str) -> str:
    if command == 'spin-negativity':
        return 'B'
    return SWEEP_PARAMETER.get(family, '')


def execute(config: RunConfig, metadata_path: Optional[str] = None, plot_script: Optional[str] = None) -> str:
    """
    Run a configuration and write its CSV (plus optional sidecar and plot script)

    Returns:
        str: Path of the CSV written
    """
    start = time.perf_counter()
    result = ExperimentRunner(config).run()
    exporter = CsvExporter()
    csv_path = exporter.emit_csv(result.frame, result.schema, config.output_path)
    wall_time = time.perf_counter() - start
    if metadata_path:
        exporter.write_metadata(metadata_path, config_to_text(config), wall_time, config.notes, result.extra)
    if plot_script:
        exporter.write_plot_script(plot_script, csv_path, result.schema)
    if 't_low' in result.extra:
        print(f"Bound-entanglement window: {result.extra['t_low']:.4f} < T < {result.extra['t_high']:.4f}")
    logger.info(f"Finished {config.command} in {wall_time:.1f}s")
    return csv_path


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run the command and map failures to exit codes

    Returns:
        int: 0 on success, 1 on validation errors and I/O failures, 2 on numerical failures
    """
    try:
        args = parse_arguments(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        config = build_config(args)
        execute(config, args.metadata, args.plot_script)
    except ValidationError as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_VALIDATION
    except (NumericalError, NoWindow) as e:
        logger.error(f"Numerical failure: {str(e)}")
        return EXIT_NUMERICAL
    except IoError as e:
        logger.error(f"I/O failure: {str(e)}")
        return EXIT_VALIDATION
    except EntanglementToolError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
