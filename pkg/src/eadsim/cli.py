"""Command-line entry point: ``eadsim {validate,plan,run,trace,measures}``.

Exit status 0 on success, 1 for usage or configuration errors, 2 for
runtime or session failures.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import export
from .errors import ConfigurationError, ContractViolation, DomainError, EadError
from .linalg import von_neumann_entropy
from .measures import (
    bell_diagonal_decomposition,
    classical_correlation,
    concurrence,
    negativity,
    quantum_mutual_information,
    ree,
    tangle,
)
from .protocols import Mode, entanglement_trace
from .ree import ree_numeric
from .scenario import FORMATS, load_scenario
from .simulate import plan, run_scenario
from .statefile import load_state

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2
EXTENSIONS = {"csv": "csv", "json-lines": "jsonl"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="override channel.seed from the config")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    common.add_argument("--format", choices=FORMATS, help="trace export format (overrides output.format)")

    parser = _Parser(prog="eadsim", description="Entanglement availability differentiation simulator")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    p = sub.add_parser("validate", parents=[common], help="parse and validate a scenario")
    p.add_argument("config")
    p = sub.add_parser("plan", parents=[common], help="print the timing directives")
    p.add_argument("config")
    p = sub.add_parser("run", parents=[common], help="simulate and export results")
    p.add_argument("config")
    p = sub.add_parser("trace", parents=[common], help="export the trace of one pair")
    p.add_argument("config")
    p.add_argument("--pair", required=True, help="pair id")
    p = sub.add_parser("measures", parents=[common], help="entanglement measures of a stored state")
    p.add_argument("state_file")
    p.add_argument("--numeric", action="store_true", help="also run the numerical REE minimiser")
    return parser


def _config(args):
    cfg = load_scenario(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg.with_output(args.out, args.format)


def cmd_validate(args) -> int:
    cfg = _config(args)
    print(f"{args.config}: ok ({cfg.mode.value}, {len(cfg.pairs)} pairs)")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = _config(args)
    for d in plan(cfg):
        if d.mode is Mode.AMOUNT:
            print(f"{d.pair_id}\tx={d.x_offset:.12g}\tT_U={d.application_phase:.12g}\tx/pi={d.x_offset / math.pi:.12g}")
        else:
            print(f"{d.pair_id}\tT_pi={d.oscillation_period:.12g}\tcompletion={d.oscillation_period / 4:.12g}")
    return EXIT_OK


def _out_dir(cfg) -> Path:
    out = Path(cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    cfg = _config(args)
    result = run_scenario(cfg)
    out = _out_dir(cfg)
    fmt = cfg.output.format
    export.export_traces(result.traces, fmt, out / f"traces.{EXTENSIONS[fmt]}")
    export.export_sessions(result.results, out / "sessions.csv")
    export.export_timeline(result.timeline, out / "timeline.jsonl")
    for r in result.results:
        print(f"{r.pair_id}\tmetric={r.schedule_metric:.12g}\ttangle={r.tangle:.12g}\t"
              f"ree={r.ree:.12g}\tcompleted={r.wall_clock_completion:.12g}s")
    for f in result.failures:
        print(f"{f.pair_id}\tFAILED: {f}", file=sys.stderr)
    return EXIT_RUNTIME if result.failures else EXIT_OK


def cmd_trace(args) -> int:
    cfg = _config(args)
    pair = cfg.pair(args.pair)
    directive = next(d for d in plan(cfg) if d.pair_id == pair.pair_id)
    trace = entanglement_trace(pair, directive, cfg.trace.times(), global_period=cfg.global_period,
                               hold=cfg.trace.hold)
    fmt = cfg.output.format
    if args.out:
        path = export.export_traces([trace], fmt, _out_dir(cfg) / f"trace_{pair.pair_id}.{EXTENSIONS[fmt]}")
        print(path)
    else:
        sys.stdout.write(export.traces_to_text([trace], fmt))
    return EXIT_OK


def cmd_measures(args) -> int:
    rho = load_state(args.state_file)
    print(f"von_neumann_entropy\t{von_neumann_entropy(rho):.12g}")
    if rho.dim != 4:
        return EXIT_OK
    print(f"negativity\t{negativity(rho):.12g}")
    print(f"concurrence\t{concurrence(rho):.12g}")
    print(f"tangle\t{tangle(rho):.12g}")
    print(f"mutual_information\t{quantum_mutual_information(rho):.12g}")
    try:
        spectrum = bell_diagonal_decomposition(rho, align=True)
    except DomainError:
        spectrum = None
    if spectrum is not None:
        print(f"ree_closed_form\t{ree(rho):.12g}")
        print(f"classical_correlation\t{classical_correlation(spectrum):.12g}")
    if args.numeric or spectrum is None:
        res = ree_numeric(rho, seed=args.seed or 0)
        print(f"ree_numeric\t{res.value:.12g}")
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "plan": cmd_plan, "run": cmd_run, "trace": cmd_trace,
            "measures": cmd_measures}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, ContractViolation) as exc:
        print(f"eadsim: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"eadsim: {exc}", file=sys.stderr)
        return EXIT_CONFIG if getattr(exc, "filename", None) else EXIT_RUNTIME
    except EadError as exc:
        print(f"eadsim: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
