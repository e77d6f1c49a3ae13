# app/main.py

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Sequence

from config import settings
from app.arbiter_core import (
    UNLIMITED,
    ArbiterConfig,
    ack_scan,
    new_arbiter,
    run,
)
from app.arbiter_enums import Policy, WorkloadKind
from app.arbiter_errors import (
    ConfigurationError,
    DimensionError,
    TraceParseError,
)
from app.arbiter_logger import logger_names, setup_logger, clean_logger
from app.metrics import analyze
from app.netlist_model import build_chain, build_tree, depth_sweep
from app.signals import RequestVector
from app.verification import verify_all
from app.workload import (
    WorkloadSpec,
    generate,
    read_trace,
    write_grants,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_TRACE_ERROR = 3

PORT_NOTE = (
    "Ports are numbered 0..N-1: device 1 of an N-device arbiter is port 0"
    " and device N is port N-1."
)

main_logger = logging.getLogger(logger_names.MAIN)

################################################################################
# argument parsing

def _port_list(text: str) -> List[int]:
    """ argparse type for `--ports 4,6,8`. """
    try:
        ports = [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma separated list of integers, got {text!r}"
        ) from None
    if not ports or any(n < 1 for n in ports):
        raise argparse.ArgumentTypeError(
            f"port counts must be positive integers, got {text!r}"
        )
    return ports


def _time_slice(text: str) -> Optional[int]:
    """ argparse type for `--slice <int|unlimited>`. """
    if text.strip().lower() == "unlimited":
        return UNLIMITED
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected an integer or 'unlimited', got {text!r}"
        ) from None


def _bit_string(text: str) -> str:
    if not text or any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"expected a 0/1 string, got {text!r}")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rr-arbiter",
        description="Cycle-accurate round-robin arbiter toolkit.",
        epilog=PORT_NOTE,
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="log progress to stderr"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    simulate = subparsers.add_parser(
        "simulate",
        help="run a workload through the arbiter and report metrics",
        epilog=PORT_NOTE,
    )
    simulate.add_argument("--ports", type=int, default=None,
        help=f"number of ports N (default {settings.DEFAULT_NUM_PORTS})")
    simulate.add_argument("--policy", type=str.lower,
        choices=[str(p) for p in Policy], default=settings.DEFAULT_POLICY.lower())
    simulate.add_argument("--slice", dest="time_slice", type=_time_slice,
        default=settings.DEFAULT_TIME_SLICE,
        help="cycles per grant, or 'unlimited'")
    simulate.add_argument("--workload", type=str.lower,
        choices=[str(k) for k in WorkloadKind if k is not WorkloadKind.EXPLICIT],
        default=str(WorkloadKind.SATURATED))
    simulate.add_argument("--p", type=float, default=settings.DEFAULT_BERNOULLI_P,
        help="bernoulli request probability")
    simulate.add_argument("--burst", type=int, default=settings.DEFAULT_BURST_LEN,
        help="onoff burst length")
    simulate.add_argument("--idle", type=int, default=settings.DEFAULT_IDLE_LEN,
        help="onoff idle length")
    simulate.add_argument("--cycles", type=int, default=None,
        help=f"trace length (default {settings.DEFAULT_CYCLES}, or the"
        + " whole --trace file)")
    simulate.add_argument("--seed", type=int, default=None,
        help=f"PRNG seed (falls back to ${settings.SEED_ENV_VAR})")
    simulate.add_argument("--persistent", type=_port_list, default=[],
        help="comma separated ports that request on every cycle")
    simulate.add_argument("--reset-cycles", type=int, default=0,
        help="leading reset cycles")
    simulate.add_argument("--trace", default=None,
        help="CSV request trace to replay instead of a generated workload")
    simulate.add_argument("--out", default=None,
        help="write the JSON report here instead of stdout")
    simulate.add_argument("--grants-csv", default=None,
        help="write the per-cycle grants CSV here")
    simulate.add_argument("--db", default=None,
        help="SQLAlchemy URL of the run history database")
    simulate.set_defaults(handler=cmd_simulate)

    depth = subparsers.add_parser(
        "depth",
        help="critical-path depth of the chain and tree grant logic",
    )
    depth.add_argument("--ports", type=_port_list,
        default=list(settings.DEFAULT_DEPTH_SWEEP))
    depth.add_argument("--netlist-dir", default=None,
        help="also write chain_N.net and tree_N.net text netlists here")
    depth.set_defaults(handler=cmd_depth)

    verify = subparsers.add_parser(
        "verify",
        help="exhaustive oracle and gate-model equivalence checks",
    )
    verify.add_argument("--max-ports", type=int, default=6,
        help=f"largest N checked (at most {settings.MAX_VERIFY_PORTS})")
    verify.add_argument("--traces", type=int, default=settings.VERIFY_TRACE_COUNT,
        help="random traces per port count for the trace suites")
    verify.add_argument("--length", type=int, default=settings.VERIFY_TRACE_LENGTH,
        help="cycles per random trace")
    verify.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    verify.add_argument("--jobs", type=int, default=1,
        help="threads to spread port counts over")
    verify.set_defaults(handler=cmd_verify)

    ack = subparsers.add_parser(
        "ack",
        help="turn hit / turn miss table for token and request bits",
        epilog=PORT_NOTE,
    )
    ack.add_argument("--tokens", type=_bit_string, default="00111")
    ack.add_argument("--requests", type=_bit_string, default="11010")
    ack.set_defaults(handler=cmd_ack)

    runs = subparsers.add_parser("runs", help="list recorded simulation runs")
    runs.add_argument("--db", default=None,
        help="SQLAlchemy URL of the run history database")
    runs.add_argument("--policy", type=str.lower,
        choices=[str(p) for p in Policy], default=None)
    runs.set_defaults(handler=cmd_runs)

    return parser

################################################################################
# commands

def _resolve_seed(seed: Optional[int]) -> int:
    """ --seed, then $RR_ARBITER_SEED, then settings.DEFAULT_SEED. """
    if seed is not None:
        return seed
    env_seed = os.environ.get(settings.SEED_ENV_VAR)
    if env_seed is None or not env_seed.strip():
        return settings.DEFAULT_SEED
    try:
        return int(env_seed)
    except ValueError:
        raise ConfigurationError(
            f"${settings.SEED_ENV_VAR} must be an integer, not {env_seed!r}"
        ) from None


def _emit(text: str, path: Optional[str]) -> None:
    """ Machine output goes to `path`, or to stdout. """
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as out_file:
            out_file.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    """ workload -> arbiter -> metrics; writes the SimReport JSON. """
    if args.cycles is not None and args.cycles < 0:
        raise ConfigurationError(f"--cycles must be >= 0, not {args.cycles}")
    if args.trace:
        records = read_trace(args.trace)
        width = len(records[0].requests) if records else args.ports
        if width is None:
            raise ConfigurationError(
                f"trace {args.trace} is empty; give --ports"
            )
        if args.ports is not None and args.ports != width:
            raise ConfigurationError(
                f"--ports {args.ports} does not match the {width}-port trace"
                + f" {args.trace}"
            )
        num_ports = width
        if args.cycles is not None:
            records = records[:args.cycles]
        spec = WorkloadSpec(
            kind=WorkloadKind.EXPLICIT,
            length=args.cycles,
            trace_path=args.trace
        )
    else:
        num_ports = (
            settings.DEFAULT_NUM_PORTS if args.ports is None else args.ports
        )
        spec = WorkloadSpec(
            kind=WorkloadKind.from_value(args.workload),
            length=settings.DEFAULT_CYCLES if args.cycles is None else args.cycles,
            seed=_resolve_seed(args.seed),
            p=args.p,
            burst_len=args.burst,
            idle_len=args.idle,
            persistent_ports=tuple(args.persistent),
            reset_cycles=args.reset_cycles,
        )
        # validate the arbiter config before generating anything
        ArbiterConfig(num_ports, args.time_slice, args.policy)
        records = generate(spec, num_ports)

    config = ArbiterConfig(num_ports, args.time_slice, args.policy)
    main_logger.info(
        "Simulating %s cycles on a %s-port %s arbiter.",
        len(records),
        num_ports,
        config.policy
    )
    outputs = run(new_arbiter(config), records)
    report = analyze(records, outputs)
    report_dict = report.to_dict()

    _emit(json.dumps(report_dict, indent=2) + "\n", args.out)
    if args.grants_csv:
        write_grants(outputs, args.grants_csv, num_ports)

    db_url = args.db or settings.DATABASE_URI
    if db_url:
        # imported here so sqlalchemy is only needed for the run history
        from app.database import DatabaseHandler
        with DatabaseHandler(db_url) as database_handler:
            database_handler.record_run(config, spec, report_dict)
    return EXIT_OK


def cmd_depth(args) -> int:
    """ One JSON row {n, chain_depth, tree_depth} per requested N. """
    rows = depth_sweep(args.ports)
    if args.netlist_dir:
        os.makedirs(args.netlist_dir, exist_ok=True)
        for n in args.ports:
            for graph in (build_chain(n), build_tree(n)):
                path = os.path.join(args.netlist_dir, f"{graph.structure}_{n}.net")
                _emit(graph.to_netlist_text(), path)
    _emit("".join(json.dumps(row._asdict()) + "\n" for row in rows), None)
    return EXIT_OK


def cmd_verify(args) -> int:
    """ Exit 0 iff every equivalence suite passes for N = 1 .. max_ports. """
    if not 1 <= args.max_ports <= settings.MAX_VERIFY_PORTS:
        raise ConfigurationError(
            f"--max-ports must be in [1, {settings.MAX_VERIFY_PORTS}];"
            + f" {args.max_ports} would need {args.max_ports * 2**args.max_ports}"
            + " exhaustive cases per suite"
        )
    if args.traces < 0 or args.length < 0 or args.jobs < 1:
        raise ConfigurationError("--traces/--length must be >= 0, --jobs >= 1")
    failures = verify_all(
        args.max_ports,
        args.traces,
        args.length,
        seed=args.seed,
        jobs=args.jobs
    )
    if failures:
        for failure in failures:
            main_logger.error("Counterexample: %s", failure)
        _emit("".join(json.dumps(f.to_dict()) + "\n" for f in failures), None)
        return EXIT_VERIFY_FAILED
    main_logger.info("All suites passed for N = 1..%s.", args.max_ports)
    return EXIT_OK


def cmd_ack(args) -> int:
    """ Port by port turn hit / turn miss classification. """
    results = ack_scan(
        RequestVector.from_string(args.tokens),
        RequestVector.from_string(args.requests)
    )
    lines = []
    for result in results:
        main_logger.info(result.message)
        row = result._asdict()
        row["event"] = str(result.event)
        row["message"] = result.message
        lines.append(json.dumps(row) + "\n")
    _emit("".join(lines), None)
    return EXIT_OK


def cmd_runs(args) -> int:
    """ Recorded simulation runs as JSON lines. """
    from app.database import DatabaseHandler
    db_url = args.db or settings.DATABASE_URI
    if not db_url:
        raise ConfigurationError("give --db or set settings.DATABASE_URI")
    with DatabaseHandler(db_url) as database_handler:
        lines = [
            json.dumps(run.to_dict()) + "\n"
            for run in database_handler.fetch_runs(args.policy)
        ]
    _emit("".join(lines), None)
    return EXIT_OK

################################################################################

def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse the command line, run one command and return its exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    # create the logger that handles logging streams
    logger = setup_logger(
        logger_names.MAIN,
        settings.LOG_FILE_PATH,
        console_level=logging.INFO if args.verbose else logging.WARNING,
    )
    try:
        return args.handler(args)
    except TraceParseError as e:
        logger.error("Trace error: %s", e)
        logger.debug("Trace error details.", exc_info = e)
        return EXIT_TRACE_ERROR
    except (ConfigurationError, DimensionError) as e:
        logger.error("Configuration error: %s", e)
        logger.debug("Configuration error details.", exc_info = e)
        return EXIT_CONFIG_ERROR
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_CONFIG_ERROR
    finally:
        # close the logger's handles
        clean_logger(logger)


if __name__ == "__main__":
    sys.exit(main())
