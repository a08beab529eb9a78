"""
Command-line entry point. Registers every feature router as a subcommand.

Exit codes: 0 Yes/true, 1 No/false, 2 Unknown, 3 usage or input error.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

import config
from errors import ParadeductionError
from report_service import EXIT_ERROR, render_report

from consistency.routes import router as consistency_router
from deduction.routes import router as deduction_router
from metatheory.routes import router as metatheory_router
from paradeduction.routes import router as paradeduction_router
from presets.routes import router as presets_router
from valuation.routes import router as valuation_router

# Configure logging
logger = logging.getLogger(__name__)

ROUTERS = (
    deduction_router,
    consistency_router,
    valuation_router,
    paradeduction_router,
    metatheory_router,
    presets_router,
)


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 means Unknown here"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"error: {message} (code=USAGE)\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="paradeduction",
        description="Deduction, consistency and paraconsistent consequence over finite formal systems",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=ArgumentParser)
    subparsers.required = True
    for router in ROUTERS:
        router.register(subparsers)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, dispatch to the command handler and print its report.

    Returns:
        Process exit code
    """
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    logger.info(f"Running command '{args.command_name}'")

    try:
        report = args.handler(args)
    except ParadeductionError as exc:
        logger.debug(f"Command '{args.command_name}' failed", exc_info=True)
        print(f"error: {exc} (code={exc.code})", file=sys.stderr)
        return EXIT_ERROR

    sys.stdout.write(render_report(report, getattr(args, "format", "text")))
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
