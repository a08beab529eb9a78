"""
Metatheory CLI Routes
Runs the metatheorem battery on a finite system and prints one line per claim.
"""

import logging
import time

from command_router import CommandRouter
from metatheory_service import MetatheoryService
from query_context import QueryContext, output_arguments, system_arguments
from report_service import EXIT_NO, EXIT_YES, QueryReport

# Configure logging
logger = logging.getLogger(__name__)

# Create router for metatheory commands
router = CommandRouter("metatheory", __name__)


def battery_arguments(parser) -> None:
    parser.add_argument("--max-premises", type=int, default=4, help="largest premise set in the exhaustive grids")
    parser.add_argument("--samples", type=int, default=1000, help="random paradeductions and subset pairs")
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument("--claims", help="comma-separated claim names (default: all)")


@router.command(
    "metatheory",
    help="check the metatheorems exhaustively on a finite system",
    arguments=(system_arguments, battery_arguments, output_arguments),
)
def metatheory(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    service = MetatheoryService(context.deductions, args.max_premises, args.samples, args.seed)
    names = [name.strip() for name in args.claims.split(",") if name.strip()] if args.claims else None
    result = service.run(names)

    lines = []
    for claim in result.claims:
        status = "pass" if claim.passed else "FAIL"
        detail = f" {claim.detail}" if claim.detail else ""
        lines.append(f"{status} {claim.name} (checked {claim.checked}, {claim.execution_time:.2f}s){detail}")
    report = QueryReport(
        "metatheory",
        result.overall_status,
        EXIT_YES if result.passed else EXIT_NO,
        lines=lines,
        metadata={"claims": len(result.claims)},
    )
    return report.stamp(start_time)
