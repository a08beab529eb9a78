"""
Deduction CLI Routes
Commands for deducibility queries, consequence closure, theories and
verification of serialized deduction witnesses.
"""

import logging
import time

from command_router import CommandRouter
from deduction_service import parse_deduction, render_deduction
from query_context import (
    QUERY_ARGUMENTS,
    QueryContext,
    goal_arguments,
    output_arguments,
    premise_arguments,
    read_text,
    system_arguments,
    universe_arguments,
)
from report_service import EXIT_NO, EXIT_YES, QueryReport, format_formulas, format_subset

# Configure logging
logger = logging.getLogger(__name__)

# Create router for deduction commands
router = CommandRouter("deduction", __name__)


def witness_arguments(parser) -> None:
    parser.add_argument("--witness", required=True, metavar="FILE", help="serialized witness")


@router.command("deduce", help="decide A |- a and print a witness deduction", arguments=QUERY_ARGUMENTS + (goal_arguments,))
def deduce(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    result = context.deductions.deducible(context.premises(), context.goal(), context.budget())

    witness = render_deduction(result.witness, context.signature) if result.witness else None
    report = QueryReport.from_verdict("deduce", result.verdict, witness=witness, delegated=result.delegated)
    if result.message:
        report.metadata["note"] = result.message
    return report.stamp(start_time)


@router.command("cn", help="consequence closure Cn(A) within a finite universe", arguments=QUERY_ARGUMENTS)
def consequence_closure(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    closure = context.deductions.closure(context.premises(), context.universe())
    report = QueryReport(
        "cn", "ok", EXIT_YES,
        lines=[format_formulas(closure, context.signature)],
        metadata={"size": len(closure)},
    )
    return report.stamp(start_time)


@router.command("theories", help="theories and consistent theories of a finite universe", arguments=QUERY_ARGUMENTS)
def theories(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    result = context.deductions.theories(context.universe())
    lines = [f"consistent {format_subset(t, context.signature)}" for t in result.consistent_theories]
    report = QueryReport(
        "theories", "ok", EXIT_YES,
        lines=lines,
        metadata={"theories": len(result.theories), "consistent_theories": len(result.consistent_theories)},
    )
    return report.stamp(start_time)


@router.command(
    "verify-deduction",
    help="verify a serialized deduction against a premise set",
    arguments=(system_arguments, premise_arguments, universe_arguments, witness_arguments, output_arguments),
)
def verify_deduction(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    premises = context.premises()
    deduction = parse_deduction(read_text(args.witness), context.system, premises or None)
    result = context.deductions.verify_deduction(deduction.premises, deduction, context.universe())

    report = QueryReport(
        "verify-deduction",
        "valid" if result.is_valid else "invalid",
        EXIT_YES if result.is_valid else EXIT_NO,
        lines=[f"step {v.step}: {v.kind.value}: {v.message}" for v in result.violations],
    )
    return report.stamp(start_time)
