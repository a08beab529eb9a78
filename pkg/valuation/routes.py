"""
Valuation CLI Routes
Commands for semantic consequence, paraconsequence, the theory-built
adequate structure and exhaustive adequacy checks.
"""

import logging
import time

from command_router import CommandRouter
from formula_service import render_formula
from query_context import QUERY_ARGUMENTS, QueryContext, goal_arguments
from report_service import EXIT_NO, EXIT_YES, QueryReport, format_subset
from valuation_service import (
    build_adequate_structure,
    check_adequacy,
    para_entails,
    render_valuation_structure,
)

# Configure logging
logger = logging.getLogger(__name__)

# Create router for valuation commands
router = CommandRouter("valuation", __name__)


def export_arguments(parser) -> None:
    parser.add_argument("--output", metavar="FILE", help="write the structure to a file instead of the report")


def adequacy_arguments(parser) -> None:
    parser.add_argument("--max-premises", type=int, help="largest premise set checked above the theory guard")


@router.command("entails", help="semantic consequence A |= a", arguments=QUERY_ARGUMENTS + (goal_arguments,))
def entails(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    structure = context.valuation_structure()
    answer = structure.entails(context.premises(), context.goal())
    return QueryReport.from_bool("entails", answer, oracle=structure.describe()).stamp(start_time)


@router.command("para-entails", help="paraconsequence A |=P a", arguments=QUERY_ARGUMENTS + (goal_arguments,))
def para_entails_command(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    structure = context.valuation_structure()
    answer = para_entails(structure, context.premises(), context.goal(), context.subset_cap())
    return QueryReport.from_bool("para-entails", answer, oracle=structure.describe()).stamp(start_time)


@router.command(
    "build-adequate",
    help="valuation structure of the consistent theories of a finite system",
    arguments=QUERY_ARGUMENTS + (export_arguments,),
)
def build_adequate(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    structure = build_adequate_structure(context.deductions, context.universe())
    text = render_valuation_structure(structure, context.signature)

    report = QueryReport("build-adequate", "ok", EXIT_YES, metadata={"valuations": len(structure.valuations)})
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
        report.metadata["output"] = args.output
    else:
        report.lines = text.rstrip("\n").splitlines()
    return report.stamp(start_time)


@router.command(
    "check-adequacy",
    help="exhaustive soundness and completeness check of a structure",
    arguments=QUERY_ARGUMENTS + (adequacy_arguments,),
)
def adequacy(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    structure = context.valuation_structure()
    result = check_adequacy(context.deductions, structure, context.universe(), args.max_premises)

    lines = [f"unsound: {format_subset(a, context.signature)} |- {render_formula(goal, context.signature)}" for a, goal in result.soundness_counterexamples]
    lines += [f"incomplete: {format_subset(a, context.signature)} |= {render_formula(goal, context.signature)}" for a, goal in result.completeness_counterexamples]
    report = QueryReport(
        "check-adequacy",
        "true" if result.adequate else "false",
        EXIT_YES if result.adequate else EXIT_NO,
        oracle=structure.describe(),
        lines=lines,
        metadata={"sound": result.sound, "complete": result.complete, "checked_sets": result.checked_sets},
    )
    return report.stamp(start_time)
