"""
Paradeduction CLI Routes
Commands for paradeducibility, the paraconsistent closure, weak and strong
consequence, and verification of serialized paradeduction witnesses.
"""

import logging
import time

from command_router import CommandRouter
from paradeduction_service import parse_paradeduction, render_paradeduction
from query_context import (
    QUERY_ARGUMENTS,
    QueryContext,
    goal_arguments,
    oracle_arguments,
    output_arguments,
    premise_arguments,
    read_text,
    system_arguments,
)
from report_service import EXIT_NO, EXIT_YES, QueryReport, format_formulas

# Configure logging
logger = logging.getLogger(__name__)

# Create router for paradeduction commands
router = CommandRouter("paradeduction", __name__)


def entailment_arguments(parser) -> None:
    parser.add_argument("--entailment", choices=["syntactic", "semantic"],
                        help="relation tested on each maximal consistent subset")


def witness_arguments(parser) -> None:
    parser.add_argument("--witness", required=True, metavar="FILE", help="serialized paradeduction")


@router.command("paradeduce", help="decide A |-P a and print a witness paradeduction", arguments=QUERY_ARGUMENTS + (goal_arguments,))
def paradeduce(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    result = context.paradeductions.paradeducible(context.premises(), context.goal(), context.budget())

    witness = render_paradeduction(result.witness, context.signature) if result.witness else None
    report = QueryReport.from_verdict(
        "paradeduce", result.verdict,
        witness=witness,
        oracle=context.oracle_description(),
        delegated=result.delegated,
        metadata={"subsets_scanned": result.subsets_scanned},
    )
    if result.support is not None:
        report.metadata["support"] = format_formulas(result.support, context.signature)
    if result.unknown_branches:
        report.metadata["unknown_branches"] = result.unknown_branches
    if result.message:
        report.metadata["note"] = result.message
    return report.stamp(start_time)


@router.command("cn-para", help="paraconsistent closure Cn_P(A) within a finite universe", arguments=QUERY_ARGUMENTS)
def paraconsistent_closure(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    closure = context.paradeductions.cn_para(context.premises(), context.universe())
    report = QueryReport(
        "cn-para", "ok", EXIT_YES,
        oracle=context.oracle_description(),
        lines=[format_formulas(closure, context.signature)],
        metadata={"size": len(closure)},
    )
    return report.stamp(start_time)


def _maximal_subset_consequence(args, command: str, strong: bool) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    entailment = context.entailment(args.entailment)
    service = context.paradeductions
    check = service.strong_consequence if strong else service.weak_consequence
    answer = check(entailment, context.premises(), context.goal())
    report = QueryReport.from_bool(
        command, answer,
        oracle=context.oracle_description(),
        metadata={"entailment": entailment.name},
    )
    return report.stamp(start_time)


@router.command("weak", help="goal follows from some maximal consistent subset",
                arguments=QUERY_ARGUMENTS + (goal_arguments, entailment_arguments))
def weak(args) -> QueryReport:
    return _maximal_subset_consequence(args, "weak", strong=False)


@router.command("strong", help="goal follows from every maximal consistent subset",
                arguments=QUERY_ARGUMENTS + (goal_arguments, entailment_arguments))
def strong(args) -> QueryReport:
    return _maximal_subset_consequence(args, "strong", strong=True)


@router.command(
    "verify-paradeduction",
    help="verify a serialized paradeduction against a premise set",
    arguments=(system_arguments, oracle_arguments, premise_arguments, witness_arguments, output_arguments),
)
def verify_paradeduction(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    premises = context.premises()
    sigma = parse_paradeduction(read_text(args.witness), context.system, premises or None)
    result = context.paradeductions.verify_paradeduction(sigma.premises, sigma)

    report = QueryReport(
        "verify-paradeduction",
        "valid" if result.is_valid else "invalid",
        EXIT_YES if result.is_valid else EXIT_NO,
        oracle=context.oracle_description(),
        lines=[f"step {v.step}: {v.kind.value}: {v.message}" for v in result.violations],
    )
    return report.stamp(start_time)
