"""
Presets CLI Routes
Emits shipped presets as system-definition files.
"""

import logging
import time

from command_router import CommandRouter
from preset_service import load_preset, preset_names
from query_context import output_arguments
from report_service import EXIT_YES, QueryReport
from system_service import render_system_definition

# Configure logging
logger = logging.getLogger(__name__)

# Create router for preset commands
router = CommandRouter("presets", __name__)


def export_arguments(parser) -> None:
    parser.add_argument("name", choices=preset_names(), help="preset to export")
    parser.add_argument("--output", metavar="FILE", help="write the definition to a file")


@router.command("export-preset", help="print a preset as a system-definition file", arguments=(export_arguments, output_arguments))
def export_preset(args) -> QueryReport:
    start_time = time.time()
    preset = load_preset(args.name)
    source = f"# {preset.documentation}\n" + render_system_definition(preset.system)
    report = QueryReport("export-preset", "ok", EXIT_YES, metadata={"preset": args.name, "description": preset.documentation})
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(source)
        report.metadata["output"] = args.output
        logger.info(f"Exported preset '{args.name}' to {args.output}")
    else:
        report.lines = source.rstrip("\n").splitlines()
    return report.stamp(start_time)
