"""
Blueprint-style grouping of CLI subcommands. Each feature package defines a
`router` and decorates its handlers; app.py registers every router on the
argument parser.
"""

import argparse
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

# Configure logging
logger = logging.getLogger(__name__)

ArgumentGroup = Callable[[argparse.ArgumentParser], None]


@dataclass
class Command:
    name: str
    help: str
    handler: Callable
    arguments: Sequence[ArgumentGroup]


class CommandRouter:
    """Named collection of subcommands"""

    def __init__(self, name: str, import_name: Optional[str] = None):
        self.name = name
        self.import_name = import_name
        self.logger = logging.getLogger(import_name or f"{__name__}.{name}")
        self.commands: List[Command] = []

    def command(self, name: str, help: str, arguments: Sequence[ArgumentGroup] = ()):
        """Decorator registering a handler `handler(args) -> QueryReport` under `name`"""
        def decorator(handler: Callable) -> Callable:
            self.commands.append(Command(name, help, handler, tuple(arguments)))
            return handler
        return decorator

    def register(self, subparsers) -> None:
        for command in self.commands:
            parser = subparsers.add_parser(command.name, help=command.help, description=command.help)
            for add_arguments in command.arguments:
                add_arguments(parser)
            parser.set_defaults(handler=command.handler, command_name=command.name)
        self.logger.debug(f"Registered router '{self.name}' with {len(self.commands)} command(s)")
