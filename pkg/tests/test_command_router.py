import argparse

from command_router import CommandRouter
from deduction.routes import router as deduction_router


def test_router_logs_under_its_module():
    assert deduction_router.logger.name == "deduction.routes"
    assert CommandRouter("scratch").logger.name == "command_router.scratch"


def test_router_registers_decorated_commands(caplog):
    router = CommandRouter("scratch", "scratch.routes")

    @router.command("echo", help="echo a word", arguments=(lambda parser: parser.add_argument("word"),))
    def echo(args):
        return args.word

    parser = argparse.ArgumentParser()
    subparsers = parser.add_subparsers(dest="command")
    with caplog.at_level("DEBUG", logger="scratch.routes"):
        router.register(subparsers)
    args = parser.parse_args(["echo", "hi"])
    assert args.handler(args) == "hi"
    assert args.command_name == "echo"
    assert any(record.name == "scratch.routes" for record in caplog.records)
