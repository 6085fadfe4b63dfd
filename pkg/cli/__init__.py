"""Command-line surface: sweeps, tables, validation runs and figure recipes"""

from cli.commands import build_parser, run_command

__all__ = ["build_parser", "run_command"]
