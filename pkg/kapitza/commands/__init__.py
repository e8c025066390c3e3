"""Command handlers, one per CLI command."""

from typing import Dict

from kapitza.commands.base import CommandResult, Handler
from kapitza.commands.classical import run_classical
from kapitza.commands.evolve import run_evolve
from kapitza.commands.floquet import run_floquet, run_scan
from kapitza.commands.resonator import run_resonator
from kapitza.commands.veff import run_veff
from kapitza.models.schemas import Command

COMMANDS: Dict[Command, Handler] = {
    Command.CLASSICAL: run_classical,
    Command.VEFF: run_veff,
    Command.FLOQUET: run_floquet,
    Command.SCAN: run_scan,
    Command.EVOLVE: run_evolve,
    Command.RESONATOR: run_resonator,
}

__all__ = [
    "COMMANDS",
    "CommandResult",
    "Handler",
]
