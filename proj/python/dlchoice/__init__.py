"""Datalog engine with relation-level choice (functional dependency) constraints."""

from dlchoice._core import emit_desugared, emit_ram, rule_count, run_program

__all__ = ["run_program", "emit_ram", "emit_desugared", "rule_count"]
__version__ = "0.1.0"
