"""k-induction model checking for small symbolic transition systems.

    >>> import kindmc
    >>> sys = kindmc.generate("chain_bug", 5)
    >>> kindmc.verify(sys)["k"]
    4
"""

import json

from ._core import (
    CapError,
    ConfigError,
    EngineError,
    ParseError,
    System,
    base_case_smtlib,
    bfs_check,
    generate,
    load,
    parse_system,
)
from . import _core

__all__ = [
    "CapError",
    "ConfigError",
    "EngineError",
    "ParseError",
    "System",
    "base_case_smtlib",
    "bfs_check",
    "compare",
    "generate",
    "load",
    "main",
    "parse_system",
    "verify",
]


def verify(system, engine="extended", max_k=100, solver=None,
           target_recheck="same", timeout_ms=0, validate=True, name="system"):
    """Run one engine and return the report as a dict."""
    return json.loads(_core.verify_json(system, engine, max_k, solver,
                                        target_recheck, timeout_ms, validate,
                                        name))


def compare(system, max_k=100, solver=None, name="system"):
    """Run both engines; returns {"plain": record, "extended": record}."""
    plain, extended = _core.compare_json(system, max_k, solver, name)
    return {"plain": json.loads(plain), "extended": json.loads(extended)}


def main(args):
    """Run the command line in-process; returns (exit_code, stdout, stderr)."""
    return _core.cli(list(args))
