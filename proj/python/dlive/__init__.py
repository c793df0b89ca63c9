"""Checker and falsifier for differential liveness certificates."""

from pathlib import Path

from ._core import KernelError, ParseError, catalog, check, falsify, lie, normalize, simulate

__all__ = [
    "KernelError",
    "ParseError",
    "catalog",
    "check",
    "check_file",
    "falsify",
    "lie",
    "normalize",
    "simulate",
]


def check_file(path, seed=0):
    return check(Path(path).read_text(), seed)
