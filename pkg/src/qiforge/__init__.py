"""Executable coarse geometry of finitely generated groups.

Word-metric balls, Følner profiles, bounded 0-chains and their Følner sum
statistic, quasi-isometry audits, the n-to-1 self maps of Z, Z^m and
BS(1,m), and finite-window matching tests for bounded-displacement
bijections.
"""
from .errors import BudgetExceeded, OutOfWindow, QIForgeError, SpecError
from .marked_group import (
    Ball,
    BaumslagSolitar,
    FreeAbelian,
    FreeGroup,
    MarkedGroup,
    WordMetric,
    ZxCyclic,
    ball,
    make_group,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BaumslagSolitar",
    "BudgetExceeded",
    "FreeAbelian",
    "FreeGroup",
    "MarkedGroup",
    "OutOfWindow",
    "QIForgeError",
    "SpecError",
    "WordMetric",
    "ZxCyclic",
    "ball",
    "make_group",
]
