"""Exact p-adic Betti numbers and torsion along towers of finite covers."""

from __future__ import annotations

from .complexes import ChainComplexSpec
from .engine import FieldSpec, InvariantSequence, Request, approximate, betti_at_level, torsion_at_level
from .groups import AbelianGroup, QuotientTower, TableGroup
from .padic import PAdicApprox, padic_limit

__all__ = [
    "AbelianGroup",
    "ChainComplexSpec",
    "FieldSpec",
    "InvariantSequence",
    "PAdicApprox",
    "QuotientTower",
    "Request",
    "TableGroup",
    "approximate",
    "betti_at_level",
    "padic_limit",
    "torsion_at_level",
]

__version__ = "0.1.0"
