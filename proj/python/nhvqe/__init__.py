"""Variance-based variational eigensolver for non-Hermitian matrices."""

from ._core import (
    Error,
    builtin,
    builtin_names,
    cartesian_decompose,
    decompose_pauli,
    eigenvalues,
    run_cli,
    solve,
    sweep,
    variance,
)

__all__ = [
    "Error",
    "builtin",
    "builtin_names",
    "cartesian_decompose",
    "decompose_pauli",
    "eigenvalues",
    "run_cli",
    "solve",
    "sweep",
    "variance",
]
