"""Dense complex matrix helpers used by every other module.

Matrices are square numpy arrays, complex128, treated as immutable once
built.  Basis indices are read little-endian: bit k of a basis index is
the state of qubit k (qubit label k+1 in the 1-based genotype encoding).
"""
from __future__ import annotations

import numpy as np


def identity(dim: int) -> np.ndarray:
    """dim x dim complex identity."""
    return np.eye(dim, dtype=complex)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b of two equal-order square matrices."""
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"dimension mismatch in mat_mul: {a.shape} vs {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; a owns the high-order index bits."""
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Complex conjugate transpose."""
    return a.conj().T


def trace(a: np.ndarray) -> complex:
    """Sum of diagonal entries."""
    return complex(np.trace(a))


def is_unitary(a: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff the max-norm of a @ a† - I is at most tol."""
    dev = a @ dagger(a) - np.eye(a.shape[0])
    return float(np.abs(dev).max()) <= tol
