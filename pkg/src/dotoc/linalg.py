"""Operator norms and small matrix utilities."""

from dataclasses import dataclass

import numpy as np

from .paulis import num_sites


@dataclass(frozen=True)
class NormReport:
    operator_norm: float
    frobenius_normalized: float


def hermiticity_defect(op: np.ndarray) -> float:
    return float(np.abs(op - op.conj().T).max(initial=0.0))


def is_hermitian(op: np.ndarray, tol: float = 1e-10) -> bool:
    return hermiticity_defect(op) <= tol


def operator_norm(op: np.ndarray) -> float:
    """Largest singular value.

    Hermitian and anti-Hermitian inputs (every commutator of Hermitian
    operators is anti-Hermitian) go through an exact Hermitian eigenvalue
    solve; everything else falls back to singular values.
    """
    scale = float(np.abs(op).max(initial=0.0))
    if scale == 0.0:
        return 0.0
    tol = 1e-12 * max(scale, 1.0)
    if hermiticity_defect(op) <= tol:
        return float(np.abs(np.linalg.eigvalsh(op)).max())
    if float(np.abs(op + op.conj().T).max()) <= tol:
        return float(np.abs(np.linalg.eigvalsh(1j * op)).max())
    return float(np.linalg.svd(op, compute_uv=False)[0])


def frobenius_norm_normalized(op: np.ndarray) -> float:
    """sqrt(tr(op op') / 2^n), the infinite-temperature Frobenius norm."""
    n = num_sites(op)
    return float(np.sqrt(np.vdot(op, op).real / (1 << n)))


def norm_report(op: np.ndarray) -> NormReport:
    return NormReport(operator_norm(op), frobenius_norm_normalized(op))


def random_hermitian(n_sites: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian matrix with entries O(1), for randomized checks."""
    dim = 1 << n_sites
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (a + a.conj().T)


def random_density_matrix(n_sites: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (positive, unit trace)."""
    dim = 1 << n_sites
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
