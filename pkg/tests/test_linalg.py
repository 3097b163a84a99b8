import numpy as np
import pytest

from dotoc.linalg import (
    NormReport,
    frobenius_norm_normalized,
    norm_report,
    operator_norm,
    random_hermitian,
)
from dotoc.paulis import embed_site_operator, pauli_matrix


def test_operator_norm_pauli():
    assert operator_norm(pauli_matrix("Z")) == pytest.approx(1.0)


def test_operator_norm_commutator():
    x, z = pauli_matrix("X"), pauli_matrix("Z")
    comm = x @ z - z @ x  # -2i sigma^y, anti-Hermitian
    assert operator_norm(comm) == pytest.approx(2.0, abs=1e-12)


def test_operator_norm_vs_svd_oracle(rng):
    op = random_hermitian(3, rng)
    want = np.linalg.svd(op, compute_uv=False)[0]
    assert operator_norm(op) == pytest.approx(want, abs=1e-8)


def test_operator_norm_general_matrix(rng):
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    want = np.linalg.svd(a, compute_uv=False)[0]
    assert operator_norm(a) == pytest.approx(want, abs=1e-10)


def test_operator_norm_zero():
    assert operator_norm(np.zeros((4, 4), dtype=complex)) == 0.0


def test_frobenius_pauli_normalization():
    for n in (1, 3, 5):
        op = embed_site_operator(pauli_matrix("Z"), 1, n)
        assert frobenius_norm_normalized(op) == pytest.approx(1.0)
        assert frobenius_norm_normalized(np.eye(1 << n, dtype=complex)) == pytest.approx(1.0)


def test_frobenius_orthogonal_sum():
    op = embed_site_operator(pauli_matrix("Z"), 1, 2) + embed_site_operator(pauli_matrix("X"), 2, 2)
    assert frobenius_norm_normalized(op) == pytest.approx(np.sqrt(2.0))


def test_norm_report_ordering(rng):
    for _ in range(5):
        op = random_hermitian(2, rng)
        rep = norm_report(op)
        assert isinstance(rep, NormReport)
        assert rep.frobenius_normalized <= rep.operator_norm + 1e-9
