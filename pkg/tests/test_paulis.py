import numpy as np
import pytest

from dotoc.linalg import frobenius_norm_normalized, random_hermitian
from dotoc.model import ModelSpec
from dotoc.paulis import (
    PauliString,
    acts_trivially_on,
    body_tables,
    embed_site_operator,
    pauli_coefficients,
    pauli_decompose,
    pauli_matrix,
    pauli_reconstruct,
    pauli_string_matrix,
)
from oracles import brute_force_pauli_coeffs, heisenberg_backward


def test_pauli_matrix_definitions():
    assert np.array_equal(pauli_matrix("Z"), np.diag([1, -1]).astype(complex))
    x = pauli_matrix("X")
    assert np.array_equal(x @ x, np.eye(2))
    lowering = (pauli_matrix("X") - 1j * pauli_matrix("Y")) / 2
    assert np.array_equal(lowering, np.array([[0, 0], [1, 0]], dtype=complex))


def test_pauli_matrix_rejects_unknown():
    with pytest.raises(ValueError):
        pauli_matrix("Q")


def test_embed_convention_site1_most_significant():
    z = pauli_matrix("Z")
    assert np.array_equal(np.diag(embed_site_operator(z, 1, 2)).real, [1, 1, -1, -1])
    assert np.array_equal(np.diag(embed_site_operator(z, 2, 2)).real, [1, -1, 1, -1])
    for site in (1, 2, 3):
        emb = embed_site_operator(pauli_matrix("I"), site, 3)
        assert np.array_equal(emb, np.eye(8))


def test_embed_site_out_of_range():
    with pytest.raises(ValueError):
        embed_site_operator(pauli_matrix("Z"), 4, 3)


def test_embed_disjoint_sites_commute_exactly():
    a = embed_site_operator(pauli_matrix("X"), 1, 3)
    b = embed_site_operator(pauli_matrix("Z"), 2, 3)
    assert np.array_equal(a @ b, b @ a)


def test_pauli_string_body_size_derived():
    s = PauliString("ZIX", 2.0)
    assert s.body_size == 2
    assert PauliString("III").body_size == 0
    with pytest.raises(ValueError):
        PauliString("ZQI")


def test_decompose_single_site():
    op = embed_site_operator(pauli_matrix("Z"), 1, 3)
    strings = pauli_decompose(op)
    assert len(strings) == 1
    assert strings[0].word == "ZII"
    assert strings[0].coefficient == pytest.approx(1.0)


def test_decompose_identity():
    strings = pauli_decompose(np.eye(4, dtype=complex))
    assert len(strings) == 1
    assert strings[0].word == "II"
    assert strings[0].coefficient == pytest.approx(1.0)


def test_decompose_heisenberg_operator_vs_brute_force():
    # e^{-iHt} sigma^z_1 e^{iHt} at N=3, t=1: all 64 coefficients
    model = ModelSpec(n_sites=3)
    op = heisenberg_backward(model, embed_site_operator(pauli_matrix("Z"), 1, 3), 1.0)
    want = brute_force_pauli_coeffs(op)
    got = {s.word: s.coefficient for s in pauli_decompose(op)}
    for word, c in want.items():
        assert got.get(word, 0.0) == pytest.approx(c, abs=1e-12)
    recon = pauli_reconstruct(pauli_decompose(op), 3)
    assert np.abs(recon - op).max() < 1e-10


def test_roundtrip_random_hermitian(rng):
    for n in (1, 2, 3, 4):
        op = random_hermitian(n, rng)
        recon = pauli_reconstruct(pauli_decompose(op), n)
        assert np.abs(recon - op).max() < 1e-10


def test_parseval(rng):
    op = random_hermitian(3, rng)
    coeffs = pauli_coefficients(op)
    assert np.sum(np.abs(coeffs) ** 2) == pytest.approx(
        frobenius_norm_normalized(op) ** 2, abs=1e-9
    )


def test_decompose_threshold_drops_noise():
    op = np.eye(4, dtype=complex)
    op[0, 0] += 1e-14
    assert len(pauli_decompose(op)) == 1


def test_body_tables_counts():
    n = 4
    body, one, nn = body_tables(n)
    assert one.sum() == 3 * n
    assert nn.sum() == 9 * (n - 1)
    assert body[0] == 0
    # word XX II -> index of X=1 at sites 1,2
    idx = (1 << (2 * (n - 1))) + (1 << (2 * (n - 2)))
    assert body[idx] == 2 and nn[idx]


def test_string_matrix_matches_kron():
    word = "XZY"
    mats = [pauli_matrix(ch) for ch in word]
    want = np.kron(np.kron(mats[0], mats[1]), mats[2])
    assert np.array_equal(pauli_string_matrix(word), want)


def test_acts_trivially_on():
    op = embed_site_operator(pauli_matrix("Z"), 2, 3)
    assert acts_trivially_on(op, 1)
    assert acts_trivially_on(op, 3)
    assert not acts_trivially_on(op, 2)
