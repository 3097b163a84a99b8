import numpy as np
import pytest

from dotoc.linalg import hermiticity_defect
from dotoc.model import ChannelSpec, ModelSpec, build_hamiltonian, build_lindblad_ops
from dotoc.paulis import embed_site_operator, pauli_matrix
from oracles import kron_chain


def test_hamiltonian_one_site():
    h = build_hamiltonian(ModelSpec(n_sites=1))
    assert np.allclose(h, np.array([[-0.5, 1.05], [1.05, 0.5]]))


def test_hamiltonian_pure_bond():
    h = build_hamiltonian(ModelSpec(n_sites=2, g=0.0, h=0.0))
    assert np.allclose(h, -np.diag([1.0, -1.0, -1.0, 1.0]))


def test_hamiltonian_ground_energy_vs_independent_assembly():
    spec = ModelSpec(n_sites=3)
    # hand-assembled via explicit kron products, independent of the builder
    want = (
        -kron_chain("ZZI") - kron_chain("IZZ")
        - spec.g * (kron_chain("XII") + kron_chain("IXI") + kron_chain("IIX"))
        - spec.h * (kron_chain("ZII") + kron_chain("IZI") + kron_chain("IIZ"))
    )
    e_got = np.linalg.eigvalsh(build_hamiltonian(spec)).min()
    e_want = np.linalg.eigvalsh(want).min()
    assert e_got == pytest.approx(e_want, abs=1e-8)
    assert np.abs(build_hamiltonian(spec) - want).max() < 1e-12


def test_hamiltonian_hermitian_for_random_specs(rng):
    for _ in range(5):
        spec = ModelSpec(
            n_sites=int(rng.integers(1, 5)),
            g=float(rng.normal()),
            h=float(rng.normal()),
        )
        assert hermiticity_defect(build_hamiltonian(spec)) <= 1e-12


def test_truncated_hamiltonian_region_filtering():
    spec = ModelSpec(n_sites=3, region=(1, 2))
    want = (
        -kron_chain("ZZI")
        - spec.g * (kron_chain("XII") + kron_chain("IXI"))
        - spec.h * (kron_chain("ZII") + kron_chain("IZI"))
    )
    assert np.abs(build_hamiltonian(spec) - want).max() < 1e-12


def test_truncated_full_region_identical():
    full = build_hamiltonian(ModelSpec(n_sites=4))
    trunc = build_hamiltonian(ModelSpec(n_sites=4, region=(1, 4)))
    assert np.array_equal(full, trunc)


def test_lindblad_operator_counts():
    for kind, count in (("phase", 2), ("amplitude", 2), ("depolarizing", 6)):
        spec = ModelSpec(n_sites=2, channel=ChannelSpec(kind, 0.1))
        assert len(build_lindblad_ops(spec)) == count


def test_lindblad_none_empty():
    for n in (1, 3):
        assert build_lindblad_ops(ModelSpec(n_sites=n)) == []


def test_amplitude_lowering_matrix():
    spec = ModelSpec(n_sites=1, channel=ChannelSpec("amplitude", 0.3))
    (l,) = build_lindblad_ops(spec)
    assert np.allclose(l, np.sqrt(2.0) * np.array([[0, 0], [1, 0]]))
    # L'L = 2 |excited><excited| (rank 1, trace 2)
    ll = l.conj().T @ l
    assert np.allclose(ll, 2.0 * np.diag([1.0, 0.0]))


def test_phase_and_depolarizing_ops_hermitian():
    for kind in ("phase", "depolarizing"):
        spec = ModelSpec(n_sites=3, channel=ChannelSpec(kind, 0.1))
        for l in build_lindblad_ops(spec):
            assert hermiticity_defect(l) <= 1e-12


def test_lindblad_region_restriction():
    spec = ModelSpec(n_sites=3, channel=ChannelSpec("phase", 0.1), region=(2, 3))
    ops = build_lindblad_ops(spec)
    assert len(ops) == 2
    want = np.sqrt(0.5) * embed_site_operator(pauli_matrix("Z"), 2, 3)
    assert np.allclose(ops[0], want)


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelSpec("thermal", 0.1)
    with pytest.raises(ValueError):
        ChannelSpec("phase", -0.1)


def test_model_validation():
    with pytest.raises(ValueError):
        ModelSpec(n_sites=13)
    with pytest.raises(ValueError):
        ModelSpec(n_sites=3, region=(2, 4))
    with pytest.raises(ValueError):
        ModelSpec(n_sites=3, region=(3, 2))
