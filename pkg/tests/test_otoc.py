import numpy as np
import pytest

from dotoc.evolution import GeneratorSpec, IntegratorConfig, evolve
from dotoc.linalg import frobenius_norm_normalized
from dotoc.model import ChannelSpec, ModelSpec
from dotoc.otoc import (
    HeatmapSeries,
    _make_point,
    otoc_closed_form,
    otoc_heatmap,
    otoc_protocol,
)
from dotoc.paulis import embed_site_operator, pauli_matrix
from oracles import unitary_otoc

IT = IntegratorConfig(dt=0.005, t_max=2.0, sample_every=100)


def _z(site, n):
    return embed_site_operator(pauli_matrix("Z"), site, n)


def _x(site, n):
    return embed_site_operator(pauli_matrix("X"), site, n)


def test_t0_commuting_paulis():
    for kind in ("none", "amplitude", "phase", "depolarizing"):
        model = ModelSpec(n_sites=2, channel=ChannelSpec(kind, 0.1 if kind != "none" else 0.0))
        p = otoc_closed_form(model, _z(2, 2), _z(1, 2), 0.0, IT)
        assert abs(p.f - 1.0) <= 1e-9
        assert abs(p.f_corrected - 1.0) <= 1e-9


def test_t0_anticommuting_paulis():
    model = ModelSpec(n_sites=2)
    p = otoc_closed_form(model, _x(1, 2), _z(1, 2), 0.0, IT)
    assert abs(p.f + 1.0) <= 1e-9


def test_non_unitary_rejected():
    model = ModelSpec(n_sites=2)
    bad = np.diag([1.0, 1.0, 1.0, 0.5]).astype(complex)
    with pytest.raises(ValueError):
        otoc_closed_form(model, bad, _z(1, 2), 0.5, IT)
    with pytest.raises(ValueError):
        otoc_protocol(model, _z(2, 2), bad, 0.5, IT)


def test_closed_form_unitary_lightcone_shape():
    # N=6, A at site 4, B at site 1: flat before arrival, decayed later
    model = ModelSpec(n_sites=6)
    cfg = IntegratorConfig(dt=0.005, t_max=6.0, sample_every=200)
    f_early = otoc_closed_form(model, _z(4, 6), _z(1, 6), 1.0, cfg)
    assert abs(f_early.f - 1.0) <= 0.02
    f_late = otoc_closed_form(model, _z(4, 6), _z(1, 6), 6.0, cfg)
    assert abs(f_late.f) < 0.35
    # cross-check both against the exact eigen-exponential oracle
    for t, point in ((1.0, f_early), (6.0, f_late)):
        assert point.f == pytest.approx(unitary_otoc(model, _z(4, 6), _z(1, 6), t), abs=1e-7)


def test_protocol_matches_closed_form_all_channels():
    n = 3
    za, zb = _z(3, n), _z(1, n)
    for kind in ("amplitude", "phase", "depolarizing"):
        model = ModelSpec(n_sites=n, channel=ChannelSpec(kind, 0.1))
        for t in (0.5, 1.0):
            cf = otoc_closed_form(model, za, zb, t, IT)
            pr = otoc_protocol(model, za, zb, t, IT)
            assert abs(cf.f - pr.f) <= 1e-6
            assert abs(cf.f_identity - pr.f_identity) <= 1e-6


def test_protocol_t0_trivial():
    model = ModelSpec(n_sites=2)
    p = otoc_protocol(model, _z(2, 2), _z(1, 2), 0.0, IT)
    assert abs(p.f - 1.0) <= 1e-9


def test_protocol_unitary_vs_heisenberg_oracle():
    model = ModelSpec(n_sites=3)
    for t in (0.5, 1.5):
        pr = otoc_protocol(model, _z(2, 3), _z(1, 3), t, IT)
        assert pr.f == pytest.approx(unitary_otoc(model, _z(2, 3), _z(1, 3), t), abs=1e-7)


def test_protocol_nonhermitian_unitary_b():
    # exercises the Hermitian-split path of the closed form
    n = 2
    phase_gate = embed_site_operator(np.diag([1.0, 1j]).astype(complex), 1, n)
    model = ModelSpec(n_sites=n, channel=ChannelSpec("phase", 0.1))
    for t in (0.5, 1.0):
        cf = otoc_closed_form(model, _z(2, n), phase_gate, t, IT)
        pr = otoc_protocol(model, _z(2, n), phase_gate, t, IT)
        assert abs(cf.f - pr.f) <= 1e-6


def test_heatmap_matches_pointwise_closed_form():
    cfg = IntegratorConfig(dt=0.01, t_max=1.0, sample_every=50)
    for kind in ("none", "phase", "amplitude"):
        gamma = 0.0 if kind == "none" else 0.1
        model = ModelSpec(n_sites=3, channel=ChannelSpec(kind, gamma))
        f, fid, corr = otoc_heatmap(model, 1, [1, 2, 3], cfg)
        for ti, t in enumerate(f.times):
            for si, site in enumerate(f.sites):
                point = otoc_closed_form(model, _z(site, 3), _z(1, 3), float(t), cfg)
                assert abs(f.values[ti, si] - point.f) <= 1e-10
                assert abs(fid.values[ti, si] - point.f_identity) <= 1e-10


def test_heatmap_unitary_identity_column():
    model = ModelSpec(n_sites=4)
    cfg = IntegratorConfig(dt=0.01, t_max=2.0, sample_every=50)
    f, fid, corr = otoc_heatmap(model, 1, [1, 2, 3, 4], cfg)
    assert np.abs(fid.values - 1.0).max() <= 1e-8
    assert np.abs(corr.values - f.values).max() <= 1e-8


def test_heatmap_value_range():
    model = ModelSpec(n_sites=3, channel=ChannelSpec("depolarizing", 0.2))
    cfg = IntegratorConfig(dt=0.01, t_max=3.0, sample_every=30)
    f, fid, _ = otoc_heatmap(model, 1, [1, 2, 3], cfg)
    assert f.values.max() <= 1.0 + 1e-6
    assert f.values.min() >= -1.0 - 1e-6


def test_corrected_invalid_flag():
    p = _make_point(1.0, 2, 1, 0.1, 1e-12)
    assert not p.valid
    assert np.isnan(p.f_corrected)
    q = _make_point(1.0, 2, 1, 0.1, 0.5)
    assert q.valid and q.f_corrected == pytest.approx(0.2)


def test_frobenius_identity_phase_channels(rng):
    # 2(1 - f_corrected) = ||[X(t), A]||_F^2 / ||X(t)||_F^2 for Hermitian L
    n = 4
    za, zb = _z(3, n), _z(1, n)
    for kind in ("phase", "depolarizing"):
        model = ModelSpec(n_sites=n, channel=ChannelSpec(kind, 0.15))
        for t in (0.5, 1.5):
            point = otoc_closed_form(model, za, zb, t, IT)
            x = evolve(GeneratorSpec(model, "backward", "adjoint"), zb,
                       IntegratorConfig(0.005, t, 1000))[-1][1]
            comm = x @ za - za @ x
            rhs = frobenius_norm_normalized(comm) ** 2 / frobenius_norm_normalized(x) ** 2
            assert abs(2.0 * (1.0 - point.f_corrected) - rhs) <= 1e-6


def test_unitary_commutator_identity(rng):
    # 1 - f = ||[B(t), A]||_F^2 / 2 at Gamma = 0
    n = 4
    model = ModelSpec(n_sites=n)
    za, zb = _z(2, n), _z(1, n)
    t = 1.0
    point = otoc_closed_form(model, za, zb, t, IT)
    x = evolve(GeneratorSpec(model, "backward", "adjoint"), zb,
               IntegratorConfig(0.005, t, 200))[-1][1]
    comm = x @ za - za @ x
    assert abs(1.0 - point.f - 0.5 * frobenius_norm_normalized(comm) ** 2) <= 1e-6


def test_heatmap_series_validation():
    with pytest.raises(ValueError):
        HeatmapSeries(np.array([0.0, 1.0]), [1, 2], np.zeros((3, 2)), "bad")


def test_heatmap_site_validation():
    model = ModelSpec(n_sites=3)
    with pytest.raises(ValueError):
        otoc_heatmap(model, 4, [1], IT)
    with pytest.raises(ValueError):
        otoc_heatmap(model, 1, [0, 1], IT)
