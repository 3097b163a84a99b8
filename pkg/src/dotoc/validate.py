"""Runtime invariant suite backing the `validate` subcommand.

Runs the structural checks (trace preservation, Hermiticity, fixed points,
positivity, duality, norm monotonicity, channel identities, OTOC sanity) on
small systems with a seeded generator.  Each check prints one line; any
failure raises ValidationError after all checks have run.
"""

from dataclasses import replace

import numpy as np

from .config import SimConfig
from .errors import ValidationError
from .evolution import GeneratorSpec, IntegratorConfig, adjoint_rhs, evolve, evolve_truncated
from .linalg import (
    frobenius_norm_normalized,
    hermiticity_defect,
    operator_norm,
    random_density_matrix,
    random_hermitian,
)
from .model import ChannelSpec, ModelSpec, build_hamiltonian, build_lindblad_ops
from .otoc import otoc_closed_form, otoc_heatmap, otoc_protocol
from .paulis import embed_site_operator, pauli_decompose, pauli_matrix, pauli_reconstruct


def _channels(gamma=0.1):
    return [ChannelSpec(k, gamma) for k in ("amplitude", "phase", "depolarizing")]


def run_checks(cfg: SimConfig) -> list[tuple[str, bool, str]]:
    """Run every invariant check; returns (name, ok, detail) triples."""
    rng = np.random.default_rng(cfg.seed)
    n = min(cfg.n_sites, 3)
    dim = 1 << n
    results = []

    def check(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    # Pauli algebra
    op = random_hermitian(n, rng)
    strings = pauli_decompose(op)
    recon = pauli_reconstruct(strings, n)
    err = np.abs(recon - op).max()
    check("pauli_roundtrip", err <= 1e-10, f"max err {err:.2e}")

    coeff_sq = sum(abs(s.coefficient) ** 2 for s in strings)
    fro = frobenius_norm_normalized(op)
    check("parseval", abs(fro**2 - coeff_sq) <= 1e-9, f"|F^2 - sum|b|^2| = {abs(fro**2 - coeff_sq):.2e}")

    check("norm_ordering", fro <= operator_norm(op) + 1e-9)

    e1 = embed_site_operator(pauli_matrix("X"), 1, n)
    e2 = embed_site_operator(pauli_matrix("Z"), min(2, n), n)
    if n >= 2:
        check("embed_disjoint_commute", np.array_equal(e1 @ e2, e2 @ e1))

    # model construction
    model0 = ModelSpec(n_sites=n, g=cfg.g, h=cfg.h)
    ham = build_hamiltonian(model0)
    check("hamiltonian_hermitian", hermiticity_defect(ham) <= 1e-12)

    amp1 = ModelSpec(n_sites=1, g=cfg.g, h=cfg.h, channel=ChannelSpec("amplitude", 0.1))
    l_amp = build_lindblad_ops(amp1)[0]
    ll = l_amp.conj().T @ l_amp
    check("amplitude_LdagL", np.abs(ll - 2 * np.diag([1.0, 0.0])).max() <= 1e-12,
          "L'L = 2|excited><excited|")

    it = IntegratorConfig(dt=cfg.dt, t_max=1.0, sample_every=10)
    rho0 = random_density_matrix(n, rng)

    for ch in _channels():
        model = replace(model0, channel=ch)
        fwd = GeneratorSpec(model, "forward", "state")
        adj = GeneratorSpec(model, "forward", "adjoint")

        ident = np.eye(dim, dtype=np.complex128)
        rhs_i = adjoint_rhs(adj, ident)
        check(f"identity_fixed_point[{ch.kind}]", np.abs(rhs_i).max() <= 1e-12)

        traj = evolve(fwd, rho0, it)
        tr_err = max(abs(np.trace(x).real - 1.0) for _, x in traj)
        check(f"trace_preserved[{ch.kind}]", tr_err <= 1e-9, f"max drift {tr_err:.2e}")
        herm_err = max(hermiticity_defect(x) for _, x in traj)
        check(f"hermiticity[{ch.kind}]", herm_err <= 1e-10, f"max defect {herm_err:.2e}")
        min_eig = min(np.linalg.eigvalsh(x).min() for _, x in traj)
        check(f"positivity[{ch.kind}]", min_eig >= -1e-7, f"min eig {min_eig:.2e}")

        obs = random_hermitian(n, rng)
        otraj = evolve(adj, obs, it)
        lhs = np.trace(obs @ traj[-1][1])
        rhs = np.trace(otraj[-1][1] @ rho0)
        check(f"duality[{ch.kind}]", abs(lhs - rhs) <= 1e-7, f"|diff| = {abs(lhs - rhs):.2e}")

        norms = [operator_norm(x) for _, x in otraj]
        mono = all(norms[i + 1] <= norms[i] + 1e-7 for i in range(len(norms) - 1))
        check(f"adjoint_norm_nonincreasing[{ch.kind}]", mono)

    # phase channels: backward adjoint equals forward state map
    for kind in ("phase", "depolarizing"):
        model = replace(model0, channel=ChannelSpec(kind, 0.1))
        obs = random_hermitian(n, rng)
        a = evolve(GeneratorSpec(model, "backward", "adjoint"), obs, it)[-1][1]
        b = evolve(GeneratorSpec(model, "forward", "state"), obs, it)[-1][1]
        check(f"phase_self_adjoint[{kind}]", np.abs(a - b).max() <= 1e-7)

    # Gamma -> 0 limit matches unitary evolution
    t_lim = 2.0
    model_eps = replace(model0, channel=ChannelSpec("phase", 1e-8))
    b_op = embed_site_operator(pauli_matrix("Z"), 1, n)
    x_eps = evolve(GeneratorSpec(model_eps, "backward", "adjoint"), b_op,
                   IntegratorConfig(cfg.dt, t_lim, 1000))[-1][1]
    evals, vecs = np.linalg.eigh(ham)
    u = vecs @ np.diag(np.exp(-1j * evals * t_lim)) @ vecs.conj().T
    x_uni = u @ b_op @ u.conj().T
    check("gamma_zero_limit", np.abs(x_eps - x_uni).max() <= 1e-5)

    # dt convergence at the default step
    model_c = replace(model0, channel=ChannelSpec("depolarizing", 0.1))
    c1 = evolve(GeneratorSpec(model_c, "forward", "state"), rho0,
                IntegratorConfig(cfg.dt, 0.5, 10**6))[-1][1]
    c2 = evolve(GeneratorSpec(model_c, "forward", "state"), rho0,
                IntegratorConfig(cfg.dt / 2, 0.5, 10**6))[-1][1]
    check("dt_convergence", np.abs(c1 - c2).max() <= 1e-6,
          f"halving dt moved entries by {np.abs(c1 - c2).max():.2e}")

    # truncated generator with full region is the identity truncation
    obs = embed_site_operator(pauli_matrix("Z"), 1, n)
    full = evolve(GeneratorSpec(model_c, "backward", "adjoint"), obs, it)[-1][1]
    trunc = evolve_truncated(GeneratorSpec(model_c, "backward", "adjoint"), obs, (1, n), it)[-1][1]
    check("truncation_full_region", np.abs(full - trunc).max() <= 1e-12)

    # OTOC sanity at t=0 and protocol agreement
    if n >= 2:
        model_d = replace(model0, channel=ChannelSpec("depolarizing", 0.1))
        za = embed_site_operator(pauli_matrix("Z"), 2, n)
        zb = embed_site_operator(pauli_matrix("Z"), 1, n)
        xa = embed_site_operator(pauli_matrix("X"), 1, n)
        p = otoc_closed_form(model_d, za, zb, 0.0, it)
        check("otoc_t0_disjoint", abs(p.f - 1.0) <= 1e-9, f"f = {p.f:.12f}")
        p2 = otoc_closed_form(model_d, xa, zb, 0.0, it)
        check("otoc_t0_anticommute", abs(p2.f + 1.0) <= 1e-9, f"f = {p2.f:.12f}")

        cf = otoc_closed_form(model_d, za, zb, 0.5, it)
        pr = otoc_protocol(model_d, za, zb, 0.5, it)
        check("protocol_matches_closed_form", abs(cf.f - pr.f) <= 1e-6,
              f"|diff| = {abs(cf.f - pr.f):.2e}")
        check("otoc_range", -1.0 - 1e-6 <= cf.f <= 1.0 + 1e-6)

        f_grid, fid_grid, _ = otoc_heatmap(model_d, 1, list(range(1, n + 1)),
                                           IntegratorConfig(cfg.dt, 0.5, 25))
        pt = otoc_closed_form(model_d, za, zb, 0.5, it)
        gv = f_grid.values[-1, 1]
        check("heatmap_matches_pointwise", abs(gv - pt.f) <= 1e-10, f"|diff| = {abs(gv - pt.f):.2e}")

    return results


def run_and_report(cfg: SimConfig, out=print) -> None:
    """Print one line per check; raise ValidationError if any failed."""
    results = run_checks(cfg)
    failed = []
    for name, ok, detail in results:
        suffix = f"  ({detail})" if detail else ""
        out(f"{'ok  ' if ok else 'FAIL'} {name}{suffix}")
        if not ok:
            failed.append(name)
    if failed:
        raise ValidationError(f"{len(failed)} invariant check(s) failed: {', '.join(failed)}")
