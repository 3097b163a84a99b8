#!/usr/bin/env python3
"""Time the hot kernels on both backends (numba jit vs pure numpy).

    python benchmarks/bench_kernels.py [--n-sites 10] [--repeats 5]

The same kernels can be forced package-wide with DOTOC_BACKEND=numpy|numba.
"""

import argparse
import time

import numpy as np

from dotoc import _kernels_numba, _kernels_numpy
from dotoc.evolution import GeneratorSpec, IntegratorConfig
from dotoc.model import CHANNEL_CODES, ChannelSpec, ModelSpec, dissipation_masks, hamiltonian_diagonal, transverse_masks

BACKENDS = [("numpy", _kernels_numpy), ("numba", _kernels_numba)]


def time_call(fn, *args, repeats=5):
    fn(*args)  # warm-up / jit compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rhs(n, repeats):
    rng = np.random.default_rng(0)
    dim = 1 << n
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    out = np.empty_like(x)
    print(f"\nrhs_apply, dim={dim} (N={n})")
    print(f"{'channel':14s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    for kind in ("none", "phase", "depolarizing", "amplitude"):
        model = ModelSpec(n_sites=n, channel=ChannelSpec(kind, 0.1 if kind != "none" else 0.0))
        hdiag = hamiltonian_diagonal(model)
        xmasks = transverse_masks(model)
        dmasks = dissipation_masks(model)
        dunion = int(np.bitwise_or.reduce(dmasks)) if len(dmasks) else 0
        code = CHANNEL_CODES[kind] if len(dmasks) else 0
        times = {}
        for name, K in BACKENDS:
            times[name] = time_call(
                K.rhs_apply, x, out, 1j, hdiag, model.g, xmasks,
                model.channel.gamma, code, False, dmasks, dunion, repeats=repeats)
        print(f"{kind:14s} {times['numpy']*1e3:9.2f}ms {times['numba']*1e3:9.2f}ms "
              f"{times['numpy']/times['numba']:8.1f}x")


def bench_helpers(n, repeats):
    rng = np.random.default_rng(1)
    dim = 1 << n
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    out = np.empty_like(a)
    zmasks = np.array([1 << k for k in range(min(n, 8))], dtype=np.int64)
    print(f"\nhelper kernels, dim={dim}")
    print(f"{'kernel':14s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    cases = [
        ("axpy", lambda K: K.axpy(out, a, 0.3, b)),
        ("axpy_acc", lambda K: K.axpy_acc(out, 0.3, b)),
        ("symmetrize", lambda K: K.symmetrize(out)),
        ("zpair", lambda K: K.zpair_partials(a, b, zmasks)),
    ]
    for name, call in cases:
        times = {}
        for bname, K in BACKENDS:
            times[bname] = time_call(lambda: call(K), repeats=repeats)
        print(f"{name:14s} {times['numpy']*1e3:9.2f}ms {times['numba']*1e3:9.2f}ms "
              f"{times['numpy']/times['numba']:8.1f}x")


def bench_step(n, repeats):
    from dotoc import backend
    from dotoc.evolution import _GeneratorData, _rk4_samples
    from dotoc.paulis import embed_site_operator, pauli_matrix

    model = ModelSpec(n_sites=n, channel=ChannelSpec("phase", 0.1))
    gd = _GeneratorData(GeneratorSpec(model, "backward", "adjoint"))
    x0 = embed_site_operator(pauli_matrix("Z"), 1, n)
    cfg = IntegratorConfig(dt=0.01, t_max=0.1, sample_every=10)
    print(f"\nfull RK4 steps (10 steps), dim={1 << n}")
    prev = backend.active_backend()
    try:
        for name in ("numpy", "numba"):
            backend.use_backend(name)
            for _ in _rk4_samples(gd, x0, cfg):  # warm-up
                pass
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                for _ in _rk4_samples(gd, x0, cfg):
                    pass
                best = min(best, time.perf_counter() - t0)
            print(f"{name:14s} {best/10*1e3:9.2f}ms per step")
    finally:
        backend.use_backend(prev)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-sites", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    bench_rhs(args.n_sites, args.repeats)
    bench_helpers(args.n_sites, args.repeats)
    bench_step(args.n_sites, args.repeats)


if __name__ == "__main__":
    main()
