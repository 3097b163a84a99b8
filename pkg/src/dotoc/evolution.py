"""Lindblad and adjoint-Lindblad time evolution.

The state picture integrates

    drho/dt = -i [+-H, rho] + sum_k (Gamma/2)(2 L_k rho L_k' - {L_k'L_k, rho})

and the adjoint picture

    dO/dt = +i [+-H, O] + sum_k (Gamma/2)(2 L_k' O L_k - {L_k'L_k, O})

with the sign of H set by `direction` (backward evolution reverses only the
Hamiltonian; the dissipator is unchanged).  Integration is classical RK4
with a fixed step; Hermiticity is restored by averaging with the conjugate
transpose after every step, while trace and positivity are monitored by the
test suite rather than enforced.
"""

from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from . import backend
from .errors import NumericalError
from .linalg import is_hermitian
from .model import CHANNEL_CODES, ModelSpec, dissipation_masks, hamiltonian_diagonal, transverse_masks
from .paulis import acts_trivially_on, num_sites

DIRECTIONS = ("forward", "backward")
PICTURES = ("state", "adjoint")


@dataclass(frozen=True)
class GeneratorSpec:
    model: ModelSpec
    direction: str = "forward"
    picture: str = "state"

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if self.picture not in PICTURES:
            raise ValueError(f"picture must be one of {PICTURES}")


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.005
    t_max: float = 10.0
    sample_every: int = 20

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.t_max >= 0:
            raise ValueError(f"t_max must be >= 0, got {self.t_max}")
        if self.sample_every < 1:
            raise ValueError(f"sample_every must be >= 1, got {self.sample_every}")
        steps = self.t_max / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError(f"t_max/dt = {steps} is not an integer step count")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


class _GeneratorData:
    """Precompiled kernel arguments for one generator."""

    def __init__(self, gen: GeneratorSpec):
        model = gen.model
        # commutator coefficient: -i[H, .] for states, +i[H, .] for operators,
        # with H -> -H under backward evolution
        ci = -1j if gen.picture == "state" else 1j
        if gen.direction == "backward":
            ci = -ci
        self.ci = ci
        self.hdiag = hamiltonian_diagonal(model)
        self.g = float(model.g)
        self.xmasks = transverse_masks(model)
        self.dmasks = dissipation_masks(model)
        self.dunion = int(np.bitwise_or.reduce(self.dmasks)) if len(self.dmasks) else 0
        self.channel = CHANNEL_CODES[model.channel.kind] if len(self.dmasks) else 0
        self.gamma = float(model.channel.gamma)
        self.raising = gen.picture == "adjoint"
        self.dim = model.dim

    def with_control_qubit(self) -> "_GeneratorData":
        """Same generator on a register with one extra qubit appended (least
        significant bit); the extra qubit feels neither H nor dissipation."""
        emb = object.__new__(_GeneratorData)
        emb.ci = self.ci
        emb.hdiag = np.repeat(self.hdiag, 2)
        emb.g = self.g
        emb.xmasks = self.xmasks << 1
        emb.dmasks = self.dmasks << 1
        emb.dunion = self.dunion << 1
        emb.channel = self.channel
        emb.gamma = self.gamma
        emb.raising = self.raising
        emb.dim = self.dim * 2
        return emb

    def rhs(self, x: np.ndarray, out: np.ndarray) -> None:
        backend.kernels.rhs_apply(
            x, out, self.ci, self.hdiag, self.g, self.xmasks,
            self.gamma, self.channel, self.raising, self.dmasks, self.dunion,
        )


def _check_dim(gd: _GeneratorData, x: np.ndarray) -> None:
    if x.shape != (gd.dim, gd.dim):
        raise ValueError(f"operator shape {x.shape} does not match model dim {gd.dim}")


def lindblad_rhs(gen: GeneratorSpec, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation for a state-picture generator."""
    if gen.picture != "state":
        raise ValueError("lindblad_rhs requires picture='state'")
    gd = _GeneratorData(gen)
    _check_dim(gd, rho)
    out = np.empty_like(rho, dtype=np.complex128)
    gd.rhs(np.ascontiguousarray(rho, dtype=np.complex128), out)
    return out


def adjoint_rhs(gen: GeneratorSpec, op: np.ndarray) -> np.ndarray:
    """Right-hand side of the adjoint master equation for an observable."""
    if gen.picture != "adjoint":
        raise ValueError("adjoint_rhs requires picture='adjoint'")
    gd = _GeneratorData(gen)
    _check_dim(gd, op)
    out = np.empty_like(op, dtype=np.complex128)
    gd.rhs(np.ascontiguousarray(op, dtype=np.complex128), out)
    return out


def _rk4_samples(gd: _GeneratorData, x0: np.ndarray, cfg: IntegratorConfig,
                 resymmetrize: bool = True) -> Iterator[tuple[float, np.ndarray]]:
    """Yield (t, x) at sample times; the yielded array is a live buffer."""
    K = backend.kernels
    x = np.ascontiguousarray(x0, dtype=np.complex128).copy()
    acc = np.empty_like(x)
    xt = np.empty_like(x)
    k = np.empty_like(x)
    dt = cfg.dt
    n = cfg.n_steps
    yield 0.0, x
    for step in range(1, n + 1):
        gd.rhs(x, k)
        K.axpy(acc, x, dt / 6.0, k)
        K.axpy(xt, x, dt / 2.0, k)
        gd.rhs(xt, k)
        K.axpy_acc(acc, dt / 3.0, k)
        K.axpy(xt, x, dt / 2.0, k)
        gd.rhs(xt, k)
        K.axpy_acc(acc, dt / 3.0, k)
        K.axpy(xt, x, dt, k)
        gd.rhs(xt, k)
        K.axpy_acc(acc, dt / 6.0, k)
        x, acc = acc, x
        if resymmetrize:
            K.symmetrize(x)
        if step % cfg.sample_every == 0 or step == n:
            if not np.isfinite(x).all():
                raise NumericalError(f"non-finite values at t={step * dt:g}; dt too large?")
            yield step * dt, x


def _final_sample(gd: _GeneratorData, x0: np.ndarray, t: float, dt: float) -> np.ndarray:
    """Run the stepper to time t and return the final matrix (owned buffer)."""
    cfg = IntegratorConfig(dt=dt, t_max=t, sample_every=max(1, int(round(t / dt)) or 1))
    last = x0.astype(np.complex128)
    for _, x in _rk4_samples(gd, x0, cfg):
        last = x
    return last


def iter_evolve(gen: GeneratorSpec, x0: np.ndarray, cfg: IntegratorConfig,
                hermitian: bool = True) -> Iterator[tuple[float, np.ndarray]]:
    """Streaming evolution; yields (t, buffer) without storing the trajectory.

    The yielded matrix is reused between samples: copy it to keep it.  With
    hermitian=False the input is split into Hermitian components that are
    propagated separately (the map is linear and preserves Hermiticity), so
    arbitrary matrices can be evolved.
    """
    gd = _GeneratorData(gen)
    _check_dim(gd, x0)
    if hermitian:
        yield from _rk4_samples(gd, x0, cfg)
        return
    h1 = 0.5 * (x0 + x0.conj().T)
    h2 = -0.5j * (x0 - x0.conj().T)
    out = np.empty_like(x0, dtype=np.complex128)
    for (t, a), (_, b) in zip(_rk4_samples(gd, h1, cfg), _rk4_samples(gd, h2, cfg)):
        np.multiply(b, 1j, out=out)
        out += a
        yield t, out


def evolve(gen: GeneratorSpec, x0: np.ndarray, cfg: IntegratorConfig) -> list[tuple[float, np.ndarray]]:
    """Sampled trajectory [(t, matrix)] from t=0 to t=t_max inclusive."""
    if not is_hermitian(np.asarray(x0), 1e-9 * max(1.0, float(np.abs(x0).max(initial=0.0)))):
        raise ValueError("x0 must be Hermitian; use iter_evolve(hermitian=False) otherwise")
    return [(t, x.copy()) for t, x in iter_evolve(gen, x0, cfg)]


def evolve_truncated(gen: GeneratorSpec, x0: np.ndarray, region: tuple[int, int],
                     cfg: IntegratorConfig) -> list[tuple[float, np.ndarray]]:
    """Evolution under the region-restricted generator.

    Operators stay full dimension; only the generator is truncated.  The
    initial operator must be supported inside the region.
    """
    n = num_sites(np.asarray(x0))
    lo, hi = region
    for site in range(1, n + 1):
        if not lo <= site <= hi and not acts_trivially_on(np.asarray(x0), site):
            raise ValueError(f"x0 acts nontrivially on site {site} outside region {region}")
    truncated = replace(gen.model, region=(lo, hi))
    return evolve(replace(gen, model=truncated), x0, cfg)
