"""Dissipative out-of-time-ordered correlators.

Two independent routes to the same number:

* ``otoc_closed_form`` evaluates F(t, A, B) = Re tr[(Vb'(t).B') A (Vf(t).(B rho0)) A']
  directly from one backward adjoint evolution and one forward state evolution.
* ``otoc_protocol`` runs the control-qubit measurement circuit literally
  (controlled-B, forward map, A, backward map, anti-controlled-B, then
  tr(sigma^x_c rho_f)) on an N+1 qubit register where dissipation acts on the
  system qubits only.

The initial state is always the infinite-temperature state I / 2^N.  The
corrected OTOC divides out the leak-induced overall decay F(t, I, B).
"""

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .evolution import GeneratorSpec, IntegratorConfig, _GeneratorData, _final_sample, iter_evolve
from .linalg import is_hermitian
from .model import ModelSpec
from .paulis import embed_site_operator, pauli_matrix, site_mask

IDENTITY_FLOOR = 1e-9  # |F(t,I,B)| below this flags f_corrected invalid
UNITARITY_TOL = 1e-9

# channels whose Lindblad operators are Hermitian; for these the forward
# state map and the backward adjoint map have identical generators
SELF_ADJOINT_KINDS = ("none", "phase", "depolarizing")


@dataclass(frozen=True)
class OtocPoint:
    t: float
    a_site: int | None
    b_site: int | None
    f: float
    f_identity: float
    f_corrected: float
    valid: bool = True


@dataclass
class HeatmapSeries:
    """Scalar diagnostic on a (time x site) grid."""

    times: np.ndarray
    sites: list[int]
    values: np.ndarray
    label: str
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.times), len(self.sites)):
            raise ValueError(
                f"grid shape {self.values.shape} does not match "
                f"{len(self.times)} times x {len(self.sites)} sites"
            )

    def column(self, site: int) -> np.ndarray:
        return self.values[:, self.sites.index(site)]


def _check_unitary(u: np.ndarray, name: str) -> None:
    defect = np.abs(u @ u.conj().T - np.eye(u.shape[0])).max()
    if defect > UNITARITY_TOL:
        raise ValueError(f"{name} is not unitary (|aa' - I| = {defect:.3g})")


def _make_point(t, a_site, b_site, f, f_identity) -> OtocPoint:
    valid = abs(f_identity) >= IDENTITY_FLOOR
    f_corrected = f / f_identity if valid else float("nan")
    return OtocPoint(t, a_site, b_site, f, f_identity, f_corrected, valid)


def _evolved_pair(model: ModelSpec, b: np.ndarray, t: float, dt: float):
    """X = Vb'(t).B' and Y = Vf(t).(B/2^N) by direct integration."""
    back = _GeneratorData(GeneratorSpec(model, "backward", "adjoint"))
    fwd = _GeneratorData(GeneratorSpec(model, "forward", "state"))
    bh = b.conj().T
    y0 = b / model.dim
    if is_hermitian(b, 1e-12):
        x = _final_sample(back, bh, t, dt)
        y = _final_sample(fwd, y0, t, dt)
    else:
        # the maps are linear and preserve Hermiticity: split, evolve, recombine
        x = _final_sample(back, 0.5 * (bh + bh.conj().T), t, dt) \
            + 1j * _final_sample(back, -0.5j * (bh - bh.conj().T), t, dt)
        y = _final_sample(fwd, 0.5 * (y0 + y0.conj().T), t, dt) \
            + 1j * _final_sample(fwd, -0.5j * (y0 - y0.conj().T), t, dt)
    return x, y


def otoc_closed_form(model: ModelSpec, a: np.ndarray, b: np.ndarray, t: float,
                     cfg: IntegratorConfig) -> OtocPoint:
    """F(t, A, B) and F(t, I, B) from the trace expression."""
    dim = model.dim
    if a.shape != (dim, dim) or b.shape != (dim, dim):
        raise ValueError("a and b must match the model dimension")
    _check_unitary(a, "a")
    _check_unitary(b, "b")
    x, y = _evolved_pair(model, b, t, cfg.dt)
    aya = a @ y @ a.conj().T
    f = float(np.einsum("rc,cr->", x, aya).real)
    f_identity = float(np.einsum("rc,cr->", x, y).real)
    return _make_point(t, None, None, f, f_identity)


def _protocol_value(model: ModelSpec, a: np.ndarray, b: np.ndarray, t: float,
                    dt: float) -> float:
    n = model.n_sites
    dim = model.dim
    p0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    p1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)
    plus = 0.5 * np.ones((2, 2), dtype=np.complex128)
    eye = np.eye(dim, dtype=np.complex128)

    rho = np.kron(eye / dim, plus)
    u1 = np.kron(eye, p0) + np.kron(b, p1)
    u5 = np.kron(b, p0) + np.kron(eye, p1)
    ua = np.kron(a, np.eye(2, dtype=np.complex128))

    fwd = _GeneratorData(GeneratorSpec(model, "forward", "state")).with_control_qubit()
    back = _GeneratorData(GeneratorSpec(model, "backward", "state")).with_control_qubit()

    rho = u1 @ rho @ u1.conj().T
    rho = _final_sample(fwd, rho, t, dt)
    rho = ua @ rho @ ua.conj().T
    rho = _final_sample(back, rho, t, dt)
    rho = u5 @ rho @ u5.conj().T
    # tr(sigma^x_c rho) with the control as least significant bit
    idx = np.arange(rho.shape[0])
    return float(np.sum(rho[idx ^ 1, idx]).real)


def otoc_protocol(model: ModelSpec, a: np.ndarray, b: np.ndarray, t: float,
                  cfg: IntegratorConfig) -> OtocPoint:
    """F(t, A, B) via the five-step control-qubit circuit."""
    if model.n_sites + 1 > 13:
        raise ValueError("protocol register would exceed 13 qubits")
    dim = model.dim
    if a.shape != (dim, dim) or b.shape != (dim, dim):
        raise ValueError("a and b must match the model dimension")
    _check_unitary(a, "a")
    _check_unitary(b, "b")
    f = _protocol_value(model, a, b, t, cfg.dt)
    f_identity = _protocol_value(model, np.eye(dim, dtype=np.complex128), b, t, cfg.dt)
    return _make_point(t, None, None, f, f_identity)


def otoc_heatmap(model: ModelSpec, b_site: int, a_sites: list[int],
                 cfg: IntegratorConfig) -> tuple[HeatmapSeries, HeatmapSeries, HeatmapSeries]:
    """F(t, sigma^z_i, sigma^z_b), F(t, I, sigma^z_b) and their ratio.

    One backward adjoint trajectory of B and one forward state trajectory of
    B rho0 serve every site and sample time.  For channels with Hermitian
    Lindblad operators the two generators coincide, so the forward trajectory
    is the adjoint one divided by 2^N and is not integrated twice.
    """
    n = model.n_sites
    if not 1 <= b_site <= n:
        raise ValueError(f"b_site {b_site} out of range [1, {n}]")
    if not a_sites or any(not 1 <= s <= n for s in a_sites):
        raise ValueError(f"a_sites must be within [1, {n}]")
    b = embed_site_operator(pauli_matrix("Z"), b_site, n)
    zmasks = np.array([site_mask(s, n) for s in a_sites], dtype=np.int64)

    back = GeneratorSpec(model, "backward", "adjoint")
    self_adjoint = model.channel.kind in SELF_ADJOINT_KINDS or model.channel.gamma == 0.0

    times = []
    f_rows = []
    fid_rows = []
    k = len(a_sites)
    if self_adjoint:
        samples = ((t, x, None) for t, x in iter_evolve(back, b, cfg))
    else:
        fwd = GeneratorSpec(model, "forward", "state")
        samples = (
            (tx[0], tx[1], ty[1])
            for tx, ty in zip(iter_evolve(back, b, cfg), iter_evolve(fwd, b / model.dim, cfg))
        )
    for t, x, y in samples:
        yt = x.conj() / model.dim if y is None else np.ascontiguousarray(y.T)
        parts = backend.kernels.zpair_partials(x, yt, zmasks)
        sums = np.sum(parts, axis=0).real
        times.append(t)
        f_rows.append(sums[:k])
        fid_rows.append(np.full(k, sums[k]))

    times = np.array(times)
    f_grid = np.array(f_rows)
    fid_grid = np.array(fid_rows)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr_grid = np.where(np.abs(fid_grid) >= IDENTITY_FLOOR, f_grid / fid_grid, np.nan)

    config = {
        "n_sites": n, "g": model.g, "h": model.h,
        "channel": model.channel.kind, "gamma": model.channel.gamma,
        "dt": cfg.dt, "t_max": cfg.t_max, "sample_every": cfg.sample_every,
        "b_site": b_site, "a_sites": ",".join(str(s) for s in a_sites),
    }
    mk = lambda grid, label: HeatmapSeries(times, list(a_sites), grid, label, dict(config))
    return mk(f_grid, "otoc_f"), mk(fid_grid, "otoc_f_identity"), mk(corr_grid, "otoc_f_corrected")
