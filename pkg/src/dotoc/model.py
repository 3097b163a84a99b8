"""Chaotic Ising chain and per-site dissipation channels.

The Hamiltonian (open boundary conditions) is

    H = - sum_i sigma^z_i sigma^z_{i+1} - sum_i (g sigma^x_i + h sigma^z_i)

with the chaotic working point g = -1.05, h = 0.5.  Dissipation acts locally
on every spin; the Lindblad operators are taken literally from the channel
definitions:

    amplitude damping:  sqrt(1/2) (sigma^x - i sigma^y)   (= sqrt(2) sigma-)
    phase damping:      sqrt(1/2) sigma^z
    depolarizing:       sigma^x / 2, sigma^y / 2, sigma^z / 2

An optional site interval `region` restricts both the Hamiltonian terms and
the dissipating sites, which is what the quasi-locality checks evolve.
"""

from dataclasses import dataclass

import numpy as np

from .paulis import MAX_SITES, embed_site_operator, pauli_matrix, site_mask

CHANNEL_KINDS = ("none", "amplitude", "phase", "depolarizing")

# kernel channel codes (see dotoc._kernels_numpy)
CHANNEL_CODES = {"none": 0, "amplitude": 1, "phase": 2, "depolarizing": 3}


@dataclass(frozen=True)
class ChannelSpec:
    kind: str = "none"
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not self.gamma >= 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class ModelSpec:
    n_sites: int
    g: float = -1.05
    h: float = 0.5
    channel: ChannelSpec = ChannelSpec()
    region: tuple[int, int] | None = None

    def __post_init__(self):
        if not 1 <= self.n_sites <= MAX_SITES:
            raise ValueError(f"n_sites must be in [1, {MAX_SITES}], got {self.n_sites}")
        if self.region is not None:
            lo, hi = self.region
            if not 1 <= lo <= hi <= self.n_sites:
                raise ValueError(f"region {self.region} invalid for n_sites={self.n_sites}")

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def region_sites(self) -> range:
        if self.region is None:
            return range(1, self.n_sites + 1)
        return range(self.region[0], self.region[1] + 1)


def hamiltonian_diagonal(spec: ModelSpec) -> np.ndarray:
    """Diagonal of H (ZZ bonds plus longitudinal fields), respecting region."""
    idx = np.arange(spec.dim, dtype=np.int64)
    z = [1.0 - 2.0 * ((idx & site_mask(i, spec.n_sites)) != 0) for i in range(1, spec.n_sites + 1)]
    sites = spec.region_sites()
    d = np.zeros(spec.dim)
    for i in sites:
        if i + 1 in sites:
            d -= z[i - 1] * z[i]
        d -= spec.h * z[i - 1]
    return d


def transverse_masks(spec: ModelSpec) -> np.ndarray:
    """Bit masks of the sites carrying a -g sigma^x field."""
    return np.array([site_mask(i, spec.n_sites) for i in spec.region_sites()], dtype=np.int64)


def dissipation_masks(spec: ModelSpec) -> np.ndarray:
    """Bit masks of the dissipating sites (empty for kind=none or gamma=0)."""
    ch = spec.channel
    if ch.kind == "none" or ch.gamma == 0.0:
        return np.zeros(0, dtype=np.int64)
    return np.array([site_mask(i, spec.n_sites) for i in spec.region_sites()], dtype=np.int64)


def build_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Dense Hamiltonian matrix (Hermitian, real)."""
    h = np.diag(hamiltonian_diagonal(spec)).astype(np.complex128)
    idx = np.arange(spec.dim)
    for m in transverse_masks(spec):
        h[idx, idx ^ m] += -spec.g
    return h


def build_lindblad_ops(spec: ModelSpec) -> list[np.ndarray]:
    """Per-site Lindblad operators as full-dimension dense matrices.

    The list is ordered by site (and X, Y, Z within a site for the
    depolarizing channel).  Intended for small n; the time stepper never
    materializes these.
    """
    kind = spec.channel.kind
    if kind == "none":
        return []
    sx, sy, sz = pauli_matrix("X"), pauli_matrix("Y"), pauli_matrix("Z")
    locals_: list[np.ndarray]
    if kind == "amplitude":
        locals_ = [np.sqrt(0.5) * (sx - 1j * sy)]
    elif kind == "phase":
        locals_ = [np.sqrt(0.5) * sz]
    else:
        locals_ = [0.5 * sx, 0.5 * sy, 0.5 * sz]
    ops = []
    for i in spec.region_sites():
        for loc in locals_:
            ops.append(embed_site_operator(loc, i, spec.n_sites))
    return ops
