"""Quantitative analyses: Pauli weights, light-cone geometry, power laws,
Lieb-Robinson norms, and the propagator/quasi-locality bound checks."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalError
from .evolution import GeneratorSpec, IntegratorConfig, evolve, evolve_truncated, iter_evolve
from .linalg import operator_norm
from .model import ModelSpec
from .otoc import HeatmapSeries
from .paulis import (
    acts_trivially_on,
    body_tables,
    index_to_word,
    num_sites,
    pauli_coefficients,
    site_mask,
)


# ---------------------------------------------------------------------------
# Pauli-weight restructuring


@dataclass(frozen=True)
class WeightProfile:
    t: float
    one_body: float
    nn_two_body: float
    few_body_sum: float
    identity_weight: float = 0.0
    per_string: dict | None = None


def _single_site_of(b: np.ndarray) -> int:
    """Site (1-based) of a single-site Pauli operator; raises otherwise."""
    n = num_sites(b)
    nontrivial = [s for s in range(1, n + 1) if not acts_trivially_on(b, s)]
    if len(nontrivial) != 1:
        raise ValueError("operator is not a single-site Pauli")
    return nontrivial[0]


def weight_profile(model: ModelSpec, b: np.ndarray, cfg: IntegratorConfig,
                   include_strings: bool = False) -> list[WeightProfile]:
    """Normalized Pauli weights of Vb'(t).B aggregated by body class.

    one_body sums |b_S|^2 / sum_{S != I} |b_S'|^2 over strings with one
    non-identity letter, nn_two_body over two-body strings on adjacent
    sites.  The identity's share of the total weight is reported separately
    (identity_weight): amplitude damping pumps a traceless observable onto
    the identity, which carries no information and would otherwise swamp
    the restructuring signal (per_string keeps the all-string normalization
    and sums to 1).
    """
    _single_site_of(b)
    n = model.n_sites
    _, one_mask, nn_mask = body_tables(n)
    back = GeneratorSpec(model, "backward", "adjoint")
    profiles = []
    for t, x in iter_evolve(back, b, cfg):
        coeffs = pauli_coefficients(x)
        w = np.abs(coeffs) ** 2
        total = float(w.sum())
        ident = float(w[0])
        traceless = total - ident
        one = float(w[one_mask].sum()) / traceless if traceless > 0 else 0.0
        nn = float(w[nn_mask].sum()) / traceless if traceless > 0 else 0.0
        per = None
        if include_strings:
            keep = np.flatnonzero(w > 1e-12 * total)
            per = {index_to_word(int(i), n): float(w[i] / total) for i in keep}
        profiles.append(WeightProfile(t, one, nn, one + nn, ident / total, per))
    return profiles


# ---------------------------------------------------------------------------
# Light-cone calibration and width


@dataclass(frozen=True)
class LightconeCalibration:
    v_b: float
    w: float
    arrival_times: dict
    fit_residual: float
    degenerate: bool = False
    unresolved: tuple = ()


def _crossing_time(times: np.ndarray, f: np.ndarray, level: float) -> float | None:
    """First time f drops to <= level, linearly interpolated; None if never."""
    below = np.flatnonzero(f <= level)
    if len(below) == 0:
        return None
    k = int(below[0])
    if k == 0:
        return float(times[0])
    f0, f1 = f[k - 1], f[k]
    if f0 == f1:
        return float(times[k])
    frac = (f0 - level) / (f0 - f1)
    return float(times[k - 1] + frac * (times[k] - times[k - 1]))


def _distance_columns(series: HeatmapSeries, b_site: int) -> dict[int, np.ndarray]:
    """Columns averaged per distance |site - b_site| >= 1."""
    cols: dict[int, list[np.ndarray]] = {}
    for j, s in enumerate(series.sites):
        d = abs(s - b_site)
        if d >= 1:
            cols.setdefault(d, []).append(series.values[:, j])
    return {d: np.mean(v, axis=0) for d, v in sorted(cols.items())}


def calibrate_lightcone(model_no_dissipation: ModelSpec, heatmap: HeatmapSeries) -> LightconeCalibration:
    """Butterfly velocity and front width from a dissipation-free OTOC grid.

    Arrival time at distance d is the first crossing of f = 0.5; v_b is the
    inverse slope of arrival time vs d fitted over d in [2, N-2] (d = 1 and
    d = N-1 are skipped: open-boundary effects), and the front width w is the
    median of v_b * (t_{0.2} - t_{0.8}) over the same distances.
    """
    if heatmap.config.get("channel", "none") != "none" or heatmap.config.get("gamma", 0.0):
        raise ValueError("calibration heatmap must be computed with channel=none")
    n = model_no_dissipation.n_sites
    b_site = int(heatmap.config["b_site"])
    cols = _distance_columns(heatmap, b_site)

    arrivals: dict[int, float] = {}
    unresolved = []
    for d, f in cols.items():
        t_half = _crossing_time(heatmap.times, f, 0.5)
        if t_half is None:
            unresolved.append(d)
        else:
            arrivals[d] = t_half

    fit_ds = [d for d in arrivals if 2 <= d <= n - 2]
    if len(fit_ds) < 3:
        raise NumericalError(
            f"only {len(fit_ds)} distances with a 0.5 crossing in [2, {n - 2}]; "
            "increase t_max or the system size"
        )
    xs = np.array(fit_ds, dtype=float)
    ys = np.array([arrivals[d] for d in fit_ds])
    slope, intercept = np.polyfit(xs, ys, 1)
    if slope <= 0:
        raise NumericalError(f"arrival-time fit has non-positive slope {slope:g}")
    v_b = 1.0 / slope
    residual = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))

    spans = []
    for d in fit_ds:
        t_tail = _crossing_time(heatmap.times, cols[d], 0.2)
        t_head = _crossing_time(heatmap.times, cols[d], 0.8)
        if t_tail is not None and t_head is not None:
            spans.append(v_b * (t_tail - t_head))
    w = float(np.median(spans)) if spans else 0.0
    # a 0.2-0.8 span within one sample interval is interpolation artifact,
    # not a resolved front: report a degenerate zero width
    grid_dt = float(np.median(np.diff(heatmap.times))) if len(heatmap.times) > 1 else 0.0
    degenerate = w <= v_b * grid_dt
    if degenerate:
        w = 0.0
    return LightconeCalibration(
        v_b=float(v_b), w=w, arrival_times=arrivals, fit_residual=residual,
        degenerate=degenerate, unresolved=tuple(unresolved),
    )


@dataclass(frozen=True)
class WidthResult:
    """Smallest distance at which the corrected-OTOC front is unresolvable."""

    width: float                      # +inf when the cone exceeds the system
    exceeds_system: bool
    contrasts: dict
    unresolved: tuple = ()            # distances with t2 beyond the grid
    width_interp: float = math.inf    # continuous delta-contour crossing in d

    def __float__(self):
        return self.width


def lightcone_width(corrected: HeatmapSeries, calib: LightconeCalibration,
                    delta: float = 0.1) -> WidthResult:
    """Width of the partially recovered light cone.

    For each distance d the corrected OTOC is compared just before and just
    after the front: contrast(d) = fc((d - w/2)/v_b, d) - fc((d + w/2)/v_b, d),
    interpolated linearly in t.  The width is the smallest d whose contrast
    falls below delta.  `width_interp` additionally locates the continuous
    crossing of the contrast curve with delta by linear interpolation between
    neighboring distances; on short chains the integer width quantizes hard
    and the interpolated value is the stable quantity to fit power laws to.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    b_site = int(corrected.config["b_site"])
    cols = _distance_columns(corrected, b_site)
    times = corrected.times
    contrasts: dict[int, float] = {}
    unresolved = []
    width = math.inf
    for d, fc in cols.items():
        t1 = max((d - calib.w / 2.0) / calib.v_b, float(times[0]))
        t2 = (d + calib.w / 2.0) / calib.v_b
        if t2 > times[-1] + 1e-9:
            unresolved.append(d)
            continue
        f1 = float(np.interp(t1, times, fc))
        f2 = float(np.interp(t2, times, fc))
        if math.isnan(f1) or math.isnan(f2):
            unresolved.append(d)
            continue
        contrast = f1 - f2
        contrasts[d] = contrast
        if contrast < delta and math.isinf(width):
            width = float(d)
    width_interp = math.inf
    if not math.isinf(width):
        d_hit = int(width)
        prev = d_hit - 1
        if prev in contrasts and contrasts[prev] > delta:
            c0, c1 = contrasts[prev], contrasts[d_hit]
            width_interp = prev + (c0 - delta) / (c0 - c1)
        else:
            width_interp = width
    return WidthResult(
        width=width, exceeds_system=math.isinf(width),
        contrasts=contrasts, unresolved=tuple(unresolved),
        width_interp=width_interp,
    )


# ---------------------------------------------------------------------------
# Power-law fit


@dataclass(frozen=True)
class PowerLawFit:
    c: float
    alpha: float
    gamma_range: tuple
    r_squared: float


def powerlaw_fit(widths: dict) -> PowerLawFit:
    """Ordinary least squares of ln d against ln Gamma: d = c / Gamma^alpha."""
    items = sorted(widths.items())
    if any(not math.isfinite(d) or d <= 0 for _, d in items):
        raise NumericalError(f"non-finite or non-positive width in {widths}")
    if len(items) < 3:
        raise NumericalError(f"need at least 3 widths to fit, got {len(items)}")
    lx = np.log([g for g, _ in items])
    ly = np.log([d for _, d in items])
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(
        c=float(np.exp(intercept)), alpha=float(-slope),
        gamma_range=(items[0][0], items[-1][0]), r_squared=float(r2),
    )


# ---------------------------------------------------------------------------
# Lieb-Robinson commutator norms


def lr_commutator_series(model: ModelSpec, b: np.ndarray, a_sites: list[int],
                         cfg: IntegratorConfig) -> tuple[HeatmapSeries, HeatmapSeries, HeatmapSeries]:
    """Commutator norms of the evolved operator against sigma^z probes.

    Returns grids of ||[Vb'(t).B, Z_i]|| and of the corrected ratio
    ||[Vb'(t).B, Z_i]|| / (||Z_i|| ||Vb'(t).B||), plus the one-column series
    ||Vb'(t).B||.
    """
    n = model.n_sites
    b_site = _single_site_of(b)
    if any(not 1 <= s <= n for s in a_sites):
        raise ValueError(f"a_sites must be within [1, {n}]")
    idx = np.arange(model.dim, dtype=np.int64)
    sign_vecs = [1.0 - 2.0 * ((idx & site_mask(s, n)) != 0) for s in a_sites]
    norm_a = 1.0  # single-site Pauli probes

    back = GeneratorSpec(model, "backward", "adjoint")
    times, norm_rows, comm_rows = [], [], []
    for t, x in iter_evolve(back, b, cfg):
        nx = operator_norm(x)
        row = []
        for sv in sign_vecs:
            comm = x * (sv[None, :] - sv[:, None])  # [X, Z_i], anti-Hermitian
            row.append(operator_norm(comm))
        times.append(t)
        norm_rows.append(nx)
        comm_rows.append(row)

    times = np.array(times)
    comm_grid = np.array(comm_rows)
    norms = np.array(norm_rows)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_grid = np.where(norms[:, None] > 1e-12, comm_grid / (norm_a * norms[:, None]), np.nan)

    config = {
        "n_sites": n, "g": model.g, "h": model.h,
        "channel": model.channel.kind, "gamma": model.channel.gamma,
        "dt": cfg.dt, "t_max": cfg.t_max, "sample_every": cfg.sample_every,
        "b_site": b_site, "a_sites": ",".join(str(s) for s in a_sites),
    }
    comm = HeatmapSeries(times, list(a_sites), comm_grid, "lr_commutator_norm", dict(config))
    ratio = HeatmapSeries(times, list(a_sites), ratio_grid, "lr_corrected_ratio", dict(config))
    decay = HeatmapSeries(times, [b_site], norms[:, None], "adjoint_operator_norm", dict(config))
    return comm, ratio, decay


# ---------------------------------------------------------------------------
# Appendix-style bound checks


@dataclass(frozen=True)
class PropagatorDifferenceReport:
    times: np.ndarray
    gammas: tuple
    delta: np.ndarray                 # (time, gamma) grid of ||X_gamma - X_0||
    lemma1_bound: np.ndarray          # Gamma * t * (dissipating sites)
    linearity_ratios: dict            # (gamma, t) -> Delta(t, 2g) / Delta(t, g)
    earlytime_ratios: dict            # (gamma, t) -> Delta(2t, g) / Delta(t, g)


def propagator_difference_check(model: ModelSpec, b: np.ndarray, gammas: list[float],
                                cfg: IntegratorConfig) -> PropagatorDifferenceReport:
    """Distance between dissipative and unitary adjoint evolution of B.

    Checks the small-Gamma linearity of Delta(t, Gamma) and its early-time
    growth, and tabulates the integral envelope Gamma * t * n_sites for
    comparison.
    """
    if model.channel.kind not in ("phase", "depolarizing"):
        raise ValueError("propagator difference check applies to phase channels only")
    _single_site_of(b)
    gammas = sorted(float(g) for g in gammas)
    if any(g < 0 for g in gammas):
        raise ValueError("gammas must be >= 0")

    def gen(gamma):
        m = replace(model, channel=replace(model.channel, gamma=gamma))
        return GeneratorSpec(m, "backward", "adjoint")

    runs = [iter_evolve(gen(0.0), b, cfg)] + [iter_evolve(gen(g), b, cfg) for g in gammas]
    times, delta = [], []
    for samples in zip(*runs):
        t = samples[0][0]
        x0 = samples[0][1]
        times.append(t)
        delta.append([operator_norm(x[1] - x0) for x in samples[1:]])
    times = np.array(times)
    delta = np.array(delta)
    n_diss = model.n_sites if model.region is None else len(model.region_sites())
    bound = np.outer(times, np.array(gammas)) * n_diss

    linearity, early = {}, {}
    tol = 1e-12
    for j, g in enumerate(gammas):
        for j2, g2 in enumerate(gammas):
            if abs(g2 - 2 * g) < 1e-12 * max(1.0, g2):
                for i, t in enumerate(times):
                    if t > 0 and delta[i, j] > tol:
                        linearity[(g, float(t))] = float(delta[i, j2] / delta[i, j])
        for i, t in enumerate(times):
            if t <= 0 or delta[i, j] <= tol:
                continue
            hit = np.flatnonzero(np.abs(times - 2 * t) <= 1e-9 * max(1.0, 2 * t))
            if len(hit):
                early[(g, float(t))] = float(delta[int(hit[0]), j] / delta[i, j])
    return PropagatorDifferenceReport(times, tuple(gammas), delta, bound, linearity, early)


@dataclass(frozen=True)
class QuasilocalityReport:
    t: float
    radii: tuple
    eps: dict                         # radius -> ||full - truncated||
    non_increasing: bool
    threshold_radius: int | None      # ceil(v_lr t) + 2 when v_lr given
    within_threshold: bool | None


def quasilocality_check(model: ModelSpec, b: np.ndarray, t: float, radii: list[int],
                        cfg: IntegratorConfig, v_lr: float | None = None) -> QuasilocalityReport:
    """Truncation error of evolving B with a spatially restricted generator."""
    n = model.n_sites
    site = _single_site_of(b)
    if site != 1:
        raise ValueError("b must be supported at site 1")
    radii = sorted(int(r) for r in radii)
    if radii[0] < 1 or radii[-1] > n:
        raise ValueError(f"radii must be within [1, {n}]")

    back = GeneratorSpec(model, "backward", "adjoint")
    run_cfg = IntegratorConfig(dt=cfg.dt, t_max=t, sample_every=max(1, int(round(t / cfg.dt)) or 1))
    full = evolve(back, b, run_cfg)[-1][1]
    eps = {}
    for r in radii:
        trunc = evolve_truncated(back, b, (1, r), run_cfg)[-1][1]
        eps[r] = operator_norm(full - trunc)
    values = [eps[r] for r in radii]
    non_inc = all(values[i + 1] <= values[i] + 1e-12 for i in range(len(values) - 1))
    threshold_radius = None
    within = None
    if v_lr is not None:
        threshold_radius = int(math.ceil(v_lr * t)) + 2
        beyond = [eps[r] for r in radii if r >= threshold_radius]
        within = all(e < 0.05 * operator_norm(b) for e in beyond) if beyond else None
    return QuasilocalityReport(t, tuple(radii), eps, non_inc, threshold_radius, within)


def proposition_bound(epsilon: float, v_lr: float, gamma: float) -> float:
    """Lower bound sqrt(epsilon * v_lr / gamma) on the recovered cone width.

    Reported for comparison only: the accessible dissipation rates are not
    small enough for the bound to bind, so it is never asserted against
    measured widths.
    """
    if epsilon <= 0 or v_lr <= 0 or gamma <= 0:
        raise ValueError("epsilon, v_lr and gamma must all be positive")
    return math.sqrt(epsilon * v_lr / gamma)
