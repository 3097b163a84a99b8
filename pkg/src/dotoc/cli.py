"""Command-line experiment runner.

    dotoc <subcommand> [--config FILE] [--svg] [--out-dir DIR]
                       [--gammas LIST] [--key=value overrides]

Subcommands: otoc-heatmap, corrected-heatmap, weights, lightcone-width,
powerlaw, lr-norms, norm-decay, bound-check, quasilocality, validate.
Every run writes CSV files plus a manifest (config, version, wall time,
SHA-256 of each output) into --out-dir; --svg adds figure analogs.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 runtime/numerical error.
"""

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .analysis import (
    calibrate_lightcone,
    lightcone_width,
    lr_commutator_series,
    powerlaw_fit,
    propagator_difference_check,
    proposition_bound,
    quasilocality_check,
    weight_profile,
)
from .config import SimConfig, parse_config
from .csvio import Table, write_csv
from .errors import ConfigError, DotocError, NumericalError, ValidationError
from .otoc import otoc_heatmap
from .paulis import embed_site_operator, pauli_matrix
from .svg import render_svg
from . import validate as validate_mod

SUBCOMMANDS = (
    "otoc-heatmap", "corrected-heatmap", "weights", "lightcone-width",
    "powerlaw", "lr-norms", "norm-decay", "bound-check", "quasilocality",
    "validate",
)

_OVERRIDE_KEYS = (
    "n_sites", "g", "h", "channel", "gamma", "dt", "t_max",
    "sample_every", "b_site", "a_sites", "delta", "seed",
)


@dataclass
class RunContext:
    cfg: SimConfig
    out_dir: str
    svg: bool
    outputs: list

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def emit(self, obj, name: str, **svg_kwargs) -> None:
        self.outputs.append(write_csv(obj, self.path(name + ".csv"), config=self.cfg.as_dict()))
        if self.svg:
            self.outputs.append(render_svg(obj, self.path(name + ".svg"), **svg_kwargs))


def _sigma_z(cfg: SimConfig, site: int) -> np.ndarray:
    return embed_site_operator(pauli_matrix("Z"), site, cfg.n_sites)


def _heatmaps(cfg: SimConfig):
    return otoc_heatmap(cfg.model(), cfg.b_site, list(cfg.a_sites), cfg.integrator())


def run_otoc_heatmap(ctx: RunContext) -> None:
    f, fid, _ = _heatmaps(ctx.cfg)
    ctx.emit(f, "otoc_f")
    ctx.emit(fid, "otoc_f_identity")


def run_corrected_heatmap(ctx: RunContext) -> None:
    _, _, corr = _heatmaps(ctx.cfg)
    ctx.emit(corr, "otoc_f_corrected")


def run_weights(ctx: RunContext) -> None:
    cfg = ctx.cfg
    profiles = weight_profile(cfg.model(), _sigma_z(cfg, cfg.b_site), cfg.integrator())
    table = Table(
        columns=["t", "one_body", "nn_two_body", "few_body_sum", "identity_weight"],
        rows=[(p.t, p.one_body, p.nn_two_body, p.few_body_sum, p.identity_weight)
              for p in profiles],
        label="pauli_weights",
    )
    ctx.emit(table, "weights")


def run_lightcone_width(ctx: RunContext) -> None:
    cfg = ctx.cfg
    base = replace(cfg, channel="none", gamma=0.0)
    f0, _, _ = _heatmaps(base)
    calib = calibrate_lightcone(base.model(), f0)
    _, _, corr = _heatmaps(cfg)
    result = lightcone_width(corr, calib, cfg.delta)
    ctx.emit(Table(
        columns=["d", "contrast"],
        rows=sorted(result.contrasts.items()),
        label="front_contrast",
    ), "contrasts")
    ctx.emit(Table(
        columns=["gamma", "width", "exceeds_system", "v_b", "w"],
        rows=[(cfg.gamma, result.width, int(result.exceeds_system), calib.v_b, calib.w)],
        label="lightcone_width",
    ), "width")


def run_powerlaw(ctx: RunContext, gammas: list[float]) -> None:
    cfg = ctx.cfg
    if cfg.channel == "none":
        raise ConfigError("powerlaw sweep needs a dissipative channel")
    base = replace(cfg, channel="none", gamma=0.0)
    f0, _, _ = _heatmaps(base)
    calib = calibrate_lightcone(base.model(), f0)
    widths, widths_interp = {}, {}
    sentinels = []
    for g in gammas:
        _, _, corr = _heatmaps(replace(cfg, gamma=g))
        res = lightcone_width(corr, calib, cfg.delta)
        if res.exceeds_system:
            sentinels.append(g)
        else:
            widths[g] = res.width
            widths_interp[g] = res.width_interp
    rows = [(g, widths.get(g, float("inf")), widths_interp.get(g, float("inf")))
            for g in gammas]
    tbl = Table(columns=["gamma", "width", "width_interp"], rows=rows, label="d(Gamma)")
    ctx.outputs.append(write_csv(tbl, ctx.path("widths.csv"), config=ctx.cfg.as_dict()))
    # fit both the paper-convention integer widths and the continuous
    # contour crossings (the stable quantity on short chains)
    fit_rows = []
    fits = {}
    for kind, data in (("integer", widths), ("interpolated", widths_interp)):
        fit = powerlaw_fit(data)
        fits[kind] = fit
        fit_rows.append((kind, fit.c, fit.alpha, fit.r_squared,
                         fit.gamma_range[0], fit.gamma_range[1],
                         len(data), len(sentinels)))
    if ctx.svg:
        fit = fits["interpolated"]
        fitted = Table(
            columns=["gamma", "width_interp", "fit"],
            rows=[(g, w, fit.c * g ** (-fit.alpha)) for g, w in sorted(widths_interp.items())],
            label="d(Gamma)",
        )
        ctx.outputs.append(render_svg(fitted, ctx.path("widths.svg"), loglog=True,
                                      title=f"width ~ c/Gamma^alpha, alpha={fit.alpha:.3f}"))
    ctx.emit(Table(
        columns=["kind", "c", "alpha", "r_squared", "gamma_lo", "gamma_hi",
                 "n_points", "n_exceeding"],
        rows=fit_rows,
        label="powerlaw_fit",
    ), "fit")


def run_lr_norms(ctx: RunContext) -> None:
    cfg = ctx.cfg
    comm, ratio, decay = lr_commutator_series(
        cfg.model(), _sigma_z(cfg, cfg.b_site), list(cfg.a_sites), cfg.integrator())
    ctx.emit(comm, "lr_commutator_norm")
    ctx.emit(ratio, "lr_corrected_ratio")
    ctx.emit(Table(
        columns=["t", "norm"],
        rows=[(t, v) for t, v in zip(decay.times, decay.values[:, 0])],
        label="adjoint_norm",
    ), "norm_decay")


def run_norm_decay(ctx: RunContext) -> None:
    cfg = ctx.cfg
    _, _, decay = lr_commutator_series(
        cfg.model(), _sigma_z(cfg, cfg.b_site), [cfg.b_site], cfg.integrator())
    ctx.emit(Table(
        columns=["t", "norm"],
        rows=[(t, v) for t, v in zip(decay.times, decay.values[:, 0])],
        label="adjoint_norm",
    ), "norm_decay")


def run_bound_check(ctx: RunContext, gammas: list[float]) -> None:
    cfg = ctx.cfg
    model = cfg.model()
    if model.channel.kind == "none":
        model = replace(model, channel=replace(model.channel, kind="phase"))
    elif model.channel.kind == "amplitude":
        raise ConfigError("bound-check applies to phase/depolarizing channels only")
    report = propagator_difference_check(
        model, _sigma_z(cfg, cfg.b_site), gammas, cfg.integrator())
    rows = []
    for i, t in enumerate(report.times):
        for j, g in enumerate(report.gammas):
            rows.append((t, g, report.delta[i, j], report.lemma1_bound[i, j]))
    ctx.emit(Table(columns=["t", "gamma", "delta", "lemma1_bound"], rows=rows,
                   label="propagator_difference"), "bound_delta")
    ratio_rows = [("linearity", g, t, r) for (g, t), r in sorted(report.linearity_ratios.items())]
    ratio_rows += [("early_time", g, t, r) for (g, t), r in sorted(report.earlytime_ratios.items())]
    ctx.emit(Table(columns=["kind", "gamma", "t", "ratio"], rows=ratio_rows,
                   label="scaling_ratios"), "bound_ratios")
    prop_rows = [(0.1, 1.7, g, proposition_bound(0.1, 1.7, g)) for g in report.gammas]
    ctx.emit(Table(columns=["epsilon", "v_lr", "gamma", "lower_bound"], rows=prop_rows,
                   label="proposition_bound"), "proposition_bound")


def run_quasilocality(ctx: RunContext) -> None:
    cfg = ctx.cfg
    t = cfg.t_max
    radii = list(range(1, cfg.n_sites + 1))
    report = quasilocality_check(cfg.model(), _sigma_z(cfg, 1), t, radii, cfg.integrator())
    ctx.emit(Table(
        columns=["radius", "eps"],
        rows=[(r, report.eps[r]) for r in report.radii],
        label="truncation_error",
    ), "quasilocality")
    if not report.non_increasing:
        raise ValidationError("truncation error is not non-increasing in the radius")


def run_validate(ctx: RunContext) -> None:
    lines = []

    def sink(msg):
        lines.append(msg)
        print(msg)

    try:
        validate_mod.run_and_report(ctx.cfg, out=sink)
    finally:
        ctx.emit(Table(
            columns=["check", "status"],
            rows=[(ln.split()[1], ln.split()[0]) for ln in lines if ln.split()],
            label="validate",
        ), "validate")


def _write_manifest(ctx: RunContext, name: str, wall: float) -> None:
    lines = [f"tool=dotoc {__version__}", f"subcommand={name}", f"wall_time_s={wall:.3f}"]
    for k, v in ctx.cfg.as_dict().items():
        lines.append(f"config.{k}={v}")
    for path in sorted(ctx.outputs):
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        lines.append(f"output.{os.path.basename(path)}=sha256:{digest}")
    with open(ctx.path("manifest.txt.tmp"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(ctx.path("manifest.txt.tmp"), ctx.path("manifest.txt"))


def _parse_gammas(text: str) -> list[float]:
    try:
        gammas = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse --gammas {text!r}") from None
    if not gammas:
        raise ConfigError("--gammas is empty")
    return gammas


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dotoc", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--out-dir", default="out", help="output directory (created if missing)")
    parser.add_argument("--svg", action="store_true", help="also render SVG figures")
    parser.add_argument("--gammas", default=None,
                        help="comma-separated dissipation rates (powerlaw, bound-check)")
    for key in _OVERRIDE_KEYS:
        parser.add_argument(f"--{key}", default=None, metavar="V",
                            help=f"override config key {key}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {k: getattr(args, k) for k in _OVERRIDE_KEYS if getattr(args, k) is not None}
        cfg = parse_config(args.config, overrides)
        os.makedirs(args.out_dir, exist_ok=True)
        ctx = RunContext(cfg=cfg, out_dir=args.out_dir, svg=args.svg, outputs=[])
        start = time.perf_counter()
        name = args.subcommand
        if name == "otoc-heatmap":
            run_otoc_heatmap(ctx)
        elif name == "corrected-heatmap":
            run_corrected_heatmap(ctx)
        elif name == "weights":
            run_weights(ctx)
        elif name == "lightcone-width":
            run_lightcone_width(ctx)
        elif name == "powerlaw":
            run_powerlaw(ctx, _parse_gammas(args.gammas or "0.05,0.08,0.1,0.13,0.16"))
        elif name == "lr-norms":
            run_lr_norms(ctx)
        elif name == "norm-decay":
            run_norm_decay(ctx)
        elif name == "bound-check":
            run_bound_check(ctx, _parse_gammas(args.gammas or "0.01,0.02"))
        elif name == "quasilocality":
            run_quasilocality(ctx)
        elif name == "validate":
            run_validate(ctx)
        _write_manifest(ctx, name, time.perf_counter() - start)
    except ConfigError as exc:
        print(f'dotoc-error code=2 kind=config msg="{exc}"', file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f'dotoc-error code=1 kind=validation msg="{exc}"', file=sys.stderr)
        return 1
    except (NumericalError, DotocError, ValueError) as exc:
        print(f'dotoc-error code=3 kind=runtime msg="{exc}"', file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
