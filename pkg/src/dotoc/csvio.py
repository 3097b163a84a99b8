"""Deterministic CSV emission and parsing.

Grids are written long format (t,site,value), 1-D series and reports as
plain column tables.  Reals carry 12 significant digits, invalid cells the
literal NA, and a `# config:` comment embeds the generating configuration.
Writes are atomic (temp file + rename) and byte-stable for identical input.
"""

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .otoc import HeatmapSeries


@dataclass
class Table:
    """Column-oriented report for CSV/SVG output."""

    columns: list
    rows: list
    label: str = "table"
    config: dict = field(default_factory=dict)


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if math.isnan(f):
        return "NA"
    if math.isinf(f):
        return "inf" if f > 0 else "-inf"
    return f"{f:.12g}"


def _config_comment(config: dict) -> str:
    parts = [f"{k}={format_value(v)}" for k, v in config.items()]
    return "# config: " + " ".join(parts)


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(obj, path: str, config: dict | None = None) -> str:
    """Write a HeatmapSeries (long format) or Table to path; returns path."""
    if isinstance(obj, HeatmapSeries):
        cfg = config if config is not None else obj.config
        lines = [_config_comment(cfg), "t,site,value"]
        order = sorted(range(len(obj.sites)), key=lambda j: obj.sites[j])
        for i, t in enumerate(obj.times):
            for j in order:
                lines.append(
                    f"{format_value(t)},{obj.sites[j]},{format_value(obj.values[i, j])}")
    elif isinstance(obj, Table):
        cfg = config if config is not None else obj.config
        lines = [_config_comment(cfg), ",".join(obj.columns)]
        for row in obj.rows:
            lines.append(",".join(format_value(v) for v in row))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def read_grid_csv(path: str) -> HeatmapSeries:
    """Parse a long-format grid CSV back into a HeatmapSeries."""
    config: dict = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# config:"):
                for part in line[len("# config:"):].split():
                    if "=" in part:
                        k, v = part.split("=", 1)
                        config[k] = v
                continue
            if not line or line.startswith("#") or line.startswith("t,"):
                continue
            t_s, site_s, v_s = line.split(",")
            v = float("nan") if v_s == "NA" else float(v_s)
            rows.append((float(t_s), int(site_s), v))
    times = sorted({r[0] for r in rows})
    sites = sorted({r[1] for r in rows})
    values = np.full((len(times), len(sites)), np.nan)
    t_index = {t: i for i, t in enumerate(times)}
    s_index = {s: j for j, s in enumerate(sites)}
    for t, s, v in rows:
        values[t_index[t], s_index[s]] = v
    return HeatmapSeries(np.array(times), sites, values, "from_csv", config)
