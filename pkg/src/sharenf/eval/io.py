"""CSV writers. UTF-8, LF line endings, ``#`` comment header."""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .. import __version__

METRICS_HEADER = ("trial", "algorithm", "snr_db", "L", "K",
                  "theta_rmse_deg", "range_rmse_m", "pos_rmse_m", "failed")
SPECTRUM_HEADER = ("theta_deg", "value")
MUSIC_HEADER = ("theta_deg", "range_m", "value")
FLOPS_HEADER = ("algorithm", "flops")
ESTIMATES_HEADER = ("algorithm", "index", "theta_deg", "range_m")

AGGREGATION_NOTE = ("aggregate rmse = sqrt(mean over successful trials of per-trial rmse^2); "
                    "per-trial rmse = sqrt(mean over sources of squared error)")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n" if line else "#\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, comments=()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(header, rows, comments))
    return path


def build_comment() -> str:
    return f"build: sharenf {__version__}"


def read_comments(path) -> list[str]:
    """Leading ``#`` lines of a CSV with the ``# `` prefix stripped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            out.append(line[2:].rstrip("\n") if line.startswith("# ") else "")
    return out
