"""Persisting run reports: one JSON document plus one CSV table per law.

Layout of an output directory::

    report.json      schema_version, artifact_version, config, summary, laws
    laws/<ID>.csv    law_id, n, trial, generator, seed, <params...>, lhs, rhs, margin, pass, status
    run_meta.json    wall time and worker count (kept apart so report.json is reproducible)

Every file is written to a temporary sibling and moved into place with
``os.replace``, so an interrupted run never leaves a truncated file.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

from .suite import RunReport

REPORT_NAME = "report.json"
META_NAME = "run_meta.json"
TABLE_DIR = "laws"
FIXED_HEAD = ("law_id", "n", "trial", "generator", "seed")
FIXED_TAIL = ("lhs", "rhs", "margin", "pass", "status")


class ReportIOError(OSError):
    pass


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False, default=_json_default) + "\n"


def _json_default(x):
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (tuple, set, frozenset)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    if isinstance(v, (list, tuple, frozenset, set)):
        return " ".join(str(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v))
    return str(v)


def law_table(report: RunReport, law_id: str) -> str:
    rows = [(r.trial, rec) for r in report.results if r.trial.law_id == law_id for rec in r.records]
    keys = []
    for _, rec in rows:
        for k in rec.params:
            if k not in keys and k not in FIXED_HEAD:
                keys.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIXED_HEAD + tuple(keys) + FIXED_TAIL)
    for trial, rec in rows:
        w.writerow(
            [law_id, trial.n, trial.index, trial.spec.kind, trial.spec.seed]
            + [_cell(rec.params.get(k)) for k in keys]
            + [_cell(rec.lhs), _cell(rec.rhs), _cell(rec.margin), _cell(rec.passed), rec.status]
        )
    return buf.getvalue()


def write_report(report: RunReport, out_dir: str | os.PathLike, wall_time: float | None = None) -> Path:
    out = Path(out_dir)
    for law in report.config.laws:
        atomic_write_text(out / TABLE_DIR / f"{_safe(law)}.csv", law_table(report, law))
    if wall_time is not None:
        atomic_write_text(out / META_NAME, dumps({"wall_time_s": round(wall_time, 3), "workers": report.config.workers}))
    return atomic_write_text(out / REPORT_NAME, dumps(report.to_dict()))


def _safe(law_id: str) -> str:
    return law_id.replace("'", "p")


def load_json(path: str | os.PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ReportIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def write_rows(path: str | os.PathLike, header, rows) -> Path:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return atomic_write_text(path, buf.getvalue())
