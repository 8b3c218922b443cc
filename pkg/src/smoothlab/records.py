"""Report, manifest and sample-file serialization.

Formats are pinned here:

* reports: line-delimited JSON (one row record per line, then one summary
  record), optionally mirrored as CSV with the fixed column order
  suite, case, lhs, rhs, ratio, pass;
* corpus manifest: line-delimited JSON records with fields
  id, kind, params, seed, dx, L, smooth_tag;
* sample files: little-endian binary, 32-byte header
  (magic "SMLB", uint32 version, uint64 count, float64 dx, float64 origin)
  followed by count float64 values.

Every write goes through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import math
import os
import struct
import tempfile

import numpy as np

from .errors import ConfigError
from .grid import GridFunction
from .verify import EquivalenceReport

MAGIC = b"SMLB"
VERSION = 1
_HEADER = struct.Struct("<4sIQdd")

CSV_COLUMNS = ("suite", "case", "lhs", "rhs", "ratio", "pass")
MANIFEST_FIELDS = ("id", "kind", "params", "seed", "dx", "L", "smooth_tag")


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # 'inf', '-inf', 'nan'
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return _jsonable(float(value))
    return value


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_record(record: dict) -> str:
    return json.dumps(_jsonable(record), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)


def write_jsonl(path: str, records) -> None:
    text = "".join(dump_record(r) + "\n" for r in records)
    _atomic_write(path, text.encode())


def write_text(path: str, text: str) -> None:
    _atomic_write(path, text.encode())


def report_records(report: EquivalenceReport) -> list[dict]:
    """Row records followed by one summary record."""
    records = []
    for row in report.rows:
        rec = {"suite": report.suite, "case": row.case, "lhs": row.lhs,
               "rhs": row.rhs, "ratio": row.ratio, "pass": row.passed}
        rec.update(row.extra)
        records.append(rec)
    summary = {"suite": report.suite, "summary": True,
               "params": report.params, "cases": len(report.rows),
               "spread": report.spread, "budget": report.budget,
               "pass": report.passed}
    records.append(summary)
    return records


def write_report(stem_path: str, report: EquivalenceReport,
                 with_csv: bool = False) -> list[str]:
    """Write stem.jsonl (and optionally stem.csv); returns paths written."""
    paths = [stem_path + ".jsonl"]
    write_jsonl(paths[0], report_records(report))
    if with_csv:
        lines = [",".join(CSV_COLUMNS)]
        for row in report.rows:
            lines.append(",".join([report.suite, row.case, repr(row.lhs),
                                   repr(row.rhs), repr(row.ratio),
                                   str(row.passed).lower()]))
        paths.append(stem_path + ".csv")
        write_text(paths[1], "\n".join(lines) + "\n")
    return paths


def render_summary(reports: dict[str, EquivalenceReport]) -> str:
    """Human-readable pass/fail table over all reports of a run."""
    lines = [f"{'report':24s} {'cases':>5s} {'spread':>10s} {'budget':>7s} "
             f"{'result':>6s}"]
    for stem, rep in reports.items():
        spread = f"{rep.spread:.3f}" if rep.spread is not None else "-"
        budget = f"{rep.budget:g}" if rep.budget is not None else "-"
        verdict = "pass" if rep.passed else "FAIL"
        lines.append(f"{stem:24s} {len(rep.rows):5d} {spread:>10s} "
                     f"{budget:>7s} {verdict:>6s}")
    overall = all(r.passed for r in reports.values())
    lines.append(f"overall: {'pass' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


# -- binary sample files ------------------------------------------------------

def write_samples(path: str, f: GridFunction) -> None:
    header = _HEADER.pack(MAGIC, VERSION, f.count, f.spacing, f.origin)
    _atomic_write(path, header + f.values.astype("<f8").tobytes())


def read_samples(path: str) -> GridFunction:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ConfigError(f"{path}: truncated sample file")
    magic, version, count, dx, origin = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ConfigError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ConfigError(f"{path}: unsupported version {version}")
    body = blob[_HEADER.size:]
    if len(body) != 8 * count:
        raise ConfigError(f"{path}: expected {count} samples, found "
                          f"{len(body) // 8}")
    values = np.frombuffer(body, dtype="<f8").astype(np.float64)
    hi = origin + (count - 1) * dx
    return GridFunction(dx, origin, values, origin, hi)


# -- corpus manifest ----------------------------------------------------------

def manifest_record(fid: str, kind: str, params: dict, seed: int, dx: float,
                    half_width: float, smooth_tag: bool) -> dict:
    return {"id": fid, "kind": kind, "params": params, "seed": seed,
            "dx": dx, "L": half_width, "smooth_tag": smooth_tag}


def write_manifest(path: str, records) -> None:
    write_jsonl(path, records)


def load_manifest(path: str) -> list[dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as e:
        raise ConfigError(f"cannot read manifest {path}: {e}") from e
    records = []
    seen = set()
    for i, line in enumerate(lines, 1):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{i}: invalid JSON ({e})") from e
        missing = [f for f in MANIFEST_FIELDS if f not in rec]
        if missing:
            raise ConfigError(f"{path}:{i}: missing fields {missing}")
        if rec["id"] in seen:
            raise ConfigError(f"{path}:{i}: duplicate id {rec['id']!r}")
        seen.add(rec["id"])
        records.append(rec)
    if not records:
        raise ConfigError(f"{path}: empty manifest")
    return records
