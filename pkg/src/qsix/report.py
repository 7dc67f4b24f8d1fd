"""Stable serialization of check results and sweep aggregates.

Reports are reproducible byte-for-byte: keys sorted, no timestamps or host
details, complex numbers as {"re": ..., "im": ...}. CSV flattens one draw
per row; list-valued fields join with ';'.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json

SCHEMA = "qsix-report/1"


def to_jsonable(x):
    """Recursive conversion to JSON-encodable structures."""
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: to_jsonable(getattr(x, f.name))
                for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float) and x != x:
        return "nan"
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return "inf" if x > 0 else "-inf"
    return x


@dataclasses.dataclass(frozen=True)
class SweepReport:
    """Aggregate of one randomized sweep.

    results hold one entry per draw, ordered by draw_index, each carrying
    the drawn params and either a residual report or a classified error.
    """

    identity: str
    seed: int
    constraints: dict
    results: list
    summary: dict


def build_sweep_report(identity: str, seed: int, constraints,
                       rows) -> SweepReport:
    """rows: iterable of (draw_index, params, outcome) where outcome is a
    report dataclass (anything with .passed) or an exception instance."""
    results = []
    passed = failed = errored = 0
    max_rel = 0.0
    for draw_index, params, outcome in sorted(rows, key=lambda r: r[0]):
        entry = {"draw_index": draw_index, "params": to_jsonable(params)}
        if isinstance(outcome, BaseException):
            entry["error"] = {"type": type(outcome).__name__,
                              "message": str(outcome)}
            errored += 1
        else:
            entry["report"] = to_jsonable(outcome)
            if outcome.passed:
                passed += 1
            else:
                failed += 1
            rel = getattr(outcome, "rel_err", None)
            if rel is None:
                rel = getattr(outcome, "limit_rel_err", 0.0)
            if rel == rel and rel != float("inf"):
                max_rel = max(max_rel, rel)
        results.append(entry)
    summary = {"total": len(results), "passed": passed, "failed": failed,
               "errored": errored, "max_rel_err": max_rel}
    return SweepReport(identity=identity, seed=seed,
                       constraints=to_jsonable(constraints),
                       results=results, summary=summary)


def sweep_to_json(report: SweepReport) -> str:
    doc = {"schema": SCHEMA, **to_jsonable(report)}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _flatten(prefix: str, value, into: dict) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], into)
    elif isinstance(value, list):
        into[prefix] = ";".join(str(v) for v in value)
    else:
        into[prefix] = value


def sweep_to_csv(report: SweepReport) -> str:
    rows = []
    for entry in report.results:
        flat: dict = {}
        _flatten("", entry, flat)
        rows.append(flat)
    header: list = []
    seen = set()
    for flat in rows:
        for key in flat:
            if key not in seen:
                seen.add(key)
                header.append(key)
    header.sort()
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, restval="",
                            lineterminator="\n")
    writer.writeheader()
    for flat in rows:
        writer.writerow(flat)
    return buf.getvalue()


def render_sweep(report: SweepReport, fmt: str) -> str:
    if fmt == "json":
        return sweep_to_json(report)
    if fmt == "csv":
        return sweep_to_csv(report)
    raise ValueError(f"unknown report format {fmt!r}")
