"""Verdict reports.  The JSON document is canonical; CSV and markdown are
projections of the same rows."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import Optional, Sequence

from . import __version__
from .verify import Status, Verdict, VerifyConfig

STATUS_ORDER = [s.value for s in Status]


def _bv(v) -> Optional[str]:
    return None if v is None else v.to_smtlib()


def verdict_row(v: Verdict, timings: bool = False) -> dict:
    cex = None
    if v.counterexample is not None:
        c = v.counterexample
        cex = {"s": _bv(c.s), "t": _bv(c.t), "x": _bv(c.x), "direction": c.direction}
    stats = {
        "pairs_checked": v.stats.pairs_checked,
        "literal_evaluations": v.stats.literal_evaluations,
        "ic_true_pairs": v.stats.ic_true_pairs,
        "witnesses_via_hint": v.stats.witnesses_via_hint,
        "witnesses_via_candidate": v.stats.witnesses_via_candidate,
        "witnesses_via_search": v.stats.witnesses_via_search,
    }
    if timings:
        stats["elapsed_seconds"] = round(v.stats.elapsed, 6)
    return {
        "entry": v.entry,
        "width": v.width,
        "mode": v.mode.value,
        "status": v.status.value,
        "counterexample": cex,
        "unwitnessed": None if v.unwitnessed is None else {"s": _bv(v.unwitnessed[0]), "t": _bv(v.unwitnessed[1])},
        "stats": stats,
    }


def build_report(verdicts: Sequence[Verdict], config: VerifyConfig, timings: bool = False) -> dict:
    rows = [verdict_row(v, timings) for v in verdicts]
    totals = Counter(r["status"] for r in rows)
    return {
        "tool": "bvinvert",
        "version": __version__,
        # workers only affects scheduling, so it is left out to keep reports
        # identical across worker counts.
        "config": {
            "exhaustive_widths": list(config.exhaustive_widths),
            "sampled_widths": list(config.sampled_widths),
            "samples_per_width": config.samples_per_width,
            "witness_budget": config.witness_budget,
        },
        "seed": config.rng_seed,
        "rows": rows,
        "totals": {s: totals.get(s, 0) for s in STATUS_ORDER},
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


_FLAT_COLUMNS = ["entry", "width", "mode", "status", "s", "t", "x", "direction",
                 "ic_true_pairs", "witnesses_via_hint", "witnesses_via_candidate",
                 "witnesses_via_search", "pairs_checked", "literal_evaluations"]


def _flat(row: dict) -> dict:
    cex = row["counterexample"] or {}
    if not cex and row["unwitnessed"]:
        cex = dict(row["unwitnessed"], direction="unwitnessed")
    out = {k: row[k] for k in ("entry", "width", "mode", "status")}
    for k in ("s", "t", "x", "direction"):
        out[k] = cex.get(k) or ""
    out.update(row["stats"])
    return out


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    cols = list(_FLAT_COLUMNS)
    if report["rows"] and "elapsed_seconds" in report["rows"][0]["stats"]:
        cols.append("elapsed_seconds")
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for row in report["rows"]:
        w.writerow(_flat(row))
    return buf.getvalue()


def to_markdown(report: dict) -> str:
    cfg = report["config"]
    lines = [
        f"# bvinvert {report['version']} verification report",
        "",
        f"seed {report['seed']}; exhaustive widths {cfg['exhaustive_widths']}; "
        f"sampled widths {cfg['sampled_widths']}; {cfg['samples_per_width']} samples; "
        f"witness budget {cfg['witness_budget']}",
        "",
        "| entry | width | mode | status | s | t | x | witnesses (hint/cand/search of IC-true) |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for row in report["rows"]:
        f = _flat(row)
        st = row["stats"]
        wit = (f"{st['witnesses_via_hint']}/{st['witnesses_via_candidate']}/"
               f"{st['witnesses_via_search']} of {st['ic_true_pairs']}")
        status = f"**{f['status']}**" if f["status"] == Status.COUNTEREXAMPLE.value else f["status"]
        lines.append(f"| {f['entry']} | {f['width']} | {f['mode']} | {status} | "
                     f"{f['s']} | {f['t']} | {f['x']} | {wit} |")
    lines += ["", "| status | count |", "|---|---|"]
    lines += [f"| {k} | {n} |" for k, n in report["totals"].items()]
    return "\n".join(lines) + "\n"


FORMATS = {"json": to_json, "csv": to_csv, "md": to_markdown}
