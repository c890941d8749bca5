"""Report serialisation: versioned JSON as the canonical format, CSV as
a flat projection of the same rows.

Everything in a report is a pure function of the configuration except
the per-check wall times; byte-for-byte comparisons between runs should
normalise the seconds column first (see normalized()).
"""

from __future__ import annotations

import csv
import io
import json

from .checks import EQUATION_TAGS, RunConfig, SuiteResult

VERSION = "1.0"

CHECK_FIELDS = ("name", "paper_ref", "residual", "tol", "pass", "seconds")
CONVERGENCE_FIELDS = ("name", "grid", "residual")


def build_report(cfg: RunConfig, result: SuiteResult) -> dict:
    out = {"version": VERSION, "config": cfg.as_dict(),
           "checks": [{k: row[k] for k in CHECK_FIELDS}
                      for row in result.rows],
           "convergence": [{k: row[k] for k in CONVERGENCE_FIELDS}
                           for row in result.convergence]}
    if result.aborted is not None:
        out["aborted"] = result.aborted
    return out


def validate_report(report: dict) -> list:
    """Structural problems with a report; empty when well formed."""
    problems = []
    for key in ("version", "config", "checks", "convergence"):
        if key not in report:
            problems.append("missing key: %s" % key)
    for row in report.get("checks", ()):
        if tuple(row.keys()) != CHECK_FIELDS:
            problems.append("bad check row fields: %s" % (tuple(row.keys()),))
        elif row["paper_ref"] not in EQUATION_TAGS:
            problems.append("unregistered tag: %s" % row["paper_ref"])
    names = [r.get("name") for r in report.get("checks", ())]
    if names != sorted(names):
        problems.append("check rows not sorted by name")
    for row in report.get("convergence", ()):
        if tuple(row.keys()) != CONVERGENCE_FIELDS:
            problems.append("bad convergence row fields: %s"
                            % (tuple(row.keys()),))
    return problems


def normalized(report: dict) -> dict:
    """The report with wall times zeroed; this is the part of a report
    that is bit-identical across runs of the same configuration."""
    out = json.loads(json.dumps(report))
    for row in out.get("checks", ()):
        row["seconds"] = 0.0
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def to_csv(report: dict) -> str:
    """Flat projection: one table, check rows then convergence rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# version", report["version"]])
    for key, val in report["config"].items():
        w.writerow(["# config:" + key, "" if val is None else val])
    if "aborted" in report:
        w.writerow(["# aborted", report["aborted"]])
    w.writerow(["kind", "name", "paper_ref", "grid", "residual", "tol",
                "pass", "seconds"])
    for row in report["checks"]:
        w.writerow(["check", row["name"], row["paper_ref"], "",
                    repr(row["residual"]), repr(row["tol"]),
                    str(row["pass"]).lower(), repr(row["seconds"])])
    for row in report["convergence"]:
        w.writerow(["convergence", row["name"], "", row["grid"],
                    repr(row["residual"]), "", "", ""])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError("unknown report format: %s" % fmt)
