"""Rendering of experiment results: JSON documents, text tables, CSV files.

JSON output is deterministic (sorted keys, fixed indentation, trailing
newline) so identical runs produce byte-identical files. Text tables round to
four decimals; JSON keeps full precision.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


def json_document(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json_document(payload))
    return path


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def fmt(value, places: int = 4) -> str:
    """Numbers at fixed decimals, everything else as-is, None as a dash."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, float)):
        return f"{value:.{places}f}" if isinstance(value, float) else str(value)
    return str(value)


def table(headers: list[str], rows: list[list]) -> str:
    """Plain aligned table; first column left-aligned, the rest right-aligned."""
    cells = [[fmt(v) for v in row] for row in rows]
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in cells)) if cells else len(headers[i])
        for i in range(len(headers))
    ]

    def render(row: list[str]) -> str:
        parts = [row[0].ljust(widths[0])]
        parts += [row[i].rjust(widths[i]) for i in range(1, len(row))]
        return "  ".join(parts).rstrip()

    lines = [render(headers), render(["-" * w for w in widths])]
    lines += [render(row) for row in cells]
    return "\n".join(lines)


def replication_csv_rows(rep_set) -> tuple[list[str], list[list]]:
    """Header and rows for one engine/scenario replication summary CSV."""
    staff_ids = sorted(rep_set.summaries[0].utilisation) if rep_set.summaries else []
    header = [
        "replication", "n_customers", "mean_total_wait", "mean_time_in_system",
    ] + [f"utilisation_{sid}" for sid in staff_ids]
    rows = []
    for s in rep_set.summaries:
        rows.append(
            [s.replication, s.n_customers, repr(s.mean_total_wait), repr(s.mean_time_in_system)]
            + [repr(s.utilisation[sid]) for sid in staff_ids]
        )
    return header, rows


def histogram_csv_rows(hist) -> tuple[list[str], list[list]]:
    header = ["bin_start", "bin_end", "count"]
    rows = [
        [repr(start), repr(end), count]
        for (start, end), count in zip(hist.bin_edges(), hist.counts)
    ]
    return header, rows


def run_text(engine: str, scenario_id: str, rep_set) -> str:
    waits = rep_set.mean_waits
    times = rep_set.mean_times_in_system
    n = len(rep_set.summaries)
    mean_wait = sum(waits) / n
    mean_tis = sum(times) / n
    lines = [
        f"engine {engine}, scenario {scenario_id}: {n} replications",
        f"  mean customer waiting time   {mean_wait:.4f} min",
        f"  mean customer time in system {mean_tis:.4f} min",
    ]
    summaries = rep_set.summaries
    for sid in sorted(summaries[0].utilisation):
        util = sum(s.utilisation[sid] for s in summaries) / n
        lines.append(f"  mean utilisation {sid}        {util:.4f}")
    return "\n".join(lines)


def validation_text(report) -> str:
    """Human-readable block for a validation report."""
    d = report.to_json_dict()
    lines = [
        f"validation: scenario {d['scenario_id']}, {d['replications']} replications, "
        f"seed {d['master_seed']}, alpha {fmt(d['alpha'])}",
        "",
    ]
    rows = []
    for name in ("des", "abs", "observed"):
        stats = d["descriptive"][name]
        if stats is None:
            continue
        rows.append(
            [name, stats["n"], stats["mean"], stats["median"], stats["standard_deviation"]]
        )
    lines.append(table(["sample", "n", "mean", "median", "sd"], rows))
    lines.append("")
    rows = []
    for name in ("des_vs_abs", "des_vs_observed", "abs_vs_observed"):
        t = d["tests"][name]
        if t is None:
            continue
        rows.append([name, t["u_statistic"], t["p_value"], t["method"]])
    lines.append(table(["mann-whitney", "U", "p", "method"], rows))
    lines.append("")
    var = d["variance"]
    rows = [["des", var["des"]], ["abs", var["abs"]]]
    if var["observed"] is not None:
        rows.append(["observed", var["observed"]])
    rows.append(["ratio des/abs", var["ratio_des_abs"]])
    lines.append(table(["wait variance", "value"], rows))
    lines.append("")
    for name, verdict in d["hypotheses"].items():
        lines.append(f"  {name}: {verdict}")
    return "\n".join(lines)


def comparison_text(report) -> str:
    """Human-readable block for a scenario-comparison report."""
    d = report.to_json_dict()
    lines = [
        f"scenario comparison: {d['replications']} paired replications, "
        f"seed {d['master_seed']}, alpha {fmt(d['alpha'])}",
        f"comparisons against scenario {d['scenario_ids'][0]}: {d['comparisons_count']}, "
        f"per-comparison level {fmt(d['per_comparison_alpha'])}",
    ]
    for engine, block in d["engines"].items():
        lines.append("")
        lines.append(f"[{engine}] per-scenario summary over replication means")
        rows = [
            [r["scenario_id"], r["measure"], r["mean"], r["standard_deviation"],
             r["ci_lower"], r["ci_upper"]]
            for r in block["scenario_rows"]
        ]
        lines.append(table(["scenario", "measure", "mean", "sd", "ci low", "ci high"], rows))
        lines.append("")
        lines.append(f"[{engine}] paired differences (reference minus other)")
        rows = [
            [f"{c['reference_id']} vs {c['other_id']}", c["measure"], c["mean_difference"],
             c["ci_lower"], c["ci_upper"], c["verdict"]]
            for c in block["comparisons"]
        ]
        lines.append(table(["pair", "measure", "diff", "ci low", "ci high", "verdict"], rows))
        lines.append(f"[{engine}] Ho_H (more staff, less waiting): {block['Ho_H']}")
    lines.append("")
    lines.append(f"Ho_G (both engines agree): {d['Ho_G']}")
    return "\n".join(lines)


def calibration_text(result) -> str:
    d = result.to_json_dict()
    model = d["service_model"]
    lines = [
        f"calibration: {d['evaluations']} evaluations, objective {d['objective']:.3e}",
        table(
            ["parameter", "value"],
            [[k, model[k]] for k in ("job1_mean", "job2_mean", "job3_mean", "dwell_mean")],
        ),
        table(
            ["target", "achieved", "relative error"],
            [
                ["mean_wait", d["achieved"]["mean_wait"], d["relative_errors"]["mean_wait"]],
                [
                    "mean_time_in_system",
                    d["achieved"]["mean_time_in_system"],
                    d["relative_errors"]["mean_time_in_system"],
                ],
            ],
        ),
    ]
    return "\n\n".join(lines)


def arrivals_check_text(payload: dict) -> str:
    lines = [
        f"arrival profile check: {payload['replications']} replications, "
        f"seed {payload['master_seed']}",
        f"expected arrivals per day {fmt(payload['expected_total'])}, "
        f"observed mean {fmt(payload['observed_mean_total'])} "
        f"(z = {fmt(payload['z_total'])})",
        "",
    ]
    rows = [
        [f"hour {b['hour']}", b["configured_rate"], b["expected_count"],
         b["observed_mean_count"], b["z"]]
        for b in payload["hours"]
    ]
    lines.append(table(["bucket", "rate/min", "expected", "observed mean", "z"], rows))
    return "\n".join(lines)
