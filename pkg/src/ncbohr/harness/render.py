"""Markdown rendering of verification results."""

from __future__ import annotations

from typing import Sequence

from ..inequalities.report import VerificationReport


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _cell(text: str) -> str:
    return str(text).replace("|", "\\|")


def report_markdown(report: VerificationReport) -> str:
    lines = [f"### {report.id} ({report.verdict})", ""]
    if report.hypothesis is not None:
        h = report.hypothesis
        lines.append(f"Hypothesis `{h.kind}`: {h.label}" + (f", {h.detail}" if h.detail else ""))
        lines.append("")
    if report.levels:
        lines.append("Parameters: " + ", ".join(f"{k}={_fmt(v)}" for k, v in report.levels.items()))
        lines.append("")
    lines += ["| check | lhs | rhs | slack | tol | result |", "|---|---|---|---|---|---|"]
    for m in report.margins:
        lines.append(
            f"| {_cell(m.name)} | {_fmt(m.lhs)} | {_fmt(m.rhs)} | {_fmt(m.slack)} | {_fmt(m.tol)} | "
            f"{'pass' if m.passed else 'FAIL'} |"
        )
    for note in report.notices:
        lines.append(f"\n> {note}")
    return "\n".join(lines) + "\n"


def results_markdown(results: Sequence[dict]) -> str:
    """One section per instance; each entry has ``instance``, ``verdict``, ``reports`` and ``error``."""
    lines = ["# Verification results", "", "| instance | verdict | reports |", "|---|---|---|"]
    for entry in results:
        lines.append(f"| {_cell(entry['instance'])} | {entry['verdict']} | {len(entry['reports'])} |")
    out = "\n".join(lines) + "\n"
    for entry in results:
        out += f"\n## {entry['instance']}\n\n"
        if entry.get("error"):
            out += f"{entry['verdict']}: {entry['error']}\n"
        for report in entry["reports"]:
            out += "\n" + report_markdown(report)
    return out
