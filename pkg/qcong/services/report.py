"""
Report rendering: JSON lines, CSV and a text table.
"""

import json
import logging
import sys
from typing import List, Optional

import pandas as pd

from qcong.models.schemas import CheckResult, OutputFormat

logger = logging.getLogger(__name__)


def _params_text(params: dict) -> str:
    return " ".join(f"{key}={value}" for key, value in sorted(params.items()))


def results_frame(results: List[CheckResult], timing: bool = True) -> pd.DataFrame:
    """One row per result, columns in report order."""
    records = []
    for result in results:
        record = result.report_record(timing)
        record["params"] = _params_text(record["params"])
        records.append(record)
    columns = ["check", "n", "power", "params", "holds", "valuation"] + (["ms"] if timing else [])
    return pd.DataFrame(records, columns=columns)


def render_json(results: List[CheckResult], timing: bool = True) -> str:
    return "".join(json.dumps(r.report_record(timing), ensure_ascii=False) + "\n" for r in results)


def render_csv(results: List[CheckResult], timing: bool = True) -> str:
    return results_frame(results, timing).to_csv(index=False)


def render_text(results: List[CheckResult], timing: bool = True) -> str:
    """Table with a ✓/✗ column, the detail text and a summary line."""
    if not results:
        return "no results\n"
    df = results_frame(results, timing)
    df.insert(0, "", df.pop("holds").map({True: "✓", False: "✗"}))
    df["detail"] = [r.detail for r in results]
    failed = sum(not r.holds for r in results)
    summary = f"{len(results)} checks, {failed} failed"
    return df.to_string(index=False) + "\n" + summary + "\n"


RENDERERS = {
    OutputFormat.JSON: render_json,
    OutputFormat.CSV: render_csv,
    OutputFormat.TEXT: render_text,
}


def render(results: List[CheckResult], fmt: OutputFormat = OutputFormat.TEXT, timing: bool = True) -> str:
    return RENDERERS[OutputFormat(fmt)](results, timing)


def write_report(text: str, out: Optional[str] = None) -> None:
    """Write to a file, or to stdout when out is None or '-'."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info(f"Report written to {out}")
