"""
Utility functions for the hessian-rigidity library: logging setup,
scenario loading and report output.
"""

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Any, List, Optional, Sequence

from pydantic import ValidationError

from .exceptions import ConfigurationError, FileOperationError
from .models import Report, Scenario


def setup_logging(
    level: str = "WARNING",
    format_string: Optional[str] = None,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Set up logging configuration for the library.

    Log records go to stderr (and optionally a file), never into reports.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Custom format string for log messages
        log_file: Optional file to write logs to

    Returns:
        Configured package logger
    """
    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format=format_string,
        handlers=[
            logging.StreamHandler(),
            *([logging.FileHandler(log_file)] if log_file else []),
        ],
        force=True,
    )

    return logging.getLogger("hessian_rigidity")


def load_json(filepath: str) -> Any:
    """
    Read a JSON document.

    Raises:
        FileOperationError: If the file is missing or unreadable
        ConfigurationError: If the content is not valid JSON
    """
    try:
        with open(filepath, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise FileOperationError("Failed to read configuration", filepath=filepath, operation="load", cause=e)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid JSON in {filepath}", errors=[f"line {e.lineno}: {e.msg}"])


def parse_scenario(data: Any) -> Scenario:
    """
    Validate a scenario mapping; unknown keys are rejected.

    Raises:
        ConfigurationError: With one entry per validation error
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Scenario must be a JSON object", expected_type="object")
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        errors = [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        ]
        raise ConfigurationError("Invalid scenario", errors=errors)


def load_batch(filepath: str) -> List[Scenario]:
    """
    Load scenarios from a JSON list or an object with a "scenarios" list.

    Raises:
        ConfigurationError: If the document has another shape
    """
    data = load_json(filepath)
    if isinstance(data, dict) and "scenarios" in data:
        data = data["scenarios"]
    if not isinstance(data, list):
        raise ConfigurationError("Batch file must hold a list of scenarios", expected_type="list")
    return [parse_scenario(item) for item in data]


def load_matrix(filepath: str) -> List[List[float]]:
    """
    Load a square matrix stored as a JSON list of rows.

    Raises:
        ConfigurationError: If the rows are ragged or not numeric
    """
    data = load_json(filepath)
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise ConfigurationError("Matrix file must hold a non-empty list of rows", config_key="matrix")
    if any(len(row) != len(data) for row in data):
        raise ConfigurationError("Matrix must be square", config_key="matrix")
    try:
        return [[float(v) for v in row] for row in data]
    except (TypeError, ValueError) as e:
        raise ConfigurationError("Matrix entries must be numbers", config_key="matrix", errors=[str(e)])


def render_report(report: Report, fmt: str = "json") -> str:
    """
    Serialize a report.

    JSON output is the full document; CSV output has one row per check
    with the measured values as an embedded JSON object.
    """
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    if fmt != "csv":
        raise ConfigurationError(f"Unknown report format '{fmt}'", config_key="output.format")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["name", "status", "message", "measured"])
    for check in report.model_dump(mode="json")["checks"]:
        writer.writerow([check["name"], check["status"], check["message"] or "", json.dumps(check["measured"])])
    return buffer.getvalue()


def write_text(filepath: str, text: str) -> str:
    """
    Write text to a file, creating parent directories.

    Raises:
        FileOperationError: If writing fails
    """
    try:
        parent = os.path.dirname(filepath)
        if parent:
            Path(parent).mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        return filepath
    except OSError as e:
        raise FileOperationError("Failed to write output", filepath=filepath, operation="save", cause=e)


def write_report(report: Report, filepath: str, fmt: str = "json") -> str:
    return write_text(filepath, render_report(report, fmt))


def write_csv_rows(filepath: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    """Write a per-point CSV dump; floats use repr so files are reproducible."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return write_text(filepath, buffer.getvalue())


def format_summary(report: Report) -> str:
    """One line per check followed by a total, for terminal output."""
    marks = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}
    lines = [f"  {marks[c.status]:4}  {c.name}" + (f"  ({c.message})" if c.message else "") for c in report.checks]
    lines.append(f"{report.summary.total} checks, {report.summary.failed} failed")
    return "\n".join(lines)
