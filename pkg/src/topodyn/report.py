"""Structured report documents: a key-value header plus named CSV table blocks.

Every pipeline stage that produces evidence (decompositions, tracing runs,
stability checks, demos) renders to this one format so reports stay diffable
and machine-readable without a serialization dependency.
"""

from __future__ import annotations

import os
import tempfile

PASS = "pass"
FAIL = "fail"
RESOLUTION_LIMITED = "resolution-limited"

EXIT_CODES = {PASS: 0, FAIL: 1, RESOLUTION_LIMITED: 2}


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


class Report:
    """An ordered key-value header plus named table blocks.

    Tables are stored as (columns, rows); rows are sequences matching the
    column count. Rendering is deterministic: header keys and table names
    keep insertion order.
    """

    def __init__(self, **header):
        self.header = dict(header)
        self.tables = {}

    def set(self, key, value):
        self.header[key] = value

    def add_table(self, name, columns, rows):
        if any("," in str(c) for c in columns):
            raise ValueError("Table column names must not contain commas.")
        self.tables[name] = (list(columns), [list(r) for r in rows])

    @property
    def verdict(self):
        return self.header.get("verdict", PASS)

    @property
    def exit_code(self):
        return EXIT_CODES.get(self.verdict, 1)

    def to_text(self):
        lines = []
        for key, value in self.header.items():
            lines.append(f"{key}: {_format_value(value)}")
        for name, (columns, rows) in self.tables.items():
            lines.append("")
            lines.append(f"[table {name}]")
            lines.append(",".join(str(c) for c in columns))
            for row in rows:
                lines.append(",".join(_format_value(v) for v in row))
        return "\n".join(lines) + "\n"

    def write(self, path):
        """Atomically write the rendered report (temp file + rename)."""
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(self.to_text())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def parse_report(text):
    """Inverse of Report.to_text, for round-trip tests and CLI consumers."""
    report = Report()
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].strip():
        key, _, value = lines[i].partition(":")
        report.header[key.strip()] = value.strip()
        i += 1
    while i < len(lines):
        line = lines[i].strip()
        if line.startswith("[table ") and line.endswith("]"):
            name = line[len("[table "):-1]
            columns = lines[i + 1].split(",")
            rows = []
            i += 2
            while i < len(lines) and lines[i].strip() and not lines[i].startswith("[table"):
                rows.append(lines[i].split(","))
                i += 1
            report.tables[name] = (columns, rows)
        else:
            i += 1
    return report
