"""Tabular reports: CSV as the primary format with a JSON mirror.

Output is a pure function of the report contents (no timestamps), so two
runs with the same configuration produce byte-identical files.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List

LN2 = math.log(2.0)


@dataclass
class Table:
    name: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    #: columns holding nats-valued quantities, rescaled when bits are requested
    nat_columns: frozenset = frozenset()

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def converted(self, bits):
        if not bits or not self.nat_columns:
            return self.rows
        idx = [i for i, c in enumerate(self.columns) if c in self.nat_columns]
        out = []
        for row in self.rows:
            row = list(row)
            for i in idx:
                if isinstance(row[i], (int, float)) and not isinstance(row[i], bool):
                    row[i] = row[i] / LN2
            out.append(row)
        return out


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    command: str
    params: dict
    tables: List[Table] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    def table(self, name, columns, nat_columns=()):
        t = Table(name, list(columns), nat_columns=frozenset(nat_columns))
        self.tables.append(t)
        return t

    def check(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def all_tables(self):
        checks = Table("checks", ["check", "passed", "detail"])
        for c in self.checks:
            checks.add(c.name, c.passed, c.detail)
        params = Table("params", ["key", "value"])
        for k in sorted(self.params):
            params.add(k, self.params[k])
        return [params] + self.tables + [checks]


def format_cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(float(x))
    if hasattr(x, "item"):  # numpy scalar
        return format_cell(x.item())
    return str(x)


def _json_value(x):
    if hasattr(x, "item"):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def table_csv(table, bits=False):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.converted(bits):
        writer.writerow([format_cell(x) for x in row])
    return buf.getvalue()


def report_csv(report, bits=False):
    """All tables in one text stream, each preceded by a ``# table: name`` line."""
    parts = [f"# qexponents {report.command} units={'bits' if bits else 'nats'}\n"]
    for t in report.all_tables():
        parts.append(f"# table: {t.name}\n")
        parts.append(table_csv(t, bits))
    return "".join(parts)


def report_json(report, bits=False):
    doc = {
        "command": report.command,
        "units": "bits" if bits else "nats",
        "ok": report.ok,
        "tables": {
            t.name: [
                {c: _json_value(v) for c, v in zip(t.columns, row)}
                for row in t.converted(bits)
            ]
            for t in report.all_tables()
        },
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_report(report, fmt="csv", out=None, bits=False, stream=None):
    """Emit ``report``.

    With ``out`` unset the report goes to ``stream``. Otherwise ``out`` is a
    directory: CSV writes one ``<table>.csv`` per table, JSON writes
    ``<command>.json``.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if out is None:
        text = report_csv(report, bits) if fmt == "csv" else report_json(report, bits)
        stream.write(text)
        return []
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "json":
        path = outdir / f"{report.command}.json"
        path.write_text(report_json(report, bits), encoding="utf-8")
        written.append(path)
    else:
        for t in report.all_tables():
            path = outdir / f"{report.command}_{t.name}.csv"
            path.write_text(table_csv(t, bits), encoding="utf-8")
            written.append(path)
    return written
