"""Self-describing, byte-stable experiment reports (JSON or CSV)."""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import __version__

FLOAT_SAFE = 2 ** 53


def versions() -> dict:
    return {
        "partlab": __version__,
        "mpmath": mpmath.__version__,
        "numpy": np.__version__,
        "python": "%d.%d" % sys.version_info[:2],
    }


def encode(value, digits: int = 30):
    """Convert a result value into a JSON-safe, locale-independent form.

    Big integers and every high-precision real become decimal strings.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value if abs(value) < FLOAT_SAFE else str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, mpmath.mpc):
        return {"re": encode(value.real, digits), "im": encode(value.imag, digits)}
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, mpmath.mpf):
        with mpmath.workdps(digits + 5):
            return mpmath.nstr(value, digits, strip_zeros=False)
    if isinstance(value, dict):
        return {str(k): encode(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v, digits) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


@dataclass
class Report:
    command: str
    config: dict
    digits: int = 30
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def header(self) -> dict:
        return {"command": self.command, "config": encode(self.config),
                "digits": self.digits, "versions": versions()}

    def to_json(self) -> str:
        doc = {
            "header": self.header(),
            "summary": encode(self.summary, self.digits),
            "rows": encode(self.rows, self.digits),
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.header(), sort_keys=True) + "\n")
        buf.write("# summary " + json.dumps(encode(self.summary, self.digits), sort_keys=True) + "\n")
        if self.rows:
            cols = list(self.rows[0])
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for row in self.rows:
                w.writerow([_csv_cell(encode(row.get(c), self.digits)) for c in cols])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)
