"""Serialization of reports and plot data.

Reports are JSON with every float written to 17 significant digits; plot
data is CSV with a fixed one-line header.
"""

import json
import math
from pathlib import Path

import numpy as np

from .errors import FraclmiError, InvalidInput

__all__ = ["OutputError", "format_float", "dumps", "emit_plot_data", "emit_eigen_data",
           "read_plot_data"]


class OutputError(FraclmiError, OSError):
    code = "unwritable_destination"


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    text = f"{x:.17g}"
    if not any(ch in text for ch in ".eEn"):
        text += ".0"
    return text


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return {None: "null", True: "true", False: "false"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with floats at 17 significant digits and non-finite values as null."""
    return _encode(obj, indent, 0) + "\n"


def _write_csv(destination, header, rows):
    path = Path(destination)
    lines = [header] + [",".join(format_float(v) for v in row) for row in rows]
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def emit_plot_data(sweep, destination):
    """Write ``omega,sigma_max`` records for a sweep."""
    if len(sweep.omegas) == 0:
        raise InvalidInput("cannot emit an empty sweep")
    return _write_csv(destination, "omega,sigma_max", zip(sweep.omegas, sweep.sigmas))


def emit_eigen_data(report, destination):
    """Write ``re,im`` records, one per eigenvalue of ``A``."""
    return _write_csv(destination, "re,im", ((z.real, z.imag) for z in report.eigenvalues))


def read_plot_data(path):
    """Load a CSV written by this module as ``(header, ndarray)``."""
    lines = Path(path).read_text().splitlines()
    rows = [[float(v) for v in line.split(",")] for line in lines[1:] if line]
    return lines[0], np.array(rows).reshape(-1, len(lines[0].split(",")))
