"""Small deterministic CSV / key=value helpers."""

import csv
from pathlib import Path

import numpy as np

from .errors import InputError


def fmt(x):
    """Shortest round-trip decimal representation of a number."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_table(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_columns(path, columns):
    """Write equal-length 1-D arrays as CSV columns, in dict order."""
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise InputError("columns must have equal length", module="io")
    return write_table(path, names, zip(*arrays))


def read_table(path, numeric=None):
    """Read a CSV with a header row into a dict of column arrays.

    Columns whose entries all parse as numbers become float arrays, the
    rest stay string arrays. Names listed in ``numeric`` must be numeric.
    """
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader)]
            rows = [r for r in reader if r and any(c.strip() for c in r)]
    except (OSError, StopIteration, UnicodeDecodeError, csv.Error) as exc:
        raise InputError(f"cannot read {path}: {exc}", module="io") from exc
    if any(len(r) != len(header) for r in rows):
        raise InputError(f"ragged table in {path}", module="io")
    out = {}
    for j, h in enumerate(header):
        col = [r[j].strip() for r in rows]
        try:
            out[h] = np.array([float(c) for c in col], dtype=float)
        except ValueError as exc:
            if numeric is not None and h in numeric:
                raise InputError(f"non-numeric entry in {path}: {exc}", module="io") from exc
            out[h] = np.array(col, dtype=str)
    return out


def read_keyvalue(path, module):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}", module=module) from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value", module=module)
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out
