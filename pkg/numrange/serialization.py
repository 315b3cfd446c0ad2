"""Matrix files and JSON artifacts.

A matrix file is a UTF-8 JSON object ``{"d": d, "entries": [[re, im], ...]}``
with the ``d * d`` entries in row-major order and an optional ``"name"``.
Floats are written with Python's shortest round-trip representation, so a
written matrix reads back bit for bit.
"""

import csv
import io
import json
import math

import numpy as np

from .errors import InvalidInputError, MatrixFileError, MatrixParseError, MatrixShapeError, MatrixValueError
from .numerics import ComplexMatrix


def dumps(payload):
    """Serialize an artifact; key order is the construction order."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def parse_matrix(text, source="<string>"):
    """Validate a matrix file given as text.

    Raises:
        MatrixParseError: malformed JSON or schema, with line and column when known.
        MatrixShapeError: ``entries`` does not hold ``d * d`` pairs.
        MatrixValueError: an entry is not finite.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixParseError(f"{source}:{e.lineno}:{e.colno}: {e.msg}", lineno=e.lineno, colno=e.colno) from e
    if not isinstance(data, dict):
        raise MatrixParseError(f"{source}: expected a JSON object with keys 'd' and 'entries'")
    d = data.get("d")
    if not isinstance(d, int) or isinstance(d, bool):
        raise MatrixParseError(f"{source}: 'd' must be an integer, got {d!r}")
    if d < 1:
        raise MatrixShapeError(f"{source}: 'd' must be positive, got {d}")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise MatrixParseError(f"{source}: 'entries' must be a list of [re, im] pairs")
    for i, pair in enumerate(entries):
        if not isinstance(pair, list) or not all(_is_number(x) for x in pair):
            raise MatrixParseError(f"{source}: entry {i} must be a [re, im] pair of numbers, got {pair!r}")
        if len(pair) != 2:
            raise MatrixShapeError(f"{source}: entry {i} has {len(pair)} components, expected 2")
    if len(entries) != d * d:
        raise MatrixShapeError(f"{source}: expected {d * d} entries for d={d}, got {len(entries)}")
    for i, (re, im) in enumerate(entries):
        try:
            finite = math.isfinite(float(re)) and math.isfinite(float(im))
        except OverflowError:
            finite = False
        if not finite:
            raise MatrixValueError(f"{source}: entry {i} is not finite: [{re}, {im}]")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise MatrixParseError(f"{source}: 'name' must be a string")
    return ComplexMatrix.from_pairs(d, entries)


def load_matrix(path):
    try:
        with open(path, encoding="utf-8") as fin:
            text = fin.read()
    except OSError as e:
        raise MatrixFileError(f"cannot read matrix file {path}: {e.strerror}") from e
    return parse_matrix(text, source=str(path))


def matrix_payload(T, name=None):
    out = {"d": T.d, "entries": T.to_pairs()}
    if name is not None:
        out["name"] = name
    return out


def write_matrix(path, T, name=None):
    with open(path, "w", encoding="utf-8") as fout:
        fout.write(dumps(matrix_payload(ComplexMatrix.coerce(T), name)))


def parse_complex_vector(text):
    """Parse ``"re,im;re,im;..."`` into a complex vector.

    >>> parse_complex_vector("1,0;0,-2").tolist()
    [(1+0j), -2j]
    """
    values = []
    for part in str(text).split(";"):
        part = part.strip()
        if not part:
            continue
        pieces = part.split(",")
        if len(pieces) != 2:
            raise InvalidInputError(f"expected 're,im', got {part!r}")
        try:
            re, im = float(pieces[0]), float(pieces[1])
        except ValueError as e:
            raise InvalidInputError(f"expected 're,im', got {part!r}") from e
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidInputError(f"non-finite component in {part!r}")
        values.append(complex(re, im))
    if not values:
        raise InvalidInputError(f"empty complex vector {text!r}")
    return np.array(values, dtype=np.complex128)


def cloud_csv(cloud):
    """Point values as CSV with columns ``re_1, im_1, ..., re_n, im_n``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"{part}_{j + 1}" for j in range(cloud.n) for part in ("re", "im")])
    for value in cloud.values:
        writer.writerow([repr(float(x)) for z in value for x in (z.real, z.imag)])
    return buf.getvalue()
