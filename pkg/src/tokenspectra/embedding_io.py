"""Binary and JSON readers/writers for sequences, vectors and projections.

Binary layout (all little-endian)::

    offset  size  field
    0       4     magic, b"ESEQ" or b"PROJ"
    4       4     version (uint32, currently 1)
    8       4     rows (uint32): n tokens, or out_dim
    12      4     cols (uint32): d channels, or in_dim
    16      4     flags (uint32, must be 0)
    20      4*r*c float32 payload, row-major (token-major for ESEQ)
"""

import hashlib
import json
import struct

import numpy as np

from .exceptions import (
    BadMagicError,
    EmptyDimensionError,
    FormatError,
    NonFiniteValueError,
    SchemaError,
    ShapeError,
    TruncatedPayloadError,
)

SEQUENCE_MAGIC = b"ESEQ"
PROJECTION_MAGIC = b"PROJ"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIIII")
_F32 = np.dtype("<f4")


def _pack(magic, array):
    array = np.asarray(array)
    if array.ndim != 2:
        raise ShapeError(f"expected a 2-D array, got shape {array.shape}")
    rows, cols = array.shape
    if rows == 0 or cols == 0:
        raise EmptyDimensionError(f"cannot write an empty {rows}x{cols} array")
    payload = np.ascontiguousarray(array, dtype=_F32)
    if not np.all(np.isfinite(payload)):
        raise NonFiniteValueError("refusing to write non-finite values")
    return HEADER.pack(magic, FORMAT_VERSION, rows, cols, 0) + payload.tobytes()


def _unpack(magic, data):
    data = bytes(data)
    if len(data) < HEADER.size:
        raise TruncatedPayloadError(f"file is {len(data)} bytes, shorter than the {HEADER.size}-byte header")
    got_magic, version, rows, cols, flags = HEADER.unpack_from(data)
    if got_magic != magic:
        raise BadMagicError(f"bad magic {got_magic!r}, expected {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported version {version}")
    if flags != 0:
        raise FormatError(f"unsupported flags {flags:#x}")
    if rows == 0 or cols == 0:
        raise EmptyDimensionError(f"header declares an empty {rows}x{cols} array")
    expected = rows * cols * _F32.itemsize
    payload = data[HEADER.size:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"header declares {rows}x{cols} values ({expected} bytes), payload has {len(payload)} bytes"
        )
    if len(payload) > expected:
        raise FormatError(f"{len(payload) - expected} trailing bytes after payload")
    array = np.frombuffer(payload, dtype=_F32).reshape(rows, cols).astype(np.float32)
    if not np.all(np.isfinite(array)):
        bad = np.argwhere(~np.isfinite(array))[0]
        raise NonFiniteValueError(f"non-finite value at row {bad[0]}, column {bad[1]}")
    return array


def write_sequence(X):
    """Serialize an ``(n, d)`` sequence to ESEQ bytes (stored as float32)."""
    return _pack(SEQUENCE_MAGIC, X)


def read_sequence(data):
    """Parse ESEQ bytes into a float32 ``(n, d)`` array."""
    return _unpack(SEQUENCE_MAGIC, data)


def write_projection(P):
    return _pack(PROJECTION_MAGIC, P)


def read_projection(data):
    """Parse PROJ bytes into a float32 ``(out_dim, in_dim)`` array."""
    return _unpack(PROJECTION_MAGIC, data)


def read_embedding(data):
    """Read a single vector stored as a one-token ESEQ file."""
    X = read_sequence(data)
    if X.shape[0] != 1:
        raise ShapeError(f"expected a 1-token sequence holding one embedding, got n={X.shape[0]}")
    return X[0]


def write_embedding(v):
    return write_sequence(np.asarray(v).reshape(1, -1))


def _json_number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    if not np.isfinite(value):
        raise SchemaError(path, "non-finite value")
    return value


def parse_sequence_json(obj, dtype=np.float32):
    """Validate a decoded ``{"n", "d", "data"}`` object and return the array."""
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected an object with keys n, d, data")
    for key in ("n", "d", "data"):
        if key not in obj:
            raise SchemaError(f"$.{key}", "missing required key")
    n, d, rows = obj["n"], obj["d"], obj["data"]
    for key, value in (("n", n), ("d", d)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"$.{key}", "expected an integer")
        if value < 1:
            raise SchemaError(f"$.{key}", f"must be >= 1, got {value}")
    if not isinstance(rows, list):
        raise SchemaError("$.data", "expected a list of rows")
    if len(rows) != n:
        raise SchemaError("$.data", f"expected {n} rows, got {len(rows)}")
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise SchemaError(f"$.data[{i}]", "expected a list of numbers")
        if len(row) != d:
            raise SchemaError(f"$.data[{i}]", f"row {i} has {len(row)} values, expected {d}")
        for j, value in enumerate(row):
            _json_number(value, f"$.data[{i}][{j}]")
    return np.array(rows, dtype=np.float64).astype(dtype)


def read_sequence_json(text, dtype=np.float32):
    """Parse a JSON sequence document.

    Values are rounded to float32 by default so that a JSON file and its
    ESEQ twin load to identical arrays.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return parse_sequence_json(obj, dtype)


def write_sequence_json(X, double=False):
    X = np.asarray(X)
    values = X.astype(np.float64) if double else X.astype(np.float32).astype(np.float64)
    obj = {"n": int(X.shape[0]), "d": int(X.shape[1]), "data": values.tolist()}
    return json.dumps(obj) + "\n"


def load_sequence_file(path):
    """Load a sequence from ESEQ or JSON, detected by the leading magic bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == SEQUENCE_MAGIC:
        return read_sequence(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise BadMagicError(f"{path}: neither an ESEQ file nor UTF-8 JSON") from None
    return read_sequence_json(text)


def load_embedding_file(path):
    X = load_sequence_file(path)
    if X.shape[0] != 1:
        raise ShapeError(f"{path}: expected a 1-token sequence holding one embedding, got n={X.shape[0]}")
    return X[0]


def load_projection_file(path):
    """Return ``(matrix, sha256 hex digest of the file)``."""
    with open(path, "rb") as fh:
        data = fh.read()
    return read_projection(data), hashlib.sha256(data).hexdigest()
