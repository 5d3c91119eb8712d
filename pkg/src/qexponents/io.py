"""JSON readers and writers for operators, hypothesis pairs and channels.

Operator documents look like ``{"dim": d, "re": [[...]], "im": [[...]]}``
(row-major; ``im`` may be omitted for real matrices). A pair file is
``{"rho": <operator>, "sigma": <operator>}`` and a channel file is
``{"letters": [<operator>, ...], "p": [...]}`` with ``p`` optional.
"""

import json
from pathlib import Path

import numpy as np

from .exceptions import InputFormatError


def _matrix_part(obj, key, dim, where):
    rows = obj.get(key)
    if not isinstance(rows, list):
        raise InputFormatError(f"{where}: field {key!r} must be a list of rows")
    if len(rows) != dim:
        raise InputFormatError(f"{where}: field {key!r} has {len(rows)} rows, expected {dim}")
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputFormatError(f"{where}: {key}[{i}] is not a list")
        if len(row) != dim:
            raise InputFormatError(
                f"{where}: ragged row {key}[{i}] has {len(row)} entries, expected {dim}"
            )
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InputFormatError(f"{where}: {key}[{i}][{j}] is not a number")
    return np.array(rows, dtype=float)


def operator_from_json(obj, where="operator"):
    """Build a complex matrix from an operator document; ragged rows are rejected."""
    if not isinstance(obj, dict):
        raise InputFormatError(f"{where}: expected an object with dim/re/im")
    dim = obj.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputFormatError(f"{where}: 'dim' must be a positive integer")
    re = _matrix_part(obj, "re", dim, where)
    im = _matrix_part(obj, "im", dim, where) if "im" in obj else np.zeros_like(re)
    return re + 1j * im


def operator_to_json(a):
    arr = np.asarray(a, dtype=complex)
    return {
        "dim": int(arr.shape[0]),
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def read_json(path):
    """Parse a JSON file, turning I/O and syntax problems into ``InputFormatError``."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"{p}: cannot read file ({exc.strerror or exc})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{p}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def pair_from_json(obj, where="pair"):
    if not isinstance(obj, dict) or "rho" not in obj or "sigma" not in obj:
        raise InputFormatError(f"{where}: expected an object with 'rho' and 'sigma'")
    rho = operator_from_json(obj["rho"], f"{where}.rho")
    sigma = operator_from_json(obj["sigma"], f"{where}.sigma")
    return rho, sigma


def pair_to_json(rho, sigma):
    return {"rho": operator_to_json(rho), "sigma": operator_to_json(sigma)}


def load_pair(path):
    """Return ``(rho, sigma)`` arrays from a pair file (not yet validated as states)."""
    return pair_from_json(read_json(path), str(path))


def channel_from_json(obj, where="channel"):
    if not isinstance(obj, dict) or not isinstance(obj.get("letters"), list):
        raise InputFormatError(f"{where}: expected an object with a 'letters' list")
    if not obj["letters"]:
        raise InputFormatError(f"{where}: 'letters' is empty")
    letters = [
        operator_from_json(op, f"{where}.letters[{i}]") for i, op in enumerate(obj["letters"])
    ]
    p = obj.get("p")
    if p is not None:
        if not isinstance(p, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in p
        ):
            raise InputFormatError(f"{where}: 'p' must be a list of numbers")
        p = np.array(p, dtype=float)
    return letters, p


def channel_to_json(letters, p=None):
    doc = {"letters": [operator_to_json(x) for x in letters]}
    if p is not None:
        doc["p"] = [float(x) for x in p]
    return doc


def load_channel(path):
    """Return ``(letters, p)`` from a channel file; ``p`` is ``None`` when absent."""
    return channel_from_json(read_json(path), str(path))
