"""JSON schemas shared by fixture files, reports and the CLI."""

import json
import os
from typing import Any, Dict

import numpy as np

from ..exceptions import ArgumentError


def operator_to_json(A: np.ndarray) -> Dict[str, Any]:
    """Row-major ``{"dim": d, "entries": [[re, im], ...]}``."""
    op = np.asarray(A, dtype=np.complex128)
    flat = op.reshape(-1)
    return {
        "dim": int(op.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def operator_from_json(data: Dict[str, Any]) -> np.ndarray:
    try:
        dim = int(data["dim"])
        entries = np.asarray(data["entries"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise ArgumentError(f"malformed operator JSON: {e}") from e
    if dim < 1 or entries.shape != (dim * dim, 2):
        raise ArgumentError(
            f"operator JSON expects {dim * dim} [re, im] pairs, got {entries.shape}"
        )
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(dim, dim)


def _default(obj: Any) -> Any:
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def write_json(path: str, obj: Any) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(dumps(obj))


def read_json(path: str) -> Any:
    with open(path, "r") as f:
        return json.load(f)
