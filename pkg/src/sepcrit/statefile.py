"""JSON state files.

Schema::

    {"dims": [d_1, ..., d_n],
     "re": [... d*d reals, row-major ...],
     "im": [... d*d reals, row-major ...]}

Row-major here refers to the flattening of the matrix for storage and is
unrelated to the column-stacking used by ``vec``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .qmat import DensityMatrix, validate_density


def state_to_dict(rho: DensityMatrix) -> dict:
    flat = rho.mat.reshape(-1)
    return {
        "dims": list(rho.dims),
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }


def _matrix_from_parts(re, im, what: str) -> np.ndarray:
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    if re.ndim != 1 or re.shape != im.shape:
        raise ValueError(f"{what}: 're' and 'im' must be flat arrays of equal length")
    d = int(round(np.sqrt(re.size)))
    if d * d != re.size:
        raise ValueError(f"{what}: array length {re.size} is not a perfect square")
    return (re + 1j * im).reshape(d, d)


def state_from_dict(doc: dict, validate: bool = True) -> DensityMatrix:
    try:
        dims = [int(d) for d in doc["dims"]]
        re, im = doc["re"], doc["im"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"state file must contain 'dims', 're' and 'im' ({exc})") from None
    d = int(np.prod(dims))
    if len(re) != d * d or len(im) != d * d:
        raise ValueError(f"state file: expected {d * d} entries for dims {dims}, got {len(re)} / {len(im)}")
    mat = _matrix_from_parts(re, im, "state file")
    return validate_density(mat, dims) if validate else DensityMatrix(mat, tuple(dims))


def dumps_state(rho: DensityMatrix) -> str:
    return json.dumps(state_to_dict(rho)) + "\n"


def save_state(rho: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps_state(rho))


def load_state(path: str | Path, validate: bool = True) -> DensityMatrix:
    return state_from_dict(json.loads(Path(path).read_text()), validate=validate)


def load_g_matrix(path: str | Path) -> np.ndarray:
    """Explicit G stored as ``{"re": [...], "im": [...]}``, row-major, ell*ell entries."""
    doc = json.loads(Path(path).read_text())
    try:
        return _matrix_from_parts(doc["re"], doc.get("im", [0.0] * len(doc["re"])), "G file")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"G file must contain 're' (and optionally 'im') ({exc})") from None
