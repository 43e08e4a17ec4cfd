"""JSON files for operators, states, matrices and ansatz specs.

Floats are written with 17 significant digits so every double round-trips.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .measure import AnsatzSpec
from .pauli import PauliError, WeightedPauliSum, parse


class FormatError(ValueError):
    """A file was read but its content does not match the expected schema."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot write non-finite number {x}")
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj: Any) -> str:
    """Compact JSON with 17-significant-digit floats."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(obj)


def _load(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from None


def _write(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


# -- Hamiltonians --------------------------------------------------------------


def hamiltonian_to_json(H: WeightedPauliSum) -> dict:
    out: dict = {"m": H.m, "terms": [{"pauli": str(p), "coeff": c} for c, p in H.terms]}
    if H.identity:
        out["identity"] = H.identity
    return out


def hamiltonian_from_json(data: Any) -> WeightedPauliSum:
    try:
        m = data["m"]
        terms = data["terms"]
        identity = float(data.get("identity", 0.0))
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise FormatError(f"'m' must be a positive integer, got {m!r}")
        parsed = [(float(t["coeff"]), parse(t["pauli"], m)) for t in terms]
        return WeightedPauliSum(m, parsed, identity)
    except FormatError:
        raise
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed Hamiltonian: {exc!r}") from None
    except (PauliError, ValueError) as exc:
        raise FormatError(f"malformed Hamiltonian: {exc}") from None


def read_hamiltonian(path: str | Path) -> WeightedPauliSum:
    return hamiltonian_from_json(_load(path))


def write_hamiltonian(path: str | Path, H: WeightedPauliSum) -> None:
    _write(path, hamiltonian_to_json(H))


# -- complex arrays ------------------------------------------------------------


def _pairs(a: np.ndarray) -> list:
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _from_pairs(data: Any, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise FormatError("expected nested [re, im] pairs") from None
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise FormatError(f"expected an array of [re, im] pairs with {ndim} index dimension(s)")
    return arr[..., 0] + 1j * arr[..., 1]


def read_state(path: str | Path) -> np.ndarray:
    psi = _from_pairs(_load(path), 1)
    n = psi.shape[0]
    if n < 2 or n & (n - 1):
        raise FormatError(f"state length {n} is not a power of two")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise FormatError(f"state is not normalized (norm {norm})")
    return psi


def write_state(path: str | Path, psi: np.ndarray) -> None:
    _write(path, _pairs(np.asarray(psi, dtype=complex)))


def read_matrix(path: str | Path) -> np.ndarray:
    M = _from_pairs(_load(path), 2)
    if M.shape[0] != M.shape[1]:
        raise FormatError(f"matrix shape {M.shape} is not square")
    return M


def write_matrix(path: str | Path, M: np.ndarray) -> None:
    _write(path, _pairs(np.asarray(M, dtype=complex)))


# -- ansatz --------------------------------------------------------------------


def read_ansatz(path: str | Path) -> AnsatzSpec:
    data = _load(path)
    try:
        return AnsatzSpec(int(data["reps"]), tuple(float(a) for a in data["angles"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed ansatz spec: {exc!r}") from None


def write_ansatz(path: str | Path, spec: AnsatzSpec) -> None:
    _write(path, {"reps": spec.reps, "angles": [float(a) for a in spec.angles]})
