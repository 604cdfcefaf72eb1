"""JSON codec for states and ensembles.

A state file is ``{"dim": n, "re": [[...]], "im": [[...]]}`` with row-major
real and imaginary parts. An ensemble file is
``{"priors": [...], "states": [state, ...]}``. Python's ``json`` module
writes floats with ``repr``, so finite doubles round-trip bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ._validation import ValidationError, check_density

__all__ = [
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
    "ensemble_to_dict",
    "ensemble_from_dict",
    "load_ensemble",
    "save_ensemble",
]


def state_to_dict(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {
        "dim": int(rho.shape[0]),
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }


def _field(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field '{key}'")
    return obj[key]


def state_from_dict(obj, where: str = "state", validate: bool = True) -> np.ndarray:
    """Decode a state object, validating shape and (optionally) density-matrix constraints."""
    dim = _field(obj, "dim", where)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"{where}: field 'dim' must be a positive integer")
    parts = []
    for key in ("re", "im"):
        raw = _field(obj, key, where)
        try:
            arr = np.array(raw, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{where}: field '{key}' is not a numeric matrix") from exc
        if arr.shape != (dim, dim):
            raise ValidationError(f"{where}: field '{key}' must have shape ({dim}, {dim}), got {arr.shape}")
        parts.append(arr)
    rho = parts[0] + 1j * parts[1]
    if validate:
        try:
            check_density(rho, where)
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    return rho


def save_state(rho, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho)))


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from exc


def load_state(path, validate: bool = True) -> np.ndarray:
    return state_from_dict(_read_json(path), where=str(path), validate=validate)


def ensemble_to_dict(priors, states) -> dict:
    return {
        "priors": [float(p) for p in priors],
        "states": [state_to_dict(s) for s in states],
    }


def ensemble_from_dict(obj, where: str = "ensemble"):
    priors = _field(obj, "priors", where)
    states = _field(obj, "states", where)
    if not isinstance(priors, list) or not isinstance(states, list) or len(priors) != len(states):
        raise ValidationError(f"{where}: 'priors' and 'states' must be lists of equal length")
    try:
        priors = [float(p) for p in priors]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: field 'priors' must hold numbers") from exc
    decoded = [state_from_dict(s, f"{where}: states[{i}]") for i, s in enumerate(states)]
    return priors, decoded


def save_ensemble(priors, states, path) -> None:
    Path(path).write_text(json.dumps(ensemble_to_dict(priors, states)))


def load_ensemble(path):
    return ensemble_from_dict(_read_json(path), where=str(path))
