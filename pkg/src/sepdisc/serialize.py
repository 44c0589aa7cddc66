"""Deterministic JSON for matrices, states and measurements.

Floats are written with 17 significant digits so binary doubles survive a
round trip exactly, and object keys are sorted so output is byte-stable.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .effects import Effect, Measurement
from .linalg import HermitianMatrix
from .states import ProductMixedState, PureProductState, PureState, canonical_state


class FormatError(ValueError):
    pass


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite value {x}")
    if x == 0:
        return "0"
    return f"{x:.17g}"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def matrix_to_json(x: HermitianMatrix) -> dict:
    return {"re": x.data.real.tolist(), "im": x.data.imag.tolist()}


def matrix_from_json(obj, dims=None) -> HermitianMatrix:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix object: {exc}") from exc
    if re.shape != im.shape:
        raise FormatError("re and im parts have different shapes")
    try:
        return HermitianMatrix(re + 1j * im, dims)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _infer_dims(d: int):
    r = math.isqrt(d)
    if r * r != d:
        raise FormatError(f"cannot infer bipartite dims for size {d}; add a 'dims' field")
    return (r, r)


def measurement_to_json(m: Measurement) -> dict:
    effects = []
    for e in m.effects:
        entry = {"matrix": matrix_to_json(e.matrix)}
        if e.certificate is not None:
            entry["certificate"] = {"T": matrix_to_json(e.certificate[0]), "Tprime": matrix_to_json(e.certificate[1])}
        effects.append(entry)
    out = {"effects": effects}
    if m.dims is not None:
        out["dims"] = list(m.dims)
    return out


def measurement_from_json(obj) -> Measurement:
    try:
        raw = obj["effects"]
    except (KeyError, TypeError) as exc:
        raise FormatError("measurement needs an 'effects' list") from exc
    if not isinstance(raw, list) or not raw:
        raise FormatError("'effects' must be a nonempty list")
    dims = tuple(obj["dims"]) if "dims" in obj else None
    effects = []
    for entry in raw:
        if "matrix" not in entry:
            raise FormatError("effect without 'matrix'")
        d = dims or _infer_dims(len(entry["matrix"]["re"]))
        matrix = matrix_from_json(entry["matrix"], d)
        cert = None
        if "certificate" in entry:
            c = entry["certificate"]
            cert = (matrix_from_json(c["T"], d), matrix_from_json(c["Tprime"], d))
        effects.append(Effect(matrix, cert))
    try:
        return Measurement(effects)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _vector(obj) -> PureState:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad vector object: {exc}") from exc
    if re.ndim != 1 or re.shape != im.shape or re.size == 0:
        raise FormatError("vector parts must be equal-length nonempty lists")
    v = re + 1j * im
    if not np.all(np.isfinite(v)) or np.linalg.norm(v) == 0:
        raise FormatError("vector must be finite and nonzero")
    return PureState.normalized(v)


def state_to_json(s: PureProductState) -> dict:
    return {
        "a": {"re": s.a.amplitudes.real.tolist(), "im": s.a.amplitudes.imag.tolist()},
        "b": {"re": s.b.amplitudes.real.tolist(), "im": s.b.amplitudes.imag.tolist()},
    }


def state_from_json(obj):
    """Parse one of the three state forms.

    ``{"a": vec, "b": vec}`` gives a product state (vectors are normalized);
    ``{"canonical": {"alpha1", "alpha2"}}`` the state
    ``(sqrt(1-a1), sqrt(a1)) ⊗ (sqrt(1-a2), sqrt(a2))``; ``{"mixed": {...}}``
    a :class:`ProductMixedState` pair.
    """
    if not isinstance(obj, dict):
        raise FormatError("state must be a JSON object")
    try:
        if "canonical" in obj:
            c = obj["canonical"]
            a1, a2 = float(c["alpha1"]), float(c["alpha2"])
            if not (0 <= a1 <= 1 and 0 <= a2 <= 1):
                raise FormatError("canonical alphas must lie in [0, 1]")
            return canonical_state(a1, a2)
        if "mixed" in obj:
            m = obj["mixed"]
            a1, a2 = float(m["alpha1"]), float(m["alpha2"])
            b1 = float(m.get("beta1", math.sqrt(a1 * (1 - a1))))
            b2 = float(m.get("beta2", math.sqrt(a2 * (1 - a2))))
            return ProductMixedState(float(m.get("p1", 0.0)), float(m.get("p2", 0.0)), a1, a2, b1, b2)
        if "a" in obj and "b" in obj:
            return PureProductState(_vector(obj["a"]), _vector(obj["b"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad state object: {exc}") from exc
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    raise FormatError("state needs 'a'/'b', 'canonical' or 'mixed'")
