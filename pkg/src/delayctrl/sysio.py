"""System-file parsing and serialization (JSON)."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .coefficients import SystemSpec
from .delays import DelayBasis, DelayVector, make_delay_vector
from .errors import DimensionMismatch, SchemaError
from .scalars import EXACT, NUMERIC, matrix_from_data, parse_rational, scalar_to_json
from .signals import SignalFunction


def _require(cond: bool, message: str):
    if not cond:
        raise SchemaError(message)


def _parse_basis_value(raw):
    """Strings parse as exact rationals; bare numbers stay numeric floats."""
    if isinstance(raw, str):
        return parse_rational(raw)
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return raw
    raise SchemaError(f"invalid basis value {raw!r}")


def parse_delays(data: dict) -> DelayVector:
    _require(isinstance(data, dict), "delays must be an object")
    _require("basis" in data and "M" in data, "delays need 'basis' and 'M'")
    values = [_parse_basis_value(v) for v in data["basis"]]
    basis = DelayBasis.of(*values)
    return make_delay_vector(basis, data["M"])


def parse_signal(data: dict, dim: int, mode: str) -> SignalFunction:
    _require(isinstance(data, dict), "signal must be an object")
    if "constant" in data:
        _require("domain" in data, "constant signal needs 'domain'")
        value = matrix_from_data([data["constant"]], mode)[0]
        _require(len(value) == dim, f"signal value must have {dim} components")
        dom = [_parse_basis_value(x) for x in data["domain"]]
        return SignalFunction.constant(value, (dom[0], dom[1]), mode=mode)
    _require("breakpoints" in data and "coefficients" in data,
             "signal needs 'breakpoints' and 'coefficients' (or 'constant')")
    breaks = [_parse_basis_value(b) for b in data["breakpoints"]]
    coeffs = []
    for seg in data["coefficients"]:
        _require(len(seg) == dim, f"each segment needs {dim} component polynomials")
        coeffs.append([[_entry(mode, c) for c in comp] for comp in seg])
    return SignalFunction.piecewise(breaks, coeffs, mode=mode)


def _entry(mode, raw):
    from .scalars import parse_scalar
    return parse_scalar(raw, mode)


def parse_system(source) -> tuple[SystemSpec, DelayVector, dict]:
    """Load a system file: spec, delays, and any declared signals.

    ``source`` is a path or an already-decoded dict.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON in {source}: {exc}") from exc
    else:
        data = source
    _require(isinstance(data, dict), "system file must be a JSON object")
    for field in ("A", "B", "delays"):
        _require(field in data, f"missing required field {field!r}")
    mode = data.get("scalar_mode", NUMERIC)
    _require(mode in (EXACT, NUMERIC), f"invalid scalar_mode {mode!r}")
    sys = SystemSpec.create(data["A"], data["B"], scalar_mode=mode)
    if "d" in data:
        _require(data["d"] == sys.d, "declared d does not match B")
    if "m" in data:
        _require(data["m"] == sys.m, "declared m does not match B")
    if "N" in data:
        _require(data["N"] == sys.N, "declared N does not match A")
    lam = parse_delays(data["delays"])
    if lam.N != sys.N:
        raise DimensionMismatch(
            f"delays declare {lam.N} components but the system has {sys.N}")
    signals = {}
    for name, dim in (("x0", sys.d), ("x1", sys.d), ("u", sys.m)):
        if name in data.get("signals", {}):
            signals[name] = parse_signal(data["signals"][name], dim, mode)
    return sys, lam, signals


def delays_to_json(lam: DelayVector) -> dict:
    basis = []
    for v, e in zip(lam.basis.values, lam.basis.exact):
        basis.append(str(e) if e is not None else v)
    return {"basis": basis, "M": [list(row) for row in lam.M]}


def system_to_json(sys: SystemSpec, lam: DelayVector, signals: dict | None = None
                   ) -> dict:
    out = {
        "d": sys.d, "m": sys.m, "N": sys.N,
        "scalar_mode": sys.scalar_mode,
        "A": [[[scalar_to_json(x) for x in row] for row in a] for a in sys.A],
        "B": [[scalar_to_json(x) for x in row] for row in sys.B],
        "delays": delays_to_json(lam),
    }
    if signals:
        out["signals"] = {name: sig.to_json() for name, sig in signals.items()}
    return out
