"""Vector-valued signals: piecewise polynomials or black-box evaluators."""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction

import numpy as np

from . import linalg
from .scalars import EXACT, NUMERIC

_BREAK_TOL = 1e-12


class SignalFunction:
    """A function on an interval, either piecewise-polynomial or a callable.

    Piecewise segments are polynomials in the local variable ``t - b_i`` with
    ascending coefficients; a query colliding with a breakpoint within a tiny
    tolerance resolves to the left segment (domains are right-open).
    """

    def __init__(self, domain, dim, evaluator=None, breakpoints=None,
                 coefficients=None, mode=NUMERIC):
        self.domain = (domain[0], domain[1])
        self.dim = int(dim)
        self.mode = mode
        self._evaluator = evaluator
        self._breaks = None
        self._coeffs = None
        if evaluator is None:
            if breakpoints is None or coefficients is None:
                raise ValueError("need either an evaluator or piecewise data")
            if len(coefficients) != len(breakpoints) - 1:
                raise ValueError("need one coefficient set per segment")
            if any(len(seg) != dim for seg in coefficients):
                raise ValueError("each segment needs one coefficient list per component")
            self._breaks = list(breakpoints)
            self._breaks_float = [float(b) for b in breakpoints]
            self._coeffs = [[list(c) for c in seg] for seg in coefficients]

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim, domain, mode=NUMERIC):
        return cls.constant(linalg.zero_vector(dim, mode), domain, mode)

    @classmethod
    def constant(cls, value, domain, mode=NUMERIC):
        value = np.asarray(value)
        return cls(domain, len(value), breakpoints=[domain[0], domain[1]],
                   coefficients=[[[v] for v in value]], mode=mode)

    @classmethod
    def from_callable(cls, func, domain, dim, mode=NUMERIC):
        return cls(domain, dim, evaluator=func, mode=mode)

    @classmethod
    def piecewise(cls, breakpoints, coefficients, mode=NUMERIC):
        return cls((breakpoints[0], breakpoints[-1]), len(coefficients[0]),
                   breakpoints=breakpoints, coefficients=coefficients, mode=mode)

    # -- evaluation --------------------------------------------------------

    def __call__(self, t):
        if self._evaluator is not None:
            return np.asarray(self._evaluator(t))
        tf = float(t)
        idx = bisect_right(self._breaks_float, tf) - 1
        # collisions within tolerance go to the left segment
        if 0 < idx <= len(self._coeffs) and abs(tf - self._breaks_float[idx]) <= _BREAK_TOL:
            idx -= 1
        idx = min(max(idx, 0), len(self._coeffs) - 1)
        local = self._local_offset(t, idx)
        out = [self._horner(comp, local) for comp in self._coeffs[idx]]
        if self.mode == EXACT:
            return np.array(out, dtype=object)
        return np.array([complex(v) for v in out], dtype=complex)

    def _local_offset(self, t, idx):
        b = self._breaks[idx]
        if isinstance(t, Fraction) and isinstance(b, (int, Fraction)):
            return t - Fraction(b)
        return float(t) - float(b)

    @staticmethod
    def _horner(coeffs, x):
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * x + c
        return acc

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        from .scalars import scalar_to_json
        if self._coeffs is None:
            raise ValueError("black-box signals cannot be serialized")
        return {
            "breakpoints": [str(b) if isinstance(b, Fraction) else b
                            for b in self._breaks],
            "coefficients": [[[scalar_to_json(c) for c in comp] for comp in seg]
                             for seg in self._coeffs],
        }
