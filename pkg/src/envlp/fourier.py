"""Real trigonometric polynomials: the family the envelopes are drawn from.

A degree-``L`` envelope is stored through its real parametrization

    f(t) = b0 + sum_{k=1..L} 2*(b_re[k]*cos(2*pi*k*t) - b_im[k]*sin(2*pi*k*t))

which is the real form of a conjugate-symmetric complex coefficient set.  The
canonical parameter vector layout ``[b0, b_re[1..L], b_im[1..L]]`` (length
``2L+1``) is used by every matrix row and serialized vector in the package.

All objects are immutable and all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetTooLarge

TWO_PI = 2.0 * np.pi

# Direct per-harmonic cos/sin evaluation stays accurate for small degrees;
# recurrences are not worth the error near active constraints.
MAX_HARMONICS = 64


@dataclass(frozen=True, eq=False)
class FourierEnvelope:
    """Bandlimited real trigonometric polynomial of degree ``L``.

    Attributes
    ----------
    L : int
        Harmonic budget; the polynomial has ``2L+1`` real degrees of freedom.
    b0 : float
        DC coefficient (also the mean value over one period).
    b_re, b_im : np.ndarray
        Real and imaginary parts of the positive-frequency coefficients,
        index ``k-1`` holding harmonic ``k``; both have length ``L``.
    """

    L: int
    b0: float
    b_re: np.ndarray
    b_im: np.ndarray

    def __post_init__(self):
        L = int(self.L)
        if L < 0:
            raise ValueError(f"harmonic budget must be nonnegative, got {L}")
        if L > MAX_HARMONICS:
            raise BudgetTooLarge(f"harmonic budget {L} exceeds maximum {MAX_HARMONICS}")
        b_re = np.array(self.b_re, dtype=float).reshape(-1)
        b_im = np.array(self.b_im, dtype=float).reshape(-1)
        if b_re.shape != (L,) or b_im.shape != (L,):
            raise ValueError(
                f"coefficient arrays must have length L={L}, "
                f"got {b_re.shape[0]} and {b_im.shape[0]}"
            )
        if not (np.isfinite(self.b0) and np.all(np.isfinite(b_re)) and np.all(np.isfinite(b_im))):
            raise ValueError("coefficients must be finite")
        b_re.setflags(write=False)
        b_im.setflags(write=False)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "b0", float(self.b0))
        object.__setattr__(self, "b_re", b_re)
        object.__setattr__(self, "b_im", b_im)

    @classmethod
    def from_params(cls, L: int, params: np.ndarray) -> "FourierEnvelope":
        """Build from a parameter vector in the canonical layout."""
        params = np.asarray(params, dtype=float).reshape(-1)
        if params.shape != (2 * L + 1,):
            raise ValueError(f"expected {2 * L + 1} parameters, got {params.shape[0]}")
        return cls(L=L, b0=params[0], b_re=params[1 : L + 1], b_im=params[L + 1 :])

    def params(self) -> np.ndarray:
        """Parameter vector ``[b0, b_re..., b_im...]`` (length ``2L+1``)."""
        return np.concatenate(([self.b0], self.b_re, self.b_im))

    def evaluate(self, t):
        """Value of the polynomial at phase ``t`` (scalar or array, period 1)."""
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        if self.L == 0:
            out = np.full(t_arr.shape, self.b0)
        else:
            k = np.arange(1, self.L + 1, dtype=float)
            ang = TWO_PI * np.multiply.outer(t_arr, k)
            out = self.b0 + 2.0 * (np.cos(ang) @ self.b_re - np.sin(ang) @ self.b_im)
        return float(out) if scalar else out

    def energy(self) -> float:
        """Sum of squared complex coefficients, equal to the mean-square value
        of the polynomial over one period."""
        return float(self.b0 ** 2 + 2.0 * (self.b_re @ self.b_re + self.b_im @ self.b_im))

    def derivative_bound(self) -> float:
        """Uniform bound on the slope, computed from the realized coefficients.

        Equals ``2*pi * sum_k 2*k*|b[k]|`` and is tight when a single harmonic
        dominates.  Always at most the a-priori bound at equal energy.
        """
        if self.L == 0:
            return 0.0
        k = np.arange(1, self.L + 1, dtype=float)
        return float(2.0 * TWO_PI * np.sum(k * np.hypot(self.b_re, self.b_im)))

    def to_dict(self) -> dict:
        """Serialized form used in result JSON."""
        return {
            "L": self.L,
            "b0": self.b0,
            "b_re": [float(v) for v in self.b_re],
            "b_im": [float(v) for v in self.b_im],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FourierEnvelope":
        L = int(payload["L"])
        b_re = np.asarray(payload["b_re"], dtype=float)
        b_im = np.asarray(payload["b_im"], dtype=float)
        if b_re.shape != (L,) or b_im.shape != (L,):
            raise ValueError(
                f"envelope payload inconsistent: L={L} but coefficient arrays "
                f"have lengths {b_re.shape[0]} and {b_im.shape[0]}"
            )
        return cls(L=L, b0=float(payload["b0"]), b_re=b_re, b_im=b_im)


def phasor_row(L: int, t: float) -> np.ndarray:
    """Constraint row such that ``row @ params`` equals the polynomial at ``t``.

    Layout matches the canonical parameter vector:
    ``[1, 2cos(2*pi*t), ..., 2cos(2*pi*L*t), -2sin(2*pi*t), ..., -2sin(2*pi*L*t)]``.
    """
    if L < 0:
        raise ValueError(f"harmonic budget must be nonnegative, got {L}")
    row = np.empty(2 * L + 1)
    row[0] = 1.0
    if L > 0:
        ang = TWO_PI * float(t) * np.arange(1, L + 1, dtype=float)
        row[1 : L + 1] = 2.0 * np.cos(ang)
        row[L + 1 :] = -2.0 * np.sin(ang)
    return row


def phasor_matrix(L: int, t: np.ndarray) -> np.ndarray:
    """Stack of :func:`phasor_row` values for an array of phases, one per row."""
    if L < 0:
        raise ValueError(f"harmonic budget must be nonnegative, got {L}")
    t = np.asarray(t, dtype=float).reshape(-1)
    rows = np.empty((t.shape[0], 2 * L + 1))
    rows[:, 0] = 1.0
    if L > 0:
        ang = TWO_PI * np.multiply.outer(t, np.arange(1, L + 1, dtype=float))
        rows[:, 1 : L + 1] = 2.0 * np.cos(ang)
        rows[:, L + 1 :] = -2.0 * np.sin(ang)
    return rows


def apriori_derivative_bound(L: int, sup_norm: float) -> float:
    """Slope bound available before solving: ``2*pi*L*sqrt(2L+1)*sup_norm``.

    Valid for any degree-``L`` polynomial whose coefficient energy is at most
    ``sup_norm**2``, which holds for every envelope of a signal bounded by
    ``sup_norm`` (the constant envelope at that height is always feasible).
    The ``sqrt(2L+1)`` factor comes from Cauchy-Schwarz on the coefficient sum.
    """
    if L < 0:
        raise ValueError(f"harmonic budget must be nonnegative, got {L}")
    if sup_norm < 0:
        raise ValueError(f"sup_norm must be nonnegative, got {sup_norm}")
    return float(TWO_PI * L * np.sqrt(2.0 * L + 1.0) * sup_norm)
