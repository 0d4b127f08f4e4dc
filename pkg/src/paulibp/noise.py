"""Independent single-qubit Pauli noise channels.

A channel is the triple (p_x, p_z, p_y) applied i.i.d. to every qubit.
Channel strings accepted everywhere a channel can be configured:

    "x:0.1"                 pure X flips
    "z:0.1"                 pure Z flips
    "y:0.1"                 pure Y flips
    "depol:0.1"             depolarizing, p_x = p_z = p_y = p/3
    "custom:0.01,0.02,0.03" explicit p_x, p_z, p_y
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit Pauli error probabilities; the identity gets the rest."""

    p_x: float
    p_z: float
    p_y: float

    def __post_init__(self):
        for name in ("p_x", "p_z", "p_y"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.p_x + self.p_z + self.p_y > 1.0:
            raise ValueError("p_x + p_z + p_y must not exceed 1")

    @property
    def total(self) -> float:
        return self.p_x + self.p_z + self.p_y

    @classmethod
    def parse(cls, text: str) -> "NoiseModel":
        """Build a NoiseModel from a channel string (see module docstring)."""
        kind, sep, arg = text.partition(":")
        kind = kind.strip().lower()
        if not sep:
            raise ValueError(f"channel {text!r} is missing ':<rate>'")
        if kind == "custom":
            parts = [float(x) for x in arg.split(",")]
            if len(parts) != 3:
                raise ValueError("custom channel needs exactly pX,pZ,pY")
            return cls(*parts)
        p = float(arg)
        if kind == "x":
            return cls(p, 0.0, 0.0)
        if kind == "z":
            return cls(0.0, p, 0.0)
        if kind == "y":
            return cls(0.0, 0.0, p)
        if kind == "depol":
            return cls(p / 3, p / 3, p / 3)
        raise ValueError(f"unknown channel kind {kind!r}")

    def with_total(self, p: float) -> "NoiseModel":
        """Same relative X/Z/Y mix, rescaled to total error rate p."""
        if self.total == 0.0:
            raise ValueError("cannot rescale a zero-rate channel")
        f = p / self.total
        return NoiseModel(self.p_x * f, self.p_z * f, self.p_y * f)

    def sample_error(self, n: int, rng: np.random.Generator, trials: int = 1) -> np.ndarray:
        """Sample errors in symplectic form, shape (trials, 2n) uint8.

        Each qubit independently draws I/X/Z/Y with probabilities
        (1 - p_x - p_z - p_y, p_x, p_z, p_y); X and Y set the first-half
        bit, Z and Y the second-half bit.
        """
        u = rng.random((trials, n))
        x_edge = self.p_x
        z_edge = x_edge + self.p_z
        y_edge = z_edge + self.p_y
        is_x = u < x_edge
        is_z = (u >= x_edge) & (u < z_edge)
        is_y = (u >= z_edge) & (u < y_edge)
        e = np.zeros((trials, 2 * n), dtype=np.uint8)
        e[:, :n] = is_x | is_y
        e[:, n:] = is_z | is_y
        return e

    def decoupled_priors(self, n: int) -> np.ndarray:
        """Length-3n prior vector (p_x blocks, then p_z, then p_y)."""
        out = np.empty(3 * n, dtype=np.float64)
        out[:n] = self.p_x
        out[n : 2 * n] = self.p_z
        out[2 * n :] = self.p_y
        return out

    def symplectic_priors(self, n: int) -> np.ndarray:
        """Length-2n marginal priors: P(X-part flips), then P(Z-part flips)."""
        out = np.empty(2 * n, dtype=np.float64)
        out[:n] = self.p_x + self.p_y
        out[n:] = self.p_z + self.p_y
        return out
