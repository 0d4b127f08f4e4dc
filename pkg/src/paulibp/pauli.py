"""Pauli strings and their binary representations.

Two binary encodings of an n-qubit Pauli operator are used throughout
(phases are dropped everywhere; only the GF(2) image matters for syndromes
and logical-failure checks):

* symplectic: a 2n-bit vector ``(e_x | e_z)`` with per-qubit mapping
  I -> (0,0), X -> (1,0), Z -> (0,1), Y -> (1,1);
* decoupled: a 3n-bit vector ``(e_x' | e_z' | e_y')`` with per-qubit mapping
  I -> (0,0,0), X -> (1,0,0), Z -> (0,1,0), Y -> (0,0,1).

The two are related by ``e_x = e_x' ^ e_y'`` and ``e_z = e_z' ^ e_y'``; the
decoupled image of an actual Pauli string is one-hot per qubit (at most one
of the three bits set), but arbitrary 3n-bit vectors are accepted by the
conversion back (multiple set bits read as a Pauli product, phase dropped).

Bit vectors are plain ``numpy`` uint8 arrays of 0/1 values.
"""

from __future__ import annotations

import numpy as np

from paulibp.gf2 import BitMatrix

_VALID = frozenset("IXYZ")

# Character codes chosen so x-bit = code & 1 and z-bit = code >> 1.
_CODE_OF_CHAR = np.zeros(128, dtype=np.uint8)
_CODE_OF_CHAR[ord("I")] = 0
_CODE_OF_CHAR[ord("X")] = 1
_CODE_OF_CHAR[ord("Z")] = 2
_CODE_OF_CHAR[ord("Y")] = 3
_CHAR_OF_CODE = np.frombuffer(b"IXZY", dtype=np.uint8)


class PauliString:
    """An n-qubit Pauli word over {I, X, Y, Z}, phase ignored."""

    __slots__ = ("ops",)

    def __init__(self, ops: str):
        if not set(ops) <= _VALID:
            bad = sorted(set(ops) - _VALID)
            raise ValueError(f"invalid Pauli characters: {bad}")
        self.ops = ops

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "PauliString":
        """Build from an integer array with 0=I, 1=X, 2=Z, 3=Y."""
        chars = _CHAR_OF_CODE[np.asarray(codes, dtype=np.uint8)]
        return cls(chars.tobytes().decode("ascii"))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls("I" * n)

    def to_codes(self) -> np.ndarray:
        return _CODE_OF_CHAR[np.frombuffer(self.ops.encode("ascii"), dtype=np.uint8)]

    def __len__(self) -> int:
        return len(self.ops)

    def __getitem__(self, i):
        return self.ops[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliString) and self.ops == other.ops

    def __hash__(self) -> int:
        return hash(self.ops)

    def __mul__(self, other: "PauliString") -> "PauliString":
        """Operator product with the phase dropped (bitwise XOR of images)."""
        if len(other) != len(self):
            raise ValueError("length mismatch")
        v = pauli_to_symplectic(self) ^ pauli_to_symplectic(other)
        return symplectic_to_pauli(v)

    def weight(self) -> int:
        return sum(c != "I" for c in self.ops)

    def __repr__(self) -> str:
        return f"PauliString({self.ops!r})"


def pauli_to_symplectic(p: PauliString) -> np.ndarray:
    """Map a Pauli string to its 2n-bit symplectic vector (e_x | e_z)."""
    codes = p.to_codes()
    return np.concatenate([codes & 1, codes >> 1]).astype(np.uint8)


def pauli_to_decoupled(p: PauliString) -> np.ndarray:
    """Map a Pauli string to its 3n-bit decoupled vector (e_x' | e_z' | e_y').

    The output is one-hot per qubit: at most one of positions
    (i, i+n, i+2n) is set.
    """
    codes = p.to_codes()
    n = len(codes)
    out = np.zeros(3 * n, dtype=np.uint8)
    out[:n] = codes == 1
    out[n : 2 * n] = codes == 2
    out[2 * n :] = codes == 3
    return out


def decoupled_to_symplectic(d: np.ndarray) -> np.ndarray:
    """Collapse a 3n-bit decoupled vector to the 2n-bit symplectic vector.

    Defined for *arbitrary* 3n-bit inputs, including ones that violate the
    one-hot-per-qubit constraint (decoder outputs can): multiple set bits on
    a qubit are read as a Pauli product with the phase dropped, which is
    exactly the XOR law e_x = e_x' ^ e_y', e_z = e_z' ^ e_y'.
    """
    d = np.asarray(d, dtype=np.uint8)
    if d.shape[-1] % 3:
        raise ValueError("decoupled vector length must be a multiple of 3")
    n = d.shape[-1] // 3
    ex = d[..., :n] ^ d[..., 2 * n :]
    ez = d[..., n : 2 * n] ^ d[..., 2 * n :]
    return np.concatenate([ex, ez], axis=-1)


def symplectic_to_decoupled(v: np.ndarray) -> np.ndarray:
    """Expand a 2n-bit symplectic vector to its one-hot 3n-bit decoupled form.

    Exact inverse of :func:`decoupled_to_symplectic` on one-hot vectors:
    the round trip symplectic -> decoupled -> symplectic is the identity.
    """
    v = np.asarray(v, dtype=np.uint8)
    if v.shape[-1] % 2:
        raise ValueError("symplectic vector length must be even")
    n = v.shape[-1] // 2
    ex, ez = v[..., :n], v[..., n:]
    ey_ = ex & ez
    ex_ = ex & (1 - ez)
    ez_ = ez & (1 - ex)
    return np.concatenate([ex_, ez_, ey_], axis=-1)


def symplectic_to_pauli(v: np.ndarray) -> PauliString:
    """Read a 2n-bit symplectic vector back as a Pauli string."""
    v = np.asarray(v, dtype=np.uint8)
    if v.ndim != 1 or v.shape[0] % 2:
        raise ValueError("expected a flat vector of even length")
    n = v.shape[0] // 2
    codes = v[:n] + 2 * v[n:]
    return PauliString.from_codes(codes)


def syndrome_symplectic(H: BitMatrix | np.ndarray, e: np.ndarray) -> np.ndarray:
    """Syndrome of a symplectic error vector against H stored as (H_x | H_z).

    A generator row fires iff it anticommutes with the error, i.e.
    s = (H_x . e_z + H_z . e_x) mod 2 — the stored matrix is multiplied
    against the half-swapped error (e_z | e_x).
    """
    Hd = H.to_dense() if isinstance(H, BitMatrix) else np.asarray(H, dtype=np.uint8)
    e = np.asarray(e, dtype=np.uint8)
    if Hd.shape[1] % 2 or Hd.shape[1] != e.shape[-1]:
        raise ValueError(f"dimension mismatch: H has {Hd.shape[1]} columns, error has {e.shape[-1]} bits")
    n = Hd.shape[1] // 2
    swapped = np.concatenate([e[..., n:], e[..., :n]], axis=-1)
    return (swapped @ Hd.T % 2).astype(np.uint8) if e.ndim > 1 else (Hd @ swapped % 2).astype(np.uint8)


def syndrome_decoupled(H_d: BitMatrix | np.ndarray, e: np.ndarray) -> np.ndarray:
    """Syndrome of a decoupled error vector: s = (H_d . e) mod 2.

    Agrees with :func:`syndrome_symplectic` on the collapsed error for every
    3n-bit input, one-hot or not.
    """
    Hd = H_d.to_dense() if isinstance(H_d, BitMatrix) else np.asarray(H_d, dtype=np.uint8)
    e = np.asarray(e, dtype=np.uint8)
    if Hd.shape[1] % 3 or Hd.shape[1] != e.shape[-1]:
        raise ValueError(f"dimension mismatch: H_d has {Hd.shape[1]} columns, error has {e.shape[-1]} bits")
    return (e @ Hd.T % 2).astype(np.uint8) if e.ndim > 1 else (Hd @ e % 2).astype(np.uint8)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the two Pauli strings commute (symplectic product is even)."""
    if len(p) != len(q):
        raise ValueError("length mismatch")
    return symplectic_product(pauli_to_symplectic(p), pauli_to_symplectic(q)) == 0


def symplectic_product(u: np.ndarray, v: np.ndarray) -> int:
    """GF(2) symplectic inner product u_x.v_z + u_z.v_x of two 2n-bit vectors."""
    n = u.shape[-1] // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)
