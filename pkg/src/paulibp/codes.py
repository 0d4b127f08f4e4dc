"""Stabilizer code constructions and logical-operator extraction.

Codes are built from generator lists (explicit Pauli words, the planar
surface-code family, or the rotated XZZX family) and validated eagerly:
independent pairwise-commuting generators, the decoupled parity-check matrix
identity H_d = (H_z | H_x | H_x ^ H_z), the per-qubit column-triple property
of H_d (each row touches 0 or 2 of a qubit's three columns), and a full
symplectically-paired logical basis. A code that fails any check never
constructs — every downstream statistic would be meaningless on it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from paulibp.gf2 import BitMatrix, row_reduce
from paulibp.pauli import (
    PauliString,
    pauli_to_symplectic,
    symplectic_to_pauli,
    syndrome_symplectic,
)


def build_decoupled_matrix(H: BitMatrix | np.ndarray) -> BitMatrix:
    """Decoupled parity-check matrix (H_z | H_x | H_x ^ H_z) of H = (H_x | H_z)."""
    dense = H.to_dense() if isinstance(H, BitMatrix) else np.asarray(H, dtype=np.uint8)
    if dense.shape[1] % 2:
        raise ValueError("symplectic matrix must have an even column count")
    n = dense.shape[1] // 2
    Hx, Hz = dense[:, :n], dense[:, n:]
    return BitMatrix(np.concatenate([Hz, Hx, Hx ^ Hz], axis=1))


def _rref_gf2(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) with pivot column list."""
    A = A.copy() % 2
    m, c = A.shape
    pivots: list[int] = []
    r = 0
    for col in range(c):
        if r >= m:
            break
        hot = np.flatnonzero(A[r:, col])
        if hot.size == 0:
            continue
        pr = r + int(hot[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        clear = A[:, col].astype(bool)
        clear[r] = False
        A[clear] ^= A[r]
        pivots.append(col)
        r += 1
    return A, pivots


def _nullspace_gf2(A: np.ndarray) -> list[np.ndarray]:
    """Basis of {v : A v = 0 (mod 2)}, one vector per non-pivot column."""
    R, pivots = _rref_gf2(np.asarray(A, dtype=np.uint8))
    c = A.shape[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(c):
        if free in pivot_set:
            continue
        v = np.zeros(c, dtype=np.uint8)
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = R[i, free]
        basis.append(v)
    return basis


def _swap_halves(dense: np.ndarray) -> np.ndarray:
    n = dense.shape[1] // 2
    return np.concatenate([dense[:, n:], dense[:, :n]], axis=1)


def _sp(u: np.ndarray, v: np.ndarray) -> int:
    n = u.shape[0] // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


class _XorBasis:
    """Greedy GF(2) elimination basis keyed by leading set bit."""

    def __init__(self):
        self.by_lead: dict[int, np.ndarray] = {}

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.copy()
        while True:
            nz = np.flatnonzero(v)
            if nz.size == 0:
                return v
            lead = int(nz[0])
            if lead not in self.by_lead:
                return v
            v ^= self.by_lead[lead]

    def add(self, v: np.ndarray) -> bool:
        """Insert v if independent of the basis; returns True when added."""
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        self.by_lead[int(nz[0])] = v
        return True


def extract_logicals(H: BitMatrix) -> list[PauliString]:
    """Logical operator basis of the code with parity checks H = (H_x | H_z).

    Computes the centralizer (kernel of the symplectic product against the
    generators), quotients out the generator row space, and symplectically
    pairs the 2k coset representatives so consecutive entries (X_l, Z_l)
    anticommute with each other and commute with everything else.
    """
    dense = H.to_dense()
    m, two_n = dense.shape
    n = two_n // 2
    if H.rank() != m:
        raise ValueError("rank deficiency: generators are not independent")
    k = n - m

    kernel = _nullspace_gf2(_swap_halves(dense))
    basis = _XorBasis()
    for row in dense:
        basis.add(row)
    reps: list[np.ndarray] = []
    for v in kernel:
        residue = basis.reduce(v)
        if residue.any():
            basis.add(residue)
            reps.append(residue)
    if len(reps) != 2 * k:
        raise ValueError(f"expected {2 * k} logical representatives, found {len(reps)}")

    paired: list[np.ndarray] = []
    pool = reps
    while pool:
        u = pool[0]
        rest = pool[1:]
        partner = next((idx for idx, w in enumerate(rest) if _sp(u, w) == 1), None)
        if partner is None:
            raise ValueError("degenerate symplectic form on the logical quotient")
        v = rest.pop(partner)
        pool = [w ^ (_sp(w, v) * u) ^ (_sp(w, u) * v) for w in rest]
        paired += [u, v]
    return [symplectic_to_pauli(v) for v in paired]


class StabilizerCode:
    """An [[n, k]] stabilizer code with both binary parity-check matrices.

    Attributes:
        n, k: qubit and logical-qubit counts (k = n - #generators).
        generators: the defining Pauli words.
        H: BitMatrix (n-k) x 2n, stored as (H_x | H_z).
        H_d: BitMatrix (n-k) x 3n, the decoupled matrix (H_z | H_x | H_x^H_z).
        logicals: 2k Pauli words, consecutive pairs (X_l, Z_l).
    """

    __slots__ = ("n", "k", "generators", "H", "H_d", "logicals", "_sympl_decode")

    def __init__(self, generators: Sequence[PauliString]):
        gens = tuple(generators)
        if not gens:
            raise ValueError("a code needs at least one generator")
        n = len(gens[0])
        if any(len(g) != n for g in gens):
            raise ValueError("generators must act on the same number of qubits")
        m = len(gens)
        if m >= n:
            raise ValueError(f"{m} generators on {n} qubits leave no logical qubit")

        dense = np.stack([pauli_to_symplectic(g) for g in gens])
        Hx, Hz = dense[:, :n], dense[:, n:]
        comm = (Hx @ Hz.T + Hz @ Hx.T) % 2
        if comm.any():
            a, b = map(int, np.argwhere(comm)[0])
            raise ValueError(f"generators {a} and {b} anticommute")

        H = BitMatrix(dense)
        if H.rank() != m:
            raise ValueError("generators are linearly dependent")

        H_d = build_decoupled_matrix(H)
        Dd = H_d.to_dense()
        triple = Dd[:, :n].astype(np.int64) + Dd[:, n : 2 * n] + Dd[:, 2 * n :]
        if not np.isin(triple, (0, 2)).all():
            raise ValueError("decoupled matrix violates the 0-or-2 column-triple property")

        logicals = extract_logicals(H)
        for l in logicals:
            if syndrome_symplectic(H, pauli_to_symplectic(l)).any():
                raise ValueError("logical operator anticommutes with a generator")
        vecs = [pauli_to_symplectic(l) for l in logicals]
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                expected = 1 if (a // 2 == b // 2) else 0
                if _sp(vecs[a], vecs[b]) != expected:
                    raise ValueError("logical basis is not symplectically paired")

        self.n = n
        self.k = n - m
        self.generators = gens
        self.H = H
        self.H_d = H_d
        self.logicals = tuple(logicals)
        self._sympl_decode = BitMatrix(_swap_halves(dense))

    @property
    def symplectic_decoding_matrix(self) -> BitMatrix:
        """(H_z | H_x): the matrix whose product with (e_x | e_z) is the syndrome."""
        return self._sympl_decode

    @classmethod
    def from_generator_strings(cls, words: Iterable[str]) -> "StabilizerCode":
        return cls([PauliString(w.strip().upper()) for w in words if w.strip()])

    @classmethod
    def from_file(cls, path: str | Path) -> "StabilizerCode":
        """Load a code from a text file, one I/X/Y/Z generator word per line."""
        return cls.from_generator_strings(Path(path).read_text().splitlines())

    def __repr__(self) -> str:
        return f"StabilizerCode(n={self.n}, k={self.k})"


def build_planar_surface(L: int) -> StabilizerCode:
    """Open-boundary planar surface code with n = 2L^2 - 2L + 1, k = 1.

    Data qubits sit on the even-parity cells of a (2L-1) x (2L-1) diagonal
    grid; stabilizers on the odd-parity cells act on the (up to four)
    adjacent data qubits — X-type on odd rows, Z-type on even rows.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    size = 2 * L - 1
    index = {}
    for i in range(size):
        for j in range(size):
            if (i + j) % 2 == 0:
                index[(i, j)] = len(index)
    n = len(index)

    gens = []
    for i in range(size):
        for j in range(size):
            if (i + j) % 2 == 0:
                continue
            kind = "X" if i % 2 == 1 else "Z"
            word = ["I"] * n
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                q = index.get((i + di, j + dj))
                if q is not None:
                    word[q] = kind
            gens.append(PauliString("".join(word)))
    return StabilizerCode(gens)


def build_xzzx_surface(L: int) -> StabilizerCode:
    """Rotated XZZX surface code with n = L^2, k = 1.

    Every face (r, c) reads X, Z, Z, X over the data qubits
    (r, c), (r, c+1), (r+1, c), (r+1, c+1) in lattice order; boundary
    half-faces alternate so the full set of L^2 - 1 generators commutes.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    n = L * L

    def face(fr: int, fc: int) -> PauliString:
        word = ["I"] * n
        for (r, c), kind in (
            ((fr, fc), "X"),
            ((fr, fc + 1), "Z"),
            ((fr + 1, fc), "Z"),
            ((fr + 1, fc + 1), "X"),
        ):
            if 0 <= r < L and 0 <= c < L:
                word[r * L + c] = kind
        return PauliString("".join(word))

    gens = []
    for fr in range(L - 1):
        for fc in range(L - 1):
            gens.append(face(fr, fc))
    for fc in range(0, L - 1, 2):
        gens.append(face(-1, fc))  # top
    for fc in range(1, L - 1, 2):
        gens.append(face(L - 1, fc))  # bottom
    for fr in range(1, L - 1, 2):
        gens.append(face(fr, -1))  # left
    for fr in range(0, L - 1, 2):
        gens.append(face(fr, L - 1))  # right
    return StabilizerCode(gens)
