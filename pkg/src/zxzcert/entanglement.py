"""Two-qubit entanglement and teleportation figures of merit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .densesim import TwoQubitState
from .errors import DomainError, InvalidStateError
from .pauli import PauliString

__all__ = [
    "TripletValues",
    "BlochDecomposition",
    "concurrence",
    "concurrence_raw",
    "batched_concurrence_raw",
    "t_state",
    "t_state_concurrence",
    "fully_entangled_fraction",
    "teleport_fidelity",
    "x_state_concurrence_wc4",
    "bloch_decompose",
]

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_YY = np.kron(PAULIS["Y"], PAULIS["Y"])
EIG_TOL = 1e-9

# Magic basis (Hill-Wootters phases): real superpositions of these columns
# are exactly the maximally entangled two-qubit states.
MAGIC = (
    np.array(
        [
            [1, 0, 0, 1],
            [1j, 0, 0, -1j],
            [0, 1j, 1j, 0],
            [0, 1, -1, 0],
        ],
        dtype=complex,
    ).T
    / np.sqrt(2)
)

# Operator pairs of the canonical t-state, one per triplet value.
T_STATE_TERMS = (("Z", "Y"), ("Y", "Z"), ("X", "X"))


@dataclass(frozen=True)
class TripletValues:
    """Nonnegative triplet ``(t1, t2, t3)`` plus the signs that were absorbed.

    ``flipped[i]`` is True when the measured value was negative and its sign
    was moved into the local operator on ``flip_side`` (``"first"`` or
    ``"last"`` qubit).
    """

    t1: float
    t2: float
    t3: float
    flipped: tuple[bool, bool, bool] = (False, False, False)
    flip_side: str = "first"

    def __post_init__(self):
        for t in self.values:
            if not 0.0 <= t <= 1.0 + 1e-12:
                raise DomainError(f"triplet value {t} outside [0, 1]")
        if self.flip_side not in ("first", "last"):
            raise DomainError("flip_side must be 'first' or 'last'")

    @classmethod
    def from_measured(cls, values, flip_side: str = "first") -> "TripletValues":
        """Absorb minus signs by relabeling local operators."""
        values = [float(v) for v in values]
        if any(abs(v) > 1.0 + 1e-12 for v in values):
            raise DomainError("correlators must lie in [-1, 1]")
        flips = tuple(v < 0 for v in values)
        return cls(*[abs(v) for v in values], flipped=flips, flip_side=flip_side)

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.t1, self.t2, self.t3)

    @property
    def total(self) -> float:
        return self.t1 + self.t2 + self.t3


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """``rho = 1/4 (1 + r.sigma x 1 + 1 x s.sigma + sum T_ij sigma_i x sigma_j)``."""

    r: np.ndarray
    s: np.ndarray
    T_matrix: np.ndarray

    def reconstruct(self) -> np.ndarray:
        sig = [PAULIS[c] for c in "XYZ"]
        rho = np.kron(PAULIS["I"], PAULIS["I"]).astype(complex)
        for i in range(3):
            rho = rho + self.r[i] * np.kron(sig[i], PAULIS["I"])
            rho = rho + self.s[i] * np.kron(PAULIS["I"], sig[i])
            for j in range(3):
                rho = rho + self.T_matrix[i, j] * np.kron(sig[i], sig[j])
        return rho / 4


def _matrix(rho: Union[TwoQubitState, np.ndarray]) -> np.ndarray:
    if isinstance(rho, TwoQubitState):
        return np.asarray(rho.entries)
    return TwoQubitState(rho).entries


def batched_concurrence_raw(rhos: np.ndarray) -> np.ndarray:
    """Unclamped ``l1 - l2 - l3 - l4`` for a stack of 4x4 density matrices.

    The ``l_i`` are the singular values of ``A^T (Y x Y) A`` where
    ``rho = A A^dagger``; their squares are the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``.
    """
    rhos = np.asarray(rhos, dtype=complex)
    w, v = np.linalg.eigh(rhos)
    if np.any(w < -EIG_TOL):
        raise InvalidStateError("density matrix has a negative eigenvalue")
    a = v * np.sqrt(np.clip(w, 0.0, None))[..., None, :]
    m = np.swapaxes(a, -1, -2) @ _YY @ a
    sv = np.linalg.svd(m, compute_uv=False)
    return sv[..., 0] - sv[..., 1] - sv[..., 2] - sv[..., 3]


def concurrence_raw(rho: Union[TwoQubitState, np.ndarray]) -> float:
    return float(batched_concurrence_raw(_matrix(rho)[None])[0])


def concurrence(rho: Union[TwoQubitState, np.ndarray]) -> float:
    """Wootters concurrence from the spin-flipped spectrum."""
    return min(1.0, max(0.0, concurrence_raw(rho)))


def t_state(t1: float, t2: float, t3: float) -> np.ndarray:
    """``1/4 (1 + t1 Z x Y + t2 Y x Z + t3 X x X)`` as a 4x4 matrix."""
    rho = np.eye(4, dtype=complex)
    for t, (a, b) in zip((t1, t2, t3), T_STATE_TERMS):
        rho = rho + t * np.kron(PAULIS[a], PAULIS[b])
    return rho / 4


def t_state_concurrence(t: Union[TripletValues, tuple]) -> float:
    if not isinstance(t, TripletValues):
        t = TripletValues(*t)
    return max(0.0, 0.5 * (t.total - 1.0))


def fully_entangled_fraction(rho: Union[TwoQubitState, np.ndarray]) -> float:
    """Largest overlap with any maximally entangled state.

    In the magic basis maximally entangled states are real unit vectors up
    to a phase, so the maximum is the top eigenvalue of the real part of
    the transformed density matrix.
    """
    m = MAGIC.conj().T @ _matrix(rho) @ MAGIC
    return float(np.linalg.eigvalsh(m.real)[-1])


def teleport_fidelity(fef: float) -> float:
    """Average teleportation fidelity ``(1 + 2 F) / 3`` of a resource with FEF ``F``."""
    if not 0.0 <= fef <= 1.0:
        raise DomainError(f"FEF {fef} outside [0, 1]")
    return (1.0 + 2.0 * fef) / 3.0


def x_state_concurrence_wc4(lam: float, theta2: float, theta3: float) -> float:
    """Closed form for two X-Z plane measurements on the 4-qubit WC state."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda = {lam} outside [0, 1]")
    s = np.sin(theta2) * np.sin(theta3)
    return max(0.0, 0.5 * (3 * lam - 1) * s + 0.5 * (lam - 1))


def bloch_decompose(rho: Union[TwoQubitState, np.ndarray]) -> BlochDecomposition:
    mat = _matrix(rho)
    sig = [PAULIS[c] for c in "XYZ"]
    r = np.array([np.trace(np.kron(p, PAULIS["I"]) @ mat).real for p in sig])
    s = np.array([np.trace(np.kron(PAULIS["I"], p) @ mat).real for p in sig])
    T = np.array([[np.trace(np.kron(p, q) @ mat).real for q in sig] for p in sig])
    return BlochDecomposition(r, s, T)


def pauli_pair_expectation(rho: Union[TwoQubitState, np.ndarray], label: str) -> float:
    """``Tr[rho P]`` for a two-letter label such as ``"ZY"``."""
    return float(np.trace(PauliString.from_label(label).to_matrix() @ _matrix(rho)).real)
