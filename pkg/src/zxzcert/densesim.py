"""Dense pure-state and ensemble simulation of small qubit chains.

Mixed states are kept as ensembles of pure branches and never expanded to
4^n density matrices.  Amplitude index bits are big-endian in chain order:
qubit 1 is the most significant bit.

Single-qubit projective measurements use one convention throughout.  For
angles ``(theta, phi)`` outcome bit 0 projects onto

    cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>

and outcome bit 1 onto the orthogonal state
``sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>``.  Other parametrizations
map onto it as follows:

* equatorial ``(|0> + (-1)^s e^{i phi}|1>)/sqrt 2``: ``theta = pi/2``,
  bit ``s`` (:func:`equatorial`);
* X-Z plane ``cos(theta/2)|0> + sin(theta/2)|1>``: same theta, ``phi = 0``,
  bit 0 (:func:`xz_plane`);
* ``sin(theta/2)|0> + e^{i phi} cos(theta/2)|1>``: ``theta -> pi - theta``,
  same phi, bit 0 (:func:`sin_cos_form`).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, DomainError, ImpossibleOutcomeError, InvalidStateError, ResourceError
from .pauli import PauliString

DEFAULT_DENSE_LIMIT = 14
PRUNE_WEIGHT = 1e-14
MIN_PROBABILITY = 1e-12
DENSE_LIMIT_ENV = "ZXZCERT_DENSE_LIMIT"


def dense_limit() -> int:
    """Largest register size simulated densely (env override supported)."""
    return int(os.environ.get(DENSE_LIMIT_ENV, DEFAULT_DENSE_LIMIT))


def _check_size(n: int) -> None:
    limit = dense_limit()
    if n > limit:
        raise ResourceError(f"{n} qubits exceeds the dense limit of {limit}")


@dataclass(frozen=True, eq=False)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n_qubits:
            raise DimensionError(f"{amps.size} amplitudes for {self.n_qubits} qubits")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > 1e-10:
            raise InvalidStateError(f"state norm^2 {norm} != 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, n_qubits: int, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(n_qubits, amps / np.linalg.norm(amps))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def overlap(self, other: "PureState") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "PureState") -> float:
        return abs(self.overlap(other)) ** 2


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Convex mixture ``sum_i w_i |psi_i><psi_i|`` of pure branches."""

    branches: tuple[tuple[float, PureState], ...]
    n_qubits: int = field(init=False)

    def __post_init__(self):
        branches = tuple((float(w), s) for w, s in self.branches)
        if not branches:
            raise DomainError("an ensemble needs at least one branch")
        n = branches[0][1].n_qubits
        if any(s.n_qubits != n for _, s in branches):
            raise DimensionError("ensemble branches act on different qubit counts")
        if any(w <= 0 for w, _ in branches):
            raise DomainError("branch weights must be positive")
        total = sum(w for w, _ in branches)
        if abs(total - 1.0) > 1e-10:
            raise DomainError(f"branch weights sum to {total}, not 1")
        object.__setattr__(self, "branches", branches)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def pure(cls, state: PureState) -> "Ensemble":
        return cls(((1.0, state),))

    @classmethod
    def from_weighted(cls, items: Iterable[tuple[float, PureState]]) -> "Ensemble":
        """Drop branches below the pruning threshold and renormalize."""
        kept = [(w, s) for w, s in items if w >= PRUNE_WEIGHT]
        total = sum(w for w, _ in kept)
        if total <= 0:
            raise ImpossibleOutcomeError("every branch has vanishing weight")
        return cls(tuple((w / total, s) for w, s in kept))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.branches])

    def stacked(self) -> np.ndarray:
        """Branch amplitudes as a (branches, 2**n) array."""
        return np.stack([s.amplitudes for _, s in self.branches])

    def density_matrix(self) -> np.ndarray:
        """Literal 2^n x 2^n operator. For tests on small registers only."""
        psi = self.stacked()
        return np.einsum("b,bi,bj->ij", self.weights, psi, psi.conj())

    def to_json(self) -> dict:
        return {
            "n": self.n_qubits,
            "branches": [
                {"weight": w, "amplitudes": [[a.real, a.imag] for a in s.amplitudes.tolist()]}
                for w, s in self.branches
            ],
        }

    @classmethod
    def from_json(cls, data: Union[dict, str]) -> "Ensemble":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        return cls(
            tuple(
                (b["weight"], PureState(n, np.array([complex(re, im) for re, im in b["amplitudes"]])))
                for b in data["branches"]
            )
        )


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Validated 4x4 density operator."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.shape != (4, 4):
            raise DimensionError(f"expected a 4x4 matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
            raise InvalidStateError("matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise InvalidStateError(f"trace {np.trace(rho).real} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-9:
            raise InvalidStateError("matrix has a negative eigenvalue")
        rho = 0.5 * (rho + rho.conj().T)
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def from_pure(cls, amplitudes) -> "TwoQubitState":
        psi = np.asarray(amplitudes, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def expectation(self, op: Union[str, PauliString]) -> float:
        if isinstance(op, str):
            op = PauliString.from_label(op)
        return float(np.trace(op.to_matrix() @ self.entries).real)


# ---------------------------------------------------------------------------
# measurement specifications


@dataclass(frozen=True)
class Keep:
    pass


@dataclass(frozen=True)
class ClipZ:
    outcome: int = 1

    def __post_init__(self):
        if self.outcome not in (1, -1):
            raise DomainError("Z clip outcome must be +1 or -1")

    def bra(self) -> np.ndarray:
        return np.array([1, 0], complex) if self.outcome == 1 else np.array([0, 1], complex)


@dataclass(frozen=True)
class Project:
    theta: float
    phi: float = 0.0
    outcome_bit: int = 0

    def __post_init__(self):
        if self.outcome_bit not in (0, 1):
            raise DomainError("outcome bit must be 0 or 1")

    def ket(self) -> np.ndarray:
        return projector_ket(self.theta, self.phi, self.outcome_bit)

    def bra(self) -> np.ndarray:
        return self.ket().conj()


Action = Union[Keep, ClipZ, Project]


def projector_ket(theta: float, phi: float, bit: int) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    if bit == 0:
        return np.array([c, e * s], dtype=complex)
    return np.array([s, -e * c], dtype=complex)


def measurement_basis(theta: float, phi: float) -> np.ndarray:
    """Rows are the bras for outcome bits 0 and 1."""
    return np.stack([projector_ket(theta, phi, 0), projector_ket(theta, phi, 1)]).conj()


def equatorial(phi: float, s: int = 0) -> Project:
    return Project(np.pi / 2, phi, s)


def xz_plane(theta: float) -> Project:
    return Project(theta, 0.0, 0)


def sin_cos_form(theta: float, phi: float) -> Project:
    return Project(np.pi - theta, phi, 0)


def pauli_measurement(basis: str, outcome: int = 1) -> Union[Project, ClipZ]:
    """Eigenbasis measurement of X, Y or Z with eigenvalue ``outcome``."""
    bit = 0 if outcome == 1 else 1
    basis = basis.upper()
    if basis == "X":
        return Project(np.pi / 2, 0.0, bit)
    if basis == "Y":
        return Project(np.pi / 2, np.pi / 2, bit)
    if basis == "Z":
        return ClipZ(outcome)
    raise DomainError(f"unknown Pauli basis {basis!r}")


@dataclass(frozen=True)
class MeasurementSpec:
    """One action per qubit in chain order."""

    actions: tuple[Action, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if not all(isinstance(a, (Keep, ClipZ, Project)) for a in self.actions):
            raise DomainError("actions must be Keep, ClipZ or Project")

    @property
    def kept(self) -> tuple[int, ...]:
        """1-based positions of kept qubits."""
        return tuple(i + 1 for i, a in enumerate(self.actions) if isinstance(a, Keep))


# ---------------------------------------------------------------------------
# state construction


def cluster_amplitudes(n: int) -> np.ndarray:
    """``|+>^n`` followed by controlled-phase gates on neighbouring pairs."""
    idx = np.arange(2**n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1
    parity = np.sum(bits[:, :-1] & bits[:, 1:], axis=1) & 1
    return (1 - 2 * parity).astype(complex) / 2 ** (n / 2)


def cluster_state(n: int) -> PureState:
    if n < 2:
        raise DomainError("a linear cluster needs n >= 2 qubits")
    _check_size(n)
    return PureState(n, cluster_amplitudes(n))


def apply_pauli(state: PureState, op: PauliString) -> PureState:
    """``op |state>`` by bit permutation and signs."""
    amps = _pauli_action(state.amplitudes, op)
    return PureState(state.n_qubits, amps)


def _masks(op: PauliString) -> tuple[int, int]:
    xm = zm = 0
    for x, z in zip(op.x_bits, op.z_bits):
        xm = (xm << 1) | x
        zm = (zm << 1) | z
    return xm, zm


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return parity


def _pauli_action(amps: np.ndarray, op: PauliString) -> np.ndarray:
    """Amplitudes of ``op`` applied to each row of ``amps`` (last axis is 2^n)."""
    n = op.n_qubits
    if amps.shape[-1] != 2**n:
        raise DimensionError(f"{op.n_qubits}-qubit operator on a {amps.shape[-1]}-dim vector")
    xm, zm = _masks(op)
    idx = np.arange(2**n)
    # X^x Z^z |b> = (-1)^{z.b} |b ^ x>,  Y = i X Z on each (1,1) qubit.
    ny = bin(xm & zm).count("1")
    coeff = (1j) ** ((op.phase_exp + ny) % 4)
    signs = 1 - 2 * _popcount_parity(idx & zm)
    out = np.empty_like(amps)
    out[..., idx ^ xm] = coeff * signs * amps[..., idx]
    return out


def wc_state(n: int, lam: float) -> Ensemble:
    """Worst-case mixture: ``lam`` on the cluster, ``(1-lam)/n`` on each ``Z_i``-flipped copy."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda = {lam} outside [0, 1]")
    cluster = cluster_state(n)
    branches = [(lam, cluster)]
    for i in range(1, n + 1):
        branches.append(((1.0 - lam) / n, apply_pauli(cluster, PauliString.single(n, i, "Z"))))
    return Ensemble(tuple((w, s) for w, s in branches if w > 0))


def maximally_mixed(n: int) -> Ensemble:
    """Uniform mixture of computational basis states."""
    _check_size(n)
    eye = np.eye(2**n, dtype=complex)
    return Ensemble(tuple((2.0**-n, PureState(n, row)) for row in eye))


# ---------------------------------------------------------------------------
# expectation values and measurements


def expectation(rho: Union[Ensemble, PureState], op: PauliString) -> float:
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    if rho.n_qubits != op.n_qubits:
        raise DimensionError(f"{op.n_qubits}-qubit operator on a {rho.n_qubits}-qubit state")
    psi = rho.stacked()
    vals = np.einsum("bi,bi->b", psi.conj(), _pauli_action(psi, op))
    value = complex(np.dot(rho.weights, vals))
    if op.is_hermitian and abs(value.imag) > 1e-10:
        raise AssertionError(f"Hermitian expectation has imaginary part {value.imag}")
    return value.real if op.is_hermitian else value


def _contract(tensor: np.ndarray, axis: int, bra: np.ndarray) -> np.ndarray:
    """Contract one qubit axis (of a branch-stacked tensor) with a bra."""
    return np.tensordot(tensor, bra, axes=([axis], [0]))


def apply_measurement(rho: Union[Ensemble, PureState], spec: MeasurementSpec) -> tuple[float, Ensemble]:
    """Post-select every branch on the measured outcomes.

    Returns the total outcome probability and the renormalized ensemble on
    the kept qubits (in chain order).
    """
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    n = rho.n_qubits
    if len(spec.actions) != n:
        raise DimensionError(f"spec covers {len(spec.actions)} of {n} qubits")
    kept = spec.kept
    if not kept:
        raise DomainError("at least one qubit must be kept")
    psi = rho.stacked().reshape((-1,) + (2,) * n)
    # Contract from the last qubit so earlier axis numbers stay valid.
    for q in range(n, 0, -1):
        action = spec.actions[q - 1]
        if not isinstance(action, Keep):
            psi = _contract(psi, q, action.bra())
    psi = psi.reshape(len(rho.branches), -1)
    norms = np.einsum("bi,bi->b", psi.conj(), psi).real
    joint = rho.weights * norms
    prob = float(joint.sum())
    if prob < MIN_PROBABILITY:
        raise ImpossibleOutcomeError(f"outcome probability {prob:.3e} is effectively zero")
    k = len(kept)
    out = []
    for w, vec, nrm in zip(joint, psi, norms):
        if w / prob >= PRUNE_WEIGHT:
            out.append((w / prob, PureState(k, vec / np.sqrt(nrm))))
    return prob, Ensemble.from_weighted(out)


def clip_segment(rho: Union[Ensemble, PureState], left: int, right: int, outcomes: tuple[int, int] = (1, 1)) -> Ensemble:
    """Segment ``left..right`` after Z-measuring its two outside neighbours.

    Outcomes default to +1 on both neighbours; -1 is accepted as an
    extension and flips the sign of the adjacent boundary generator.
    Qubits beyond the neighbours are traced out.
    """
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    n = rho.n_qubits
    if not (2 <= left < right <= n - 1):
        raise DomainError(f"segment {left}..{right} needs outside neighbours within 1..{n}")
    actions: list[Action] = [Keep()] * n
    actions[left - 2] = ClipZ(outcomes[0])
    actions[right] = ClipZ(outcomes[1])
    _, post = apply_measurement(rho, MeasurementSpec(tuple(actions)))
    # kept = 1..left-2, left..right, right+2..n
    keep_positions = list(range(1, left - 1)) + list(range(left, right + 1)) + list(range(right + 2, n + 1))
    segment = [keep_positions.index(q) + 1 for q in range(left, right + 1)]
    return reduce_to(post, segment)


def reduce_to(rho: Ensemble, qubits: Sequence[int]) -> Ensemble:
    """Partial trace onto ``qubits`` (1-based, order preserved) as an ensemble.

    Each branch is Schmidt-decomposed across the cut, so the result stays a
    list of pure branches.
    """
    n = rho.n_qubits
    qubits = list(qubits)
    if sorted(set(qubits)) != sorted(qubits) or not all(1 <= q <= n for q in qubits):
        raise DomainError(f"invalid qubit selection {qubits}")
    rest = [q for q in range(1, n + 1) if q not in qubits]
    k = len(qubits)
    if not rest:
        perm = [q - 1 for q in qubits]
        return Ensemble(tuple((w, PureState(n, s.tensor().transpose(perm).reshape(-1))) for w, s in rho.branches))
    items = []
    for w, s in rho.branches:
        mat = s.tensor().transpose([q - 1 for q in qubits + rest]).reshape(2**k, -1)
        u, sv, _ = np.linalg.svd(mat, full_matrices=False)
        for j, val in enumerate(sv):
            p = w * val**2
            if p >= PRUNE_WEIGHT:
                items.append((p, PureState.from_unnormalized(k, u[:, j])))
    return Ensemble.from_weighted(items)


def reduced_two_qubit(rho: Union[Ensemble, PureState], a: int, b: int) -> TwoQubitState:
    """Partial trace onto qubits ``a`` and ``b`` (1-based, in that order)."""
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    n = rho.n_qubits
    if a == b:
        raise DomainError("target qubits must differ")
    if not (1 <= a <= n and 1 <= b <= n):
        raise DimensionError(f"qubits {a}, {b} outside 1..{n}")
    rest = [q - 1 for q in range(1, n + 1) if q not in (a, b)]
    out = np.zeros((4, 4), dtype=complex)
    for w, s in rho.branches:
        mat = s.tensor().transpose([a - 1, b - 1] + rest).reshape(4, -1)
        out += w * (mat @ mat.conj().T)
    return TwoQubitState(out)


def fidelity_with_cluster(rho: Ensemble) -> float:
    """``<C_n| rho |C_n>``."""
    c = cluster_amplitudes(rho.n_qubits)
    overlaps = rho.stacked() @ c.conj()
    return float(np.dot(rho.weights, np.abs(overlaps) ** 2))
