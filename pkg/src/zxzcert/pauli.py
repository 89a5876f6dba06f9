"""Symplectic Pauli algebra for linear cluster states.

A :class:`PauliString` stores an n-qubit operator as

    i^k * P_1 (x) P_2 (x) ... (x) P_n

with per-qubit bits ``(x, z)``: ``(0, 0) = I``, ``(1, 0) = X``, ``(0, 1) = Z``
and ``(1, 1) = Y``.  Qubits are chain positions 1..n, written left to right,
and qubit 1 is the most significant tensor factor in dense matrices.

Stabilizer generators of the linear cluster are ``K_1 = X Z``,
``K_i = Z X Z`` on (i-1, i, i+1) and ``K_n = Z X``.  Index sets passed to
:func:`compose` are 1-based, like chain positions.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _gf2
from .errors import DimensionError, DomainError

__all__ = [
    "PauliString",
    "GeneratorSet",
    "StabilizerElement",
    "multiply",
    "commutes",
    "cluster_generators",
    "compose",
    "decompose",
    "surviving_triplet",
    "all_sequences",
    "triplet_m_sum",
    "backbone_floor",
    "pairwise_floor",
]

_SYMBOLS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _SYMBOLS.items()}
_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LABEL_RE = re.compile(r"^([+-]?)(i?)([IXYZ]+)$")

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """n-qubit Pauli operator ``i**phase_exp * P_1 ... P_n``."""

    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]
    phase_exp: int = 0

    def __post_init__(self):
        if len(self.x_bits) != len(self.z_bits):
            raise DimensionError("x and z bit vectors differ in length")
        if len(self.x_bits) == 0:
            raise DomainError("a PauliString needs at least one qubit")
        object.__setattr__(self, "x_bits", tuple(int(b) & 1 for b in self.x_bits))
        object.__setattr__(self, "z_bits", tuple(int(b) & 1 for b in self.z_bits))
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse ``"+ZXZII"``, ``"-YY"``, ``"+iXZ"`` or a bare ``"XZ"``."""
        m = _LABEL_RE.match(label.strip())
        if m is None:
            raise DomainError(f"cannot parse Pauli label {label!r}")
        sign, imag, body = m.groups()
        phase = (2 if sign == "-" else 0) + (1 if imag else 0)
        bits = [_BITS[c] for c in body]
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits), phase)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls((0,) * n, (0,) * n, 0)

    @classmethod
    def single(cls, n: int, qubit: int, symbol: str) -> "PauliString":
        """``symbol`` on chain position ``qubit`` (1-based), identity elsewhere."""
        body = ["I"] * n
        body[qubit - 1] = symbol
        return cls.from_label("".join(body))

    @property
    def n_qubits(self) -> int:
        return len(self.x_bits)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def body(self) -> str:
        return "".join(_SYMBOLS[(x, z)] for x, z in zip(self.x_bits, self.z_bits))

    @property
    def label(self) -> str:
        return _PREFIX[self.phase_exp] + self.body

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    @property
    def weight(self) -> int:
        return sum(x | z for x, z in zip(self.x_bits, self.z_bits))

    def support(self) -> tuple[int, ...]:
        """Chain positions (1-based) where the operator is not the identity."""
        return tuple(i + 1 for i, (x, z) in enumerate(zip(self.x_bits, self.z_bits)) if x | z)

    def symbol(self, qubit: int) -> str:
        return _SYMBOLS[(self.x_bits[qubit - 1], self.z_bits[qubit - 1])]

    def without_phase(self) -> "PauliString":
        return PauliString(self.x_bits, self.z_bits, 0)

    def negate(self) -> "PauliString":
        return PauliString(self.x_bits, self.z_bits, self.phase_exp + 2)

    def restrict(self, qubits: Sequence[int]) -> "PauliString":
        """Tensor factors on ``qubits`` (1-based), keeping the phase."""
        return PauliString(
            tuple(self.x_bits[q - 1] for q in qubits),
            tuple(self.z_bits[q - 1] for q in qubits),
            self.phase_exp,
        )

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix. Only for small n (oracle use)."""
        out = np.array([[self.phase]], dtype=complex)
        for c in self.body:
            out = np.kron(out, _SINGLE[c])
        return out

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        return self.label


def _check_sizes(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise DimensionError(f"{p.n_qubits}-qubit vs {q.n_qubits}-qubit Pauli")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact product ``p @ q`` including the phase."""
    _check_sizes(p, q)
    x1, z1 = np.array(p.x_bits), np.array(p.z_bits)
    x2, z2 = np.array(q.x_bits), np.array(q.z_bits)
    # Exponent of i picked up on each qubit when writing P1 P2 as one Pauli
    # (Aaronson-Gottesman g function with Y = iXZ).
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    phase = p.phase_exp + q.phase_exp + int(g.sum())
    return PauliString(tuple(x1 ^ x2), tuple(z1 ^ z2), phase)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic inner product of p and q vanishes mod 2."""
    _check_sizes(p, q)
    s = sum(a * d + b * c for a, b, c, d in zip(p.x_bits, p.z_bits, q.x_bits, q.z_bits))
    return s % 2 == 0


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered stabilizer generators ``K_1 .. K_n`` of a linear cluster."""

    generators: tuple[PauliString, ...]

    @property
    def n(self) -> int:
        return len(self.generators)

    def __getitem__(self, index: int) -> PauliString:
        """1-based access: ``gens[1]`` is ``K_1``."""
        if not 1 <= index <= self.n:
            raise DomainError(f"generator index {index} outside 1..{self.n}")
        return self.generators[index - 1]

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return self.n

    def bit_matrix(self) -> np.ndarray:
        """Rows are generators, columns are ``x_1..x_n, z_1..z_n``."""
        return np.array([g.x_bits + g.z_bits for g in self.generators], dtype=np.uint8)


@dataclass(frozen=True)
class StabilizerElement:
    """A stabilizer-group member ``K^m`` and the generators it is built from."""

    operator: PauliString
    generator_indices: frozenset[int]

    @property
    def m(self) -> int:
        return len(self.generator_indices)

    @property
    def exponents(self) -> tuple[int, ...]:
        n = self.operator.n_qubits
        return tuple(int(i + 1 in self.generator_indices) for i in range(n))


def cluster_generators(n: int) -> GeneratorSet:
    if n < 2:
        raise DomainError("a linear cluster needs n >= 2 qubits")
    gens = []
    for i in range(n):
        x = [0] * n
        z = [0] * n
        x[i] = 1
        if i > 0:
            z[i - 1] = 1
        if i < n - 1:
            z[i + 1] = 1
        gens.append(PauliString(tuple(x), tuple(z)))
    return GeneratorSet(tuple(gens))


def compose(gens: GeneratorSet, indices: Iterable[int]) -> StabilizerElement:
    """Ordered product of the generators named by 1-based ``indices``."""
    idx = sorted(set(int(i) for i in indices))
    for i in idx:
        if not 1 <= i <= gens.n:
            raise DomainError(f"generator index {i} outside 1..{gens.n}")
    op = PauliString.identity(gens.n)
    for i in idx:
        op = op * gens[i]
    return StabilizerElement(op, frozenset(idx))


def decompose(gens: GeneratorSet, op: PauliString) -> tuple[frozenset[int], int] | None:
    """Write ``op`` as ``sign * K^m``.

    Returns ``(indices, sign)`` with ``sign`` in {+1, -1}, or ``None`` when
    ``op`` is not (plus or minus) a stabilizer-group element.
    """
    if op.n_qubits != gens.n:
        raise DimensionError(f"{op.n_qubits}-qubit operator vs {gens.n} generators")
    target = np.array(op.x_bits + op.z_bits, dtype=np.uint8)
    sol = _gf2.solve(gens.bit_matrix().T, target)
    if sol is None:
        return None
    element = compose(gens, [i + 1 for i in np.nonzero(sol)[0]])
    diff = (op.phase_exp - element.operator.phase_exp) % 4
    if diff not in (0, 2):
        return None
    return element.generator_indices, 1 if diff == 0 else -1


def _measurement_constraints(n: int, bases: Sequence[str]) -> np.ndarray:
    """Linear conditions on generator exponents ``a_1..a_n`` for commuting
    with the single-qubit measurement on every interior qubit.

    For the linear cluster, ``K^a`` has x-bit ``a_i`` and z-bit
    ``a_{i-1} + a_{i+1}`` on qubit i.  Commuting with X needs the z-bit to
    vanish; commuting with Y needs x-bit = z-bit.
    """
    rows = np.zeros((n - 2, n), dtype=np.uint8)
    for r, (qubit, basis) in enumerate(zip(range(2, n), bases)):
        i = qubit - 1
        rows[r, i - 1] = rows[r, i + 1] = 1
        if basis == "Y":
            rows[r, i] = 1
    return rows


def surviving_triplet(n: int, bases: Sequence[str]) -> tuple[StabilizerElement, ...]:
    """The three stabilizers left after X/Y measurements on qubits 2..n-1.

    ``bases`` lists the measured Pauli on each interior qubit in chain order.
    The survivors are the nontrivial elements of the 2-dimensional GF(2)
    nullspace of the commutation constraints; they all act nontrivially on
    both end qubits and the third is the product of the first two.
    Output is sorted by (m, label).
    """
    if n < 3:
        raise DomainError("need n >= 3 for a measured segment")
    bases = [b.upper() for b in bases]
    if len(bases) != n - 2:
        raise DomainError(f"expected {n - 2} basis labels, got {len(bases)}")
    if any(b not in ("X", "Y") for b in bases):
        raise DomainError("measurement bases must be X or Y")
    gens = cluster_generators(n)
    basis = _gf2.nullspace(_measurement_constraints(n, bases))
    if basis.shape[0] != 2:
        raise AssertionError(f"expected a 2-dimensional commutant, found {basis.shape[0]}")
    elements = []
    for coeffs in ((1, 0), (0, 1), (1, 1)):
        vec = (coeffs[0] * basis[0] + coeffs[1] * basis[1]) % 2
        el = compose(gens, [i + 1 for i in np.nonzero(vec)[0]])
        if el.operator.symbol(1) == "I" or el.operator.symbol(n) == "I":
            raise AssertionError(f"{el.operator} is trivial on an end qubit")
        elements.append(el)
    elements.sort(key=lambda e: (e.m, e.operator.body))
    return tuple(elements)


def all_sequences(n: int) -> Iterable[tuple[str, ...]]:
    """Every X/Y assignment to the interior qubits 2..n-1."""
    return itertools.product("XY", repeat=n - 2)


def triplet_m_sum(n: int) -> int:
    if n < 3:
        raise DomainError("need n >= 3")
    return 4 + 2 * (n - 2)


def backbone_floor(m: int, z: float, clamp: bool = False) -> float:
    """Smallest ``<K^m>`` compatible with generator expectations ``z``.

    The raw value ``m (z - 1) + 1`` is returned unless ``clamp`` is set, in
    which case it is limited below by -1.
    """
    if m < 0:
        raise DomainError("m must be nonnegative")
    value = m * (z - 1.0) + 1.0
    return max(-1.0, value) if clamp else value


def pairwise_floor(a: float, b: float) -> float:
    """Lower bound on ``<P1 P2>`` for commuting Paulis with ``<P1> = a``, ``<P2> = b``."""
    return a + b - 1.0
