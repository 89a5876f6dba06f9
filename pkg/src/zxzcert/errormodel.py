"""Machine-gun photonic cluster source with Pauli-Y errors on the emitter spin.

One emission cycle acts on the spin ``s`` and a fresh photon ``p`` in |0>:

1. with probability ``p_y`` a Y error hits the spin,
2. the emission isometry ``|0>_s -> |0>_s|0>_p``, ``|1>_s -> |1>_s|1>_p``
   (a CNOT from spin to photon),
3. a Hadamard on the spin.

The spin starts in |+>.  After ``n`` cycles the register (photons 1..n,
then the spin as qubit n+1) is exactly the (n+1)-qubit linear cluster state
when ``p_y = 0``, so no local correction is needed on the spin.

A Y error before emission ``j`` propagates to ``Y_s X_j X_{j+1} ... X_n`` at
the output (up to phase), which gives the closed-form correlators used by
:func:`correlator_analytic`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .bounds import direct_bound, le_floor_segment, max_certified_span
from .densesim import Ensemble, PureState
from .errors import DomainError, ResourceError
from .pauli import PauliString, cluster_generators, commutes, compose, decompose, surviving_triplet

__all__ = [
    "SourceParams",
    "emit_state",
    "error_images",
    "correlator_analytic",
    "zxz_value",
    "segment_triplet",
    "direct_le",
    "le3_values",
    "compare_ranges",
    "crossing_points",
]

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


@dataclass(frozen=True)
class SourceParams:
    n_photons: int
    p_y: float
    dense_limit: int = 10

    def __post_init__(self):
        if self.n_photons < 1:
            raise DomainError("need at least one photon")
        if not 0.0 <= self.p_y <= 0.5:
            raise DomainError(f"p_y = {self.p_y} outside [0, 1/2]")

    @property
    def n_qubits(self) -> int:
        return self.n_photons + 1


def _apply_1q(psi: np.ndarray, gate: np.ndarray, axis: int) -> np.ndarray:
    psi = np.tensordot(gate, psi, axes=([1], [axis]))
    return np.moveaxis(psi, 0, axis)


def _run_circuit(n: int, errors: Sequence[int]) -> np.ndarray:
    """Amplitudes of photons 1..n plus spin for one error pattern."""
    # Tensor axes: photons emitted so far, then the spin last.
    psi = np.array([1, 1], dtype=complex) / np.sqrt(2)
    for j in range(n):
        if errors[j]:
            psi = _apply_1q(psi, _Y, psi.ndim - 1)
        # CNOT spin -> new photon in |0>: photon copies the spin bit.
        photon_first = np.zeros(psi.shape + (2,), dtype=complex)
        photon_first[..., 0, 0] = psi[..., 0]
        photon_first[..., 1, 1] = psi[..., 1]
        # axes now (..., spin, photon); swap so the photon precedes the spin
        psi = np.swapaxes(photon_first, -1, -2)
        psi = _apply_1q(psi, _H, psi.ndim - 1)
    return psi.reshape(-1)


def emit_state(params: SourceParams) -> Ensemble:
    """Exact output ensemble, enumerating every Y-error pattern."""
    n = params.n_photons
    if n > params.dense_limit:
        raise ResourceError(
            f"{n} photons exceeds dense_limit={params.dense_limit}; use correlator_analytic"
        )
    p = params.p_y
    branches = []
    for pattern in itertools.product((0, 1), repeat=n):
        k = sum(pattern)
        w = p**k * (1 - p) ** (n - k)
        if w <= 0:
            continue
        branches.append((w, PureState(n + 1, _run_circuit(n, pattern))))
    return Ensemble.from_weighted(branches)


def error_images(n_photons: int) -> tuple[PauliString, ...]:
    """Output-frame image of a Y error before each emission (phases dropped).

    Each error is pushed through the remaining CNOT and Hadamard layers by
    symplectic bit updates.
    """
    n = n_photons + 1
    spin = n - 1
    images = []
    for j in range(n_photons):
        x = [0] * n
        z = [0] * n
        x[spin] = z[spin] = 1
        for k in range(j, n_photons):
            # CNOT spin -> photon k: X on control spreads to target, Z on
            # target spreads back to control (target starts in |0>, so its
            # bits are still zero here).
            x[k] ^= x[spin]
            z[spin] ^= z[k]
            # Hadamard on spin swaps X and Z.
            x[spin], z[spin] = z[spin], x[spin]
        images.append(PauliString(tuple(x), tuple(z)))
    return tuple(images)


def correlator_analytic(op: PauliString, params: SourceParams) -> float:
    """``<op>`` on the noisy source output without dense simulation.

    ``op`` must be plus or minus a stabilizer of the ideal output chain.
    Each error site multiplies the ideal value by ``1 - 2 p_y`` when its
    output image anticommutes with ``op``.
    """
    if op.n_qubits != params.n_qubits:
        raise DomainError(f"operator on {op.n_qubits} qubits, source emits {params.n_qubits}")
    found = decompose(cluster_generators(params.n_qubits), op)
    if found is None:
        raise DomainError(f"{op} is not a stabilizer of the ideal cluster")
    _, sign = found
    factor = 1.0 - 2.0 * params.p_y
    value = float(sign)
    for image in error_images(params.n_photons):
        if not commutes(op, image):
            value *= factor
    return value


def zxz_value(p_y: float) -> float:
    """Interior ``<ZXZ>`` of the source: two error sites anticommute."""
    return (1.0 - 2.0 * p_y) ** 2


def _embed(segment_op: PauliString, offset: int, total: int) -> PauliString:
    """Place a segment operator at chain positions ``offset+1..`` of a longer chain."""
    pad = (0,) * offset
    tail = (0,) * (total - offset - segment_op.n_qubits)
    return PauliString(pad + segment_op.x_bits + tail, pad + segment_op.z_bits + tail, segment_op.phase_exp)


def segment_triplet(p_y: float, n: int, bases: Sequence[str] | None = None) -> tuple[float, float, float]:
    """Expectations of the surviving triplet on a clipped ``n``-qubit segment.

    The segment sits at photons 2..n+1 of an (n+2)-photon chain.  A segment
    stabilizer built from generators K_a..K_b equals the full-chain product
    of the same generators after the +1 Z clips, and for Pauli-error
    mixtures of the cluster its expectation is unchanged by the clipping.
    """
    if bases is None:
        bases = "Y" * (n - 2)
    params = SourceParams(n + 2, p_y, dense_limit=0)
    full = cluster_generators(params.n_qubits)
    values = []
    for el in surviving_triplet(n, bases):
        op = compose(full, [i + 1 for i in el.generator_indices]).operator
        values.append(correlator_analytic(op, params))
    return tuple(values)


def direct_le(p_y: float, n: int, bases: Sequence[str] | None = None) -> float:
    return direct_bound(*segment_triplet(p_y, n, bases))


def le3_values(p_y: float) -> tuple[float, float]:
    """(direct, zxz) LE floors across three measured qubits (segment n = 5)."""
    return direct_le(p_y, 5), le_floor_segment(zxz_value(p_y), 5)


def compare_ranges(p_grid: Sequence[float], max_span: int) -> list[dict]:
    """Longest certified span per error probability for both bounds.

    Spans count measured qubits and are capped at ``max_span``.  The direct
    bound uses the all-Y measurement sequence.
    """
    if max_span < 1:
        raise DomainError("max_span must be at least 1")
    rows = []
    for p in map(float, p_grid):
        z = zxz_value(p)
        zxz_range = max_certified_span(z, cap=max_span)
        direct_range = 0
        for m in range(1, max_span + 1):
            if direct_le(p, m + 2) > 0:
                direct_range = m
            else:
                break
        le3_direct, le3_zxz = le3_values(p)
        rows.append(
            {
                "p": p,
                "zxz_value": z,
                "zxz_range": zxz_range,
                "direct_range": direct_range,
                "le3_direct": le3_direct,
                "le3_zxz": le3_zxz,
            }
        )
    return rows


def crossing_points() -> dict[str, float]:
    """Error probabilities where each three-qubit LE floor reaches zero."""
    zxz = brentq(lambda p: 1.0 - 5.0 * (1.0 - zxz_value(p)), 0.0, 0.5, xtol=1e-15)

    def direct_raw(p: float) -> float:
        return sum(segment_triplet(p, 5)) - 1.0

    direct = brentq(direct_raw, 0.0, 0.5, xtol=1e-15)
    return {"zxz": zxz, "direct": direct}
