"""Certification formulas driven by the three-qubit correlator ``<ZXZ>``.

Throughout, ``z`` is a common lower bound on every generator expectation
``<Z_{i-1} X_i Z_{i+1}>`` of a translationally invariant chain.  Spans come
in two flavours: the number of measured qubits between the two targets
(``k - 1`` when the targets are ``j`` and ``j + k``) and the size ``n`` of
the clipped segment including both targets, so ``n = measured + 2``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .entanglement import concurrence_raw, t_state
from .errors import DomainError, InconsistentCorrelatorsError, NoWCStateError

__all__ = [
    "BoundReport",
    "le_floor_pair",
    "le_floor_segment",
    "threshold_z",
    "threshold_z_exact",
    "max_certified_span",
    "direct_bound",
    "fidelity_floor_general",
    "fidelity_floor",
    "fef_floor_from_triplet",
    "teleport_floor",
    "teleport_floor_raw",
    "wc_lambda",
    "wc_z",
    "wc_triplet_sum",
    "reports_to_csv",
]

PSD_TOL = 1e-9
CSV_FIELDS = ("z", "span", "le_floor", "fidelity_floor", "fef_floor", "teleport_floor")


def le_floor_pair(z: float, k: int) -> float:
    """Localizable-entanglement floor between qubits ``j`` and ``j + k``."""
    if k < 1:
        raise DomainError("k must be at least 1")
    return max(0.0, 1.0 - (k + 1) * (1.0 - z))


def le_floor_segment(z: float, n: int) -> float:
    """Floor on LE between the ends of a clipped ``n``-qubit segment."""
    if n < 2:
        raise DomainError("segment needs n >= 2")
    return max(0.0, 1.0 - n * (1.0 - z))


def threshold_z_exact(measured_qubits: int) -> Fraction:
    """Smallest ``z`` that certifies nonzero LE across ``measured_qubits``."""
    if measured_qubits < 1:
        raise DomainError("measured_qubits must be at least 1")
    k = measured_qubits + 1
    return Fraction(k, k + 1)


def threshold_z(measured_qubits: int) -> float:
    return float(threshold_z_exact(measured_qubits))


def max_certified_span(z: float, cap: int | None = None) -> int:
    """Largest measured-qubit count with a positive pair floor (0 if none).

    Positive floor means ``z > threshold_z(m)``, i.e. ``m + 2 < 1 / (1 - z)``.
    """
    if z >= 1.0:
        if cap is None:
            raise DomainError("z = 1 certifies every span; pass a cap")
        return cap
    if z <= threshold_z(1):
        return 0
    m = max(0, int(np.floor(1.0 / (1.0 - z))) - 2)
    while m > 0 and 1.0 - (m + 2) * (1.0 - z) <= 0:
        m -= 1
    while 1.0 - (m + 3) * (1.0 - z) > 0:
        m += 1
    return m if cap is None else min(m, cap)


def direct_bound(b1: float, b2: float, b3: float) -> float:
    """Concurrence of ``rho_B`` built from three measured stabilizer correlators.

    ``rho_B = 1/4 (1 + b1 Z x Y + b2 Y x Z + b3 X x X)``.  Correlators that
    make ``rho_B`` non-positive cannot come from a physical state and raise
    :class:`InconsistentCorrelatorsError`.
    """
    rho = t_state(b1, b2, b3)
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise InconsistentCorrelatorsError(f"correlators ({b1}, {b2}, {b3}) give a non-positive rho_B")
    return min(1.0, max(0.0, concurrence_raw(rho)))


def fidelity_floor_general(gen_expectations: Sequence[float]) -> float:
    """Lower bound on overlap with the ideal cluster from each ``<K_i>``."""
    vals = np.asarray(gen_expectations, dtype=float)
    if np.any(np.abs(vals) > 1.0 + 1e-12):
        raise DomainError("generator expectations must lie in [-1, 1]")
    return float(1.0 - 0.5 * np.sum(1.0 - vals))


def fidelity_floor(z: float, n: int) -> float:
    """Translationally invariant case of :func:`fidelity_floor_general`."""
    return 1.0 - 0.5 * n * (1.0 - z)


def fef_floor_from_triplet(T: float) -> float:
    if not -1e-12 <= T <= 3.0 + 1e-12:
        raise DomainError(f"triplet sum {T} outside [0, 3]")
    return (1.0 + T) / 4.0


def wc_triplet_sum(z: float, n: int) -> float:
    """Surviving-triplet sum on the WC state: ``sum_i (m_i (z-1) + 1)``."""
    return 2 * n * (z - 1.0) + 3.0


def teleport_floor_raw(z: float, n: int) -> float:
    if n < 3:
        raise DomainError("segment needs n >= 3")
    return 1.0 - (n / 3.0) * (1.0 - z)


def teleport_floor(z: float, n: int) -> float:
    """Teleportation-fidelity floor, reported no lower than the classical 1/2."""
    return max(0.5, teleport_floor_raw(z, n))


def wc_lambda(z: float, n: int) -> float:
    """Cluster weight of the WC state with generator expectations ``z``."""
    if n < 2:
        raise DomainError("need n >= 2")
    lam = 1.0 - n * (1.0 - z) / 2.0
    if lam < -1e-12 or lam > 1.0 + 1e-12:
        raise NoWCStateError(f"no WC state for z = {z} at n = {n} (lambda = {lam})")
    return min(1.0, max(0.0, lam))


def wc_z(lam: float, n: int) -> float:
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda = {lam} outside [0, 1]")
    return 1.0 - 2.0 * (1.0 - lam) / n


@dataclass(frozen=True)
class BoundReport:
    """All floors implied by one value of ``z`` at one span.

    ``span_kind`` is ``"measured"`` (qubits between the targets) or
    ``"segment"`` (qubits in the clipped segment).  Unclamped values are
    kept in the ``*_raw`` fields.
    """

    z: float
    span: int
    span_kind: str
    le_floor: float
    fidelity_floor: float
    fef_floor: float
    teleport_floor: float
    le_floor_raw: float
    fidelity_floor_raw: float
    fef_floor_raw: float
    teleport_floor_raw: float
    method: str | None = None
    confidence: float | None = None

    @classmethod
    def from_z(
        cls,
        z: float,
        span: int,
        span_kind: str = "measured",
        method: str | None = None,
        confidence: float | None = None,
    ) -> "BoundReport":
        if not -1.0 <= z <= 1.0:
            raise DomainError(f"z = {z} outside [-1, 1]")
        if span_kind == "measured":
            n = span + 2
        elif span_kind == "segment":
            n = span
        else:
            raise DomainError("span_kind must be 'measured' or 'segment'")
        if n < 3:
            raise DomainError("need at least one measured qubit")
        le_raw = 1.0 - n * (1.0 - z)
        fid_raw = fidelity_floor(z, n)
        fef_raw = (1.0 + wc_triplet_sum(z, n)) / 4.0
        tel_raw = teleport_floor_raw(z, n)
        fef = min(1.0, max(0.0, fef_raw))
        return cls(
            z=float(z),
            span=int(span),
            span_kind=span_kind,
            le_floor=max(0.0, le_raw),
            fidelity_floor=min(1.0, max(0.0, fid_raw)),
            fef_floor=fef,
            teleport_floor=max(0.5, tel_raw),
            le_floor_raw=le_raw,
            fidelity_floor_raw=fid_raw,
            fef_floor_raw=fef_raw,
            teleport_floor_raw=tel_raw,
            method=method,
            confidence=confidence,
        )

    @property
    def segment_size(self) -> int:
        return self.span + 2 if self.span_kind == "measured" else self.span

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        return cls(**data)

    def csv_row(self) -> tuple:
        return tuple(getattr(self, f) for f in CSV_FIELDS)


def reports_to_csv(reports: Iterable[BoundReport], fmt: str = "{:.12g}") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in reports:
        writer.writerow([fmt.format(v) if isinstance(v, float) else v for v in r.csv_row()])
    return buf.getvalue()
