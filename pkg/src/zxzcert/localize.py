"""Numerical search for localizable entanglement on small chains.

Qubits 2..n-1 are measured with non-adaptive single-qubit projections and
the entanglement left between qubits 1 and n is scored by concurrence.
Angles follow the projector convention of :mod:`zxzcert.densesim`.

Two objectives are offered:

``postselected``
    concurrence of the branch where every measured qubit gives bit 0;
``outcome_averaged``
    ``sum_s p_s C(rho_s)`` over all outcome strings for fixed bases.

The search maximizes the unclamped Wootters quantity ``l1 - l2 - l3 - l4``
(summed with outcome weights in averaged mode whenever no branch is
entangled), so the simplex still has a slope to follow in the separable
region.  Reported values are clamped concurrences.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from .densesim import Ensemble, PureState, TwoQubitState, measurement_basis, projector_ket, wc_state
from .entanglement import batched_concurrence_raw, concurrence, x_state_concurrence_wc4
from .errors import DomainError, ImpossibleOutcomeError

__all__ = [
    "AngleVector",
    "OptimizerConfig",
    "OptimizationResult",
    "localized_state",
    "localized_objective",
    "maximize_le",
    "equatorial_check",
    "equatorial_oracle",
    "wc4_grid_compare",
    "sweep_to_csv",
]

MODES = ("postselected", "outcome_averaged")
_MIN_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class AngleVector:
    """Per-measured-qubit angles, qubit 2 first."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        if theta.shape != phi.shape or theta.ndim != 1:
            raise DomainError("theta and phi must be 1-d arrays of equal length")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return self.theta.size

    @classmethod
    def from_flat(cls, x: np.ndarray) -> "AngleVector":
        k = len(x) // 2
        return cls(x[:k], x[k:])

    @classmethod
    def equatorial(cls, phi: Sequence[float]) -> "AngleVector":
        phi = np.asarray(phi, dtype=float)
        return cls(np.full(phi.shape, np.pi / 2), phi)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.theta, self.phi])

    def wrapped(self) -> "AngleVector":
        """Same projectors with theta in [0, pi] and phi in [0, 2 pi).

        theta -> -theta equals phi -> phi + pi, and theta -> theta + 2 pi is
        a global sign.
        """
        theta = np.mod(self.theta, 2 * np.pi)
        phi = self.phi.copy()
        flip = theta > np.pi
        theta[flip] = 2 * np.pi - theta[flip]
        phi[flip] += np.pi
        return AngleVector(theta, np.mod(phi, 2 * np.pi))

    def theta_rms_deviation(self) -> float:
        """RMS distance of theta from the equator (after wrapping)."""
        return float(np.sqrt(np.mean((self.wrapped().theta - np.pi / 2) ** 2)))


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iterations: int = 2000
    simplex_init_step: float = 0.3
    f_tolerance: float = 1e-9
    seed: int = 0
    polish_rounds: int = 3

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("need at least one restart")
        if self.f_tolerance <= 0:
            raise DomainError("f_tolerance must be positive")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_angles: AngleVector
    best_value: float
    iterations: int
    converged: bool
    restart_values: tuple[float, ...]
    mode: str


def _branch_tensor(rho: Ensemble) -> tuple[np.ndarray, np.ndarray]:
    n = rho.n_qubits
    if n < 3:
        raise DomainError("need at least one measured qubit (n >= 3)")
    return rho.stacked().reshape((-1,) + (2,) * n), rho.weights


def _pair_states(psi: np.ndarray, weights: np.ndarray, angles: AngleVector, all_outcomes: bool):
    """Unnormalized two-qubit operators of qubits 1 and n.

    Returns an array of shape (outcomes, 4, 4); with ``all_outcomes`` false
    only the all-zero outcome string is kept.
    """
    n = psi.ndim - 1
    if len(angles) != n - 2:
        raise DomainError(f"{len(angles)} angle pairs for {n - 2} measured qubits")
    out = psi
    # Contract qubits n-1 .. 2; each contraction appends an outcome axis
    # (all outcomes) or removes the qubit axis (post-selected).
    for q in range(n - 1, 1, -1):
        th, ph = angles.theta[q - 2], angles.phi[q - 2]
        if all_outcomes:
            out = np.tensordot(out, measurement_basis(th, ph), axes=([q], [1]))
        else:
            out = np.tensordot(out, projector_ket(th, ph, 0).conj(), axes=([q], [0]))
    b = out.shape[0]
    if all_outcomes:
        # axes: branch, q1, qn, outcome(q_{n-1}), ..., outcome(q_2)
        out = out.reshape(b, 4, -1)
        k = out.shape[-1]
        out = out.reshape(b, 4, *([2] * (n - 2)))
        out = np.transpose(out, (0, 1) + tuple(range(out.ndim - 1, 1, -1)))
        vec = out.reshape(b, 4, k)
    else:
        vec = out.reshape(b, 4, 1)
    return np.einsum("b,bis,bjs->sij", weights, vec, vec.conj())


def localized_state(rho: Union[Ensemble, PureState], angles: AngleVector, outcomes: Sequence[int] | None = None):
    """Probability and normalized state of qubits (1, n) for one outcome string.

    ``outcomes`` lists bits for qubits 2..n-1 (default all zero).
    """
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    psi, w = _branch_tensor(rho)
    n = rho.n_qubits
    outcomes = [0] * (n - 2) if outcomes is None else list(outcomes)
    if len(outcomes) != n - 2:
        raise DomainError(f"{len(outcomes)} outcome bits for {n - 2} measured qubits")
    # Fold the outcome bits into the angles: bit 1 of (theta, phi) is bit 0 of
    # (theta + pi, phi) up to a global phase.
    shifted = AngleVector(angles.theta + np.pi * np.asarray(outcomes), angles.phi)
    unnorm = _pair_states(psi, w, shifted, all_outcomes=False)[0]
    prob = float(np.trace(unnorm).real)
    if prob < _MIN_PROB:
        raise ImpossibleOutcomeError(f"outcome probability {prob:.3e} is effectively zero")
    return prob, TwoQubitState(unnorm / prob)


def _scores(psi, w, angles: AngleVector, mode: str) -> tuple[float, float]:
    """(search objective, reported concurrence) for one angle setting."""
    if mode == "postselected":
        unnorm = _pair_states(psi, w, angles, all_outcomes=False)
        prob = unnorm[0].trace().real
        if prob < _MIN_PROB:
            return -2.0, 0.0
        raw = float(batched_concurrence_raw(unnorm / prob)[0])
        return raw, min(1.0, max(0.0, raw))
    unnorm = _pair_states(psi, w, angles, all_outcomes=True)
    probs = np.einsum("sii->s", unnorm).real
    ok = probs > _MIN_PROB
    raw = batched_concurrence_raw(unnorm[ok] / probs[ok, None, None])
    avg = min(1.0, float(np.dot(probs[ok], np.clip(raw, 0.0, 1.0))))
    if avg > 0:
        return avg, avg
    return float(np.dot(probs[ok], raw)), 0.0


def localized_objective(rho: Ensemble, angles: AngleVector, mode: str = "postselected") -> float:
    """Concurrence localized by ``angles`` under the given scoring mode."""
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")
    psi, w = _branch_tensor(rho)
    return _scores(psi, w, angles, mode)[1]


def _nelder_mead(f, x0: np.ndarray, cfg: OptimizerConfig):
    k = x0.size
    simplex = np.vstack([x0, x0 + cfg.simplex_init_step * np.eye(k)])
    return minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "maxiter": cfg.max_iterations,
            "maxfev": 4 * cfg.max_iterations,
            "fatol": cfg.f_tolerance,
            "xatol": 1e-7,
        },
    )


def maximize_le(
    rho: Union[Ensemble, PureState], cfg: OptimizerConfig = OptimizerConfig(), mode: str = "postselected"
) -> OptimizationResult:
    """Nelder-Mead search over measurement angles with seeded random restarts.

    Each restart is re-polished from its own end point (fresh simplex) up to
    ``cfg.polish_rounds`` times while it keeps improving.  The best restart
    wins; ties go to the lowest restart index.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}")
    if isinstance(rho, PureState):
        rho = Ensemble.pure(rho)
    psi, w = _branch_tensor(rho)
    n_meas = rho.n_qubits - 2
    rng = np.random.default_rng(cfg.seed)
    starts = np.hstack(
        [rng.uniform(0, np.pi, (cfg.restarts, n_meas)), rng.uniform(0, 2 * np.pi, (cfg.restarts, n_meas))]
    )

    def f(x):
        return -_scores(psi, w, AngleVector.from_flat(x), mode)[0]

    best = None
    values = []
    total_iter = 0
    all_converged = True
    for x0 in starts:
        res = _nelder_mead(f, x0, cfg)
        total_iter += res.nit
        for _ in range(cfg.polish_rounds):
            again = _nelder_mead(f, res.x, cfg)
            total_iter += again.nit
            improved = res.fun - again.fun
            if again.fun <= res.fun:
                res = again
            if improved <= cfg.f_tolerance:
                break
        all_converged &= bool(res.success)
        angles = AngleVector.from_flat(res.x).wrapped()
        value = _scores(psi, w, angles, mode)[1]
        score = -res.fun
        values.append(value)
        if best is None or score > best[0]:
            best = (score, value, angles)
    return OptimizationResult(
        best_angles=best[2],
        best_value=best[1],
        iterations=total_iter,
        converged=all_converged,
        restart_values=tuple(values),
        mode=mode,
    )


def equatorial_check(lam: float, n: int, phi: Sequence[float], outcomes: Sequence[int] | None = None) -> float:
    """Concurrence after equatorial measurements on the n-qubit WC state.

    For ``lam >= 1/2`` this never exceeds ``2 lam - 1``.  Below 1/2 it can be
    positive: on odd chains X measurements on qubits 2, 4, ... map the Z_1
    and Z_n branches onto the same Bell state.
    """
    rho = wc_state(n, lam)
    _, state = localized_state(rho, AngleVector.equatorial(phi), outcomes)
    return concurrence(state)


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def _teleport_unitary(phi: Sequence[float], bits: Sequence[int]) -> np.ndarray:
    """Byproduct ``X^s H(phi)`` chain acting on the last qubit.

    ``H(phi) = [[1, e^{-i phi}], [1, -e^{-i phi}]] / sqrt 2`` comes from
    contracting with the bra of the measured state; the leading Hadamard
    turns ``|phi+>`` into the 2-qubit cluster ``CZ |++>``.
    """
    u = _H.copy()
    for p, s in zip(phi, bits):
        e = np.exp(-1j * p)
        h = np.array([[1, e], [1, -e]], dtype=complex) / np.sqrt(2)
        u = np.linalg.matrix_power(_X, int(s)) @ h @ u
    return u


def equatorial_oracle(lam: float, n: int, phi: Sequence[float], outcomes: Sequence[int] | None = None) -> np.ndarray:
    """Closed-form two-qubit state after equatorial measurements on the WC state.

    Every branch ``Z_j |C_n>`` stays maximally entangled:
    ``Z_1`` becomes ``U Z`` on the last qubit, an interior ``Z_j`` flips
    outcome ``j``, and ``Z_n`` becomes ``Z U``.  All branches keep equal
    outcome probability, so the WC weights carry over unchanged.
    """
    outcomes = [0] * (n - 2) if outcomes is None else list(outcomes)

    def ket(u):
        return np.kron(np.eye(2), u) @ _PHI_PLUS

    u = _teleport_unitary(phi, outcomes)
    kets = [ket(u @ _Z)]
    for j in range(n - 2):
        flipped = list(outcomes)
        flipped[j] ^= 1
        kets.append(ket(_teleport_unitary(phi, flipped)))
    kets.append(ket(_Z @ u))
    rho = lam * np.outer(ket(u), ket(u).conj())
    for k in kets:
        rho = rho + (1 - lam) / n * np.outer(k, k.conj())
    return rho


def wc4_grid_compare(
    lambda_grid: Iterable[float], theta2_grid: Iterable[float], theta3_grid: Iterable[float]
) -> tuple[list[dict], float]:
    """Dense simulation vs closed form for X-Z plane measurements on the 4-qubit WC state."""
    rows = []
    worst = 0.0
    theta2_grid, theta3_grid = list(theta2_grid), list(theta3_grid)
    for lam in lambda_grid:
        rho = wc_state(4, lam)
        for t2 in theta2_grid:
            for t3 in theta3_grid:
                _, state = localized_state(rho, AngleVector([t2, t3], [0.0, 0.0]))
                dense = concurrence(state)
                closed = x_state_concurrence_wc4(lam, t2, t3)
                worst = max(worst, abs(dense - closed))
                rows.append({"lambda": lam, "theta2": t2, "theta3": t3, "dense": dense, "closed_form": closed})
    if not rows:
        raise DomainError("grids must be nonempty")
    return rows, worst


SWEEP_FIELDS = ("lambda", "n", "mode", "best_value", "theta_rms_deviation_from_pi_over_2", "iterations", "converged")


def sweep_to_csv(rows: Iterable[dict], fmt: str = "{:.12g}") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for r in rows:
        writer.writerow([fmt.format(r[k]) if isinstance(r[k], float) else r[k] for k in SWEEP_FIELDS])
    return buf.getvalue()
