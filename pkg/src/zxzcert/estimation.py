"""Lossy photon-detection simulation and certified correlator estimates.

A trial looks at a window of three consecutive photons, measures each in a
Pauli basis and records +1, -1 or a loss.  Only complete (threefold
coincidence) windows enter the estimate.  Loss is independent of the
outcomes, so postselecting on coincidences does not bias the mean.

Hoeffding intervals are the certification route.  Outcome products lie in
[-1, 1], a range of width 2, so the correlator half-width at confidence
``1 - delta`` is ``2 * sqrt(ln(2/delta) / (2 n))``; equivalently
``sqrt(ln(2/delta) / (2 n))`` bounds the frequency of even products,
``(1 + <P>) / 2``.  :func:`plan_samples` works on that frequency scale.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.stats import norm

from .bounds import BoundReport, direct_bound
from .densesim import Ensemble, reduce_to
from .errormodel import SourceParams, correlator_analytic
from .errors import DomainError, InsufficientDataError
from .pauli import PauliString, cluster_generators, decompose

__all__ = [
    "ClickRecord",
    "ExperimentPlan",
    "CorrelatorEstimate",
    "CountTally",
    "window_distribution",
    "simulate_clicks",
    "simulate_tally",
    "estimate_correlator",
    "estimate_from_counts",
    "certified_report",
    "certified_direct_bound",
    "plan_samples",
    "hoeffding_half_width",
    "records_to_jsonl",
    "records_from_jsonl",
    "records_to_csv",
    "records_from_csv",
]

CLICKS_SCHEMA = "zxzcert.clicks/1"
ESTIMATE_SCHEMA = "zxzcert.estimate/1"
DEFAULT_DELTA = 0.01
WINDOW = 3

_EIGVECS = {
    "Z": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
}

# Outcome patterns in the order used by every distribution: bit 1 means -1.
_PATTERNS = np.array(list(itertools.product((1, -1), repeat=WINDOW)))


@dataclass(frozen=True)
class ClickRecord:
    """One window; ``None`` in ``outcomes`` marks a lost photon."""

    trial_id: int
    window_start: int
    settings: str
    outcomes: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.settings) != len(self.outcomes):
            raise DomainError("settings and outcomes differ in length")
        if any(o not in (1, -1, None) for o in self.outcomes):
            raise DomainError("outcomes must be +1, -1 or None (lost)")

    @property
    def complete(self) -> bool:
        return all(o is not None for o in self.outcomes)

    @property
    def product(self) -> int:
        if not self.complete:
            raise DomainError("incomplete window has no outcome product")
        return int(np.prod(self.outcomes))


@dataclass(frozen=True)
class ExperimentPlan:
    """Measurement schedule.

    Trial ``t`` uses setting ``basis_cycle[t % len(basis_cycle)]`` on the
    window starting at ``positions[(t // len(basis_cycle)) % len(positions)]``.
    ``positions`` defaults to every window that fits inside the chain.
    """

    basis_cycle: tuple[str, ...] = ("ZXZ",)
    efficiency: float = 1.0
    windows: int = 1000
    seed: int = 0
    positions: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise DomainError(f"efficiency {self.efficiency} outside (0, 1]")
        if self.windows < 1:
            raise DomainError("need at least one window")
        cycle = tuple(s.upper() for s in self.basis_cycle)
        if not cycle or any(len(s) != WINDOW or set(s) - set("XYZ") for s in cycle):
            raise DomainError("each setting must be three letters from X, Y, Z")
        object.__setattr__(self, "basis_cycle", cycle)


@dataclass(frozen=True)
class CorrelatorEstimate:
    mean: float
    n_complete: int
    n_total: int
    ci_low: float
    ci_high: float
    confidence: float
    method: str = "hoeffding"
    setting: str = "ZXZ"
    normal_ci: tuple[float, float] = field(default=(float("nan"), float("nan")))

    def __post_init__(self):
        if not self.ci_low <= self.mean <= self.ci_high:
            raise AssertionError("interval does not contain the mean")
        if self.n_complete > self.n_total:
            raise DomainError("more complete windows than windows")

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["normal_ci"] = list(self.normal_ci)
        d["schema"] = ESTIMATE_SCHEMA
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "CorrelatorEstimate":
        data = {k: v for k, v in data.items() if k != "schema"}
        data["normal_ci"] = tuple(data.get("normal_ci", (float("nan"),) * 2))
        return cls(**data)


@dataclass(frozen=True)
class CountTally:
    """Aggregated outcomes of one (window, setting) configuration."""

    window_start: int
    settings: str
    n_total: int
    pattern_counts: tuple[int, ...]

    @property
    def n_complete(self) -> int:
        return int(sum(self.pattern_counts))

    @property
    def n_even(self) -> int:
        signs = np.prod(_PATTERNS, axis=1)
        return int(sum(c for c, s in zip(self.pattern_counts, signs) if s > 0))


# ---------------------------------------------------------------------------
# Born distributions


def _ensemble_distribution(rho: Ensemble, start: int, settings: str) -> np.ndarray:
    qubits = [start + k for k in range(WINDOW)]
    if qubits[-1] > rho.n_qubits or start < 1:
        raise DomainError(f"window at {start} does not fit in {rho.n_qubits} qubits")
    local = reduce_to(rho, qubits)
    basis = _EIGVECS[settings[0]]
    for s in settings[1:]:
        basis = np.kron(basis, _EIGVECS[s])
    amps = local.stacked() @ basis.conj()
    probs = np.dot(local.weights, np.abs(amps) ** 2)
    return probs / probs.sum()


@lru_cache(maxsize=256)
def _source_distribution(params: SourceParams, start: int, settings: str) -> np.ndarray:
    """Joint outcome distribution from Pauli correlators.

    ``P(o) = 2^-3 sum_S prod_{i in S} o_i <P_S>``; on a Pauli-error mixture
    of the cluster, ``<P_S>`` vanishes unless ``P_S`` is plus or minus a
    stabilizer.
    """
    n = params.n_photons
    if start < 1 or start + WINDOW - 1 > n:
        raise DomainError(f"window at {start} does not fit in {n} photons")
    gens = cluster_generators(params.n_qubits)
    probs = np.zeros(len(_PATTERNS))
    for mask in itertools.product((0, 1), repeat=WINDOW):
        body = ["I"] * params.n_qubits
        for k, on in enumerate(mask):
            if on:
                body[start - 1 + k] = settings[k]
        op = PauliString.from_label("".join(body))
        if not any(mask):
            value = 1.0
        elif decompose(gens, op) is None:
            value = 0.0
        else:
            value = correlator_analytic(op, params)
        chars = np.prod(np.where(np.array(mask, bool), _PATTERNS, 1), axis=1)
        probs += chars * value
    probs /= 2**WINDOW
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def window_distribution(source: Union[Ensemble, SourceParams], start: int, settings: str) -> np.ndarray:
    """Probabilities of the 8 outcome patterns (+1 before -1 per photon)."""
    settings = settings.upper()
    if isinstance(source, SourceParams):
        return _source_distribution(source, start, settings)
    return _ensemble_distribution(source, start, settings)


def _chain_length(source: Union[Ensemble, SourceParams]) -> int:
    return source.n_photons if isinstance(source, SourceParams) else source.n_qubits


def _positions(source, plan: ExperimentPlan) -> tuple[int, ...]:
    positions = plan.positions or tuple(range(1, _chain_length(source) - WINDOW + 2))
    if not positions:
        raise DomainError("chain is shorter than a three-photon window")
    return tuple(positions)


def _schedule(source, plan: ExperimentPlan) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    positions = _positions(source, plan)
    t = np.arange(plan.windows)
    n_set = len(plan.basis_cycle)
    setting_idx = t % n_set
    pos_idx = (t // n_set) % len(positions)
    return setting_idx, pos_idx, tuple(positions)


# ---------------------------------------------------------------------------
# simulation


def simulate_clicks(source: Union[Ensemble, SourceParams], plan: ExperimentPlan) -> list[ClickRecord]:
    """Seeded per-window records, losses included."""
    setting_idx, pos_idx, positions = _schedule(source, plan)
    rng = np.random.default_rng(plan.seed)
    u = rng.random(plan.windows)
    detected = rng.random((plan.windows, WINDOW)) < plan.efficiency
    patterns = np.empty(plan.windows, dtype=np.int64)
    for si, setting in enumerate(plan.basis_cycle):
        for pi, start in enumerate(positions):
            sel = (setting_idx == si) & (pos_idx == pi)
            if not np.any(sel):
                continue
            cdf = np.cumsum(window_distribution(source, start, setting))
            patterns[sel] = np.minimum(np.searchsorted(cdf, u[sel], side="right"), len(cdf) - 1)
    records = []
    for t in range(plan.windows):
        outs = tuple(
            int(o) if d else None for o, d in zip(_PATTERNS[patterns[t]], detected[t])
        )
        records.append(ClickRecord(t, positions[pos_idx[t]], plan.basis_cycle[setting_idx[t]], outs))
    return records


def simulate_tally(source: Union[Ensemble, SourceParams], plan: ExperimentPlan) -> list[CountTally]:
    """Multinomial counts per configuration, for window counts too large to list."""
    positions = _positions(source, plan)
    rng = np.random.default_rng(plan.seed)
    p_complete = plan.efficiency**WINDOW
    n_set = len(plan.basis_cycle)
    tallies = []
    for si, setting in enumerate(plan.basis_cycle):
        # trials t = c * n_set + si with c < cycles; position index is c mod len
        cycles = -(-(plan.windows - si) // n_set) if plan.windows > si else 0
        for pi, start in enumerate(positions):
            n_cfg = (cycles - pi - 1) // len(positions) + 1 if pi < cycles else 0
            if n_cfg == 0:
                continue
            dist = window_distribution(source, start, setting)
            cell = np.append(dist * p_complete, 1.0 - p_complete)
            counts = rng.multinomial(n_cfg, np.clip(cell, 0.0, None) / cell.sum())
            tallies.append(CountTally(start, setting, n_cfg, tuple(int(c) for c in counts[:-1])))
    return tallies


# ---------------------------------------------------------------------------
# estimation


def hoeffding_half_width(n: int, delta: float, value_range: float = 2.0) -> float:
    """Two-sided Hoeffding half-width for a mean of ``n`` bounded samples."""
    if n < 1:
        raise InsufficientDataError("no samples")
    return value_range * math.sqrt(math.log(2.0 / delta) / (2.0 * n))


def estimate_from_counts(
    n_even: int,
    n_complete: int,
    n_total: int,
    delta: float = DEFAULT_DELTA,
    setting: str = "ZXZ",
    method: str = "hoeffding",
) -> CorrelatorEstimate:
    if n_complete < 1:
        raise InsufficientDataError("no complete coincidence windows")
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    mean = (2.0 * n_even - n_complete) / n_complete
    var = max(0.0, 1.0 - mean**2) * n_complete / max(n_complete - 1, 1)
    zq = norm.ppf(1.0 - delta / 2.0)
    nw = zq * math.sqrt(var / n_complete)
    normal_ci = (float(max(-1.0, mean - nw)), float(min(1.0, mean + nw)))
    if method == "hoeffding":
        eps = hoeffding_half_width(n_complete, delta)
        lo, hi = max(-1.0, mean - eps), min(1.0, mean + eps)
    elif method == "normal":
        lo, hi = normal_ci
    else:
        raise DomainError(f"unknown interval method {method!r}")
    return CorrelatorEstimate(
        mean=mean,
        n_complete=int(n_complete),
        n_total=int(n_total),
        ci_low=lo,
        ci_high=hi,
        confidence=1.0 - delta,
        method=method,
        setting=setting,
        normal_ci=normal_ci,
    )


def estimate_correlator(
    records: Union[Iterable[ClickRecord], Iterable[CountTally]],
    delta: float = DEFAULT_DELTA,
    setting: str = "ZXZ",
    method: str = "hoeffding",
) -> CorrelatorEstimate:
    """Mean outcome product over complete windows with the given setting.

    Windows with a lost photon count toward ``n_total`` only.
    """
    setting = setting.upper()
    n_even = n_complete = n_total = 0
    for item in records:
        if item.settings != setting:
            continue
        if isinstance(item, CountTally):
            n_total += item.n_total
            n_complete += item.n_complete
            n_even += item.n_even
            continue
        n_total += 1
        if item.complete:
            n_complete += 1
            n_even += item.product > 0
    return estimate_from_counts(n_even, n_complete, n_total, delta, setting, method)


def certified_report(
    est: CorrelatorEstimate, spans: Sequence[int], span_kind: str = "measured"
) -> list[BoundReport]:
    """Bound reports evaluated at the lower confidence limit of ``<ZXZ>``."""
    return [
        BoundReport.from_z(est.ci_low, s, span_kind, method=est.method, confidence=est.confidence)
        for s in spans
    ]


def certified_direct_bound(estimates: Sequence[CorrelatorEstimate]) -> float:
    """Direct bound from three estimated correlators, each shrunk toward 0 by its half-width."""
    if len(estimates) != 3:
        raise DomainError("the direct bound needs exactly three correlators")
    shrunk = []
    for e in estimates:
        eps = e.mean - e.ci_low if e.mean >= 0 else e.ci_high - e.mean
        shrunk.append(math.copysign(max(0.0, abs(e.mean) - eps), e.mean))
    return direct_bound(*shrunk)


def plan_samples(eta: float, epsilon: float, delta: float) -> tuple[int, int]:
    """Complete windows and total windows for a target precision.

    ``epsilon`` is the Hoeffding half-width on the even-product frequency
    (half the correlator half-width) at confidence ``1 - delta``.
    """
    for name, v in (("eta", eta), ("epsilon", epsilon), ("delta", delta)):
        if not 0.0 < v <= (1.0 if name == "eta" else 1.0 - 1e-15):
            raise DomainError(f"{name} = {v} outside (0, 1)")
    complete = math.ceil(math.log(2.0 / delta) / (2.0 * epsilon**2))
    windows = math.ceil(complete / eta**WINDOW)
    return complete, windows


# ---------------------------------------------------------------------------
# persistence


def _outcome_char(o: Optional[int]) -> str:
    return "L" if o is None else ("+" if o == 1 else "-")


def records_to_jsonl(records: Iterable[ClickRecord]) -> str:
    lines = []
    for r in records:
        lines.append(
            json.dumps(
                {
                    "schema": CLICKS_SCHEMA,
                    "trial": r.trial_id,
                    "window": r.window_start,
                    "settings": r.settings,
                    "outcomes": list(r.outcomes),
                }
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def records_from_jsonl(text: str) -> list[ClickRecord]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        if d.get("schema") != CLICKS_SCHEMA:
            raise DomainError(f"unsupported record schema {d.get('schema')!r}")
        out.append(ClickRecord(d["trial"], d["window"], d["settings"], tuple(d["outcomes"])))
    return out


def records_to_csv(records: Iterable[ClickRecord]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {CLICKS_SCHEMA}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("trial", "window", "settings", "outcomes"))
    for r in records:
        writer.writerow((r.trial_id, r.window_start, r.settings, "".join(map(_outcome_char, r.outcomes))))
    return buf.getvalue()


def records_from_csv(text: str) -> list[ClickRecord]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# schema: {CLICKS_SCHEMA}":
        raise DomainError("missing or unsupported CSV schema line")
    decode = {"+": 1, "-": -1, "L": None}
    out = []
    for row in csv.DictReader(lines[1:]):
        outs = tuple(decode[c] for c in row["outcomes"])
        out.append(ClickRecord(int(row["trial"]), int(row["window"]), row["settings"], outs))
    return out
