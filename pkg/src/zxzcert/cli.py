"""Command-line entry points.

Every command writes CSV or JSON.  With ``--out`` the result is written
atomically and a run manifest (``<out>.manifest.json``) is placed next to
it; ``zxzcert replay`` re-runs a manifest and checks the checksums.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bounds import threshold_z_exact, wc_lambda
from .densesim import DENSE_LIMIT_ENV, _check_size, expectation, fidelity_with_cluster, wc_state
from .errormodel import SourceParams, compare_ranges, crossing_points
from .errors import DomainError, InsufficientDataError, ResourceError
from .estimation import (
    DEFAULT_DELTA,
    ExperimentPlan,
    certified_report,
    estimate_correlator,
    plan_samples,
    simulate_tally,
)
from .localize import MODES, SWEEP_FIELDS, OptimizerConfig, maximize_le
from .pauli import cluster_generators, compose

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_INSUFFICIENT = 3
EXIT_RESOURCE = 4

MANIFEST_SCHEMA = "zxzcert.manifest/1"
SIG_DIGITS = 12


def fmt_float(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _round_floats(obj):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(fmt_float(x))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2, sort_keys=True) + "\n"


def to_csv(header: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow(
            [fmt_float(r[k]) if isinstance(r[k], (float, np.floating)) else r[k] for k in header]
        )
    return buf.getvalue()


def _table(header: Sequence[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return to_json({"columns": list(header), "rows": [{k: r[k] for k in header} for r in rows]})
    return to_csv(header, rows)


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zxzcert-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    version: str = __version__
    checksums: dict = field(default_factory=dict)
    schema: str = MANIFEST_SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        if data.get("schema") != MANIFEST_SCHEMA:
            raise DomainError(f"unsupported manifest schema {data.get('schema')!r}")
        return cls(**data)


# ---------------------------------------------------------------------------
# commands; each returns the output text


def wc_verify_report(n: int, z: float) -> dict:
    """Compare every stabilizer expectation of the WC state with ``m (z - 1) + 1``."""
    lam = wc_lambda(z, n)
    _check_size(n)
    rho = wc_state(n, lam)
    gens = cluster_generators(n)
    worst = 0.0
    for mask in itertools.product((0, 1), repeat=n):
        idx = [i + 1 for i, b in enumerate(mask) if b]
        el = compose(gens, idx)
        worst = max(worst, abs(expectation(rho, el.operator) - (el.m * (z - 1.0) + 1.0)))
    fid = fidelity_with_cluster(rho)
    expected = 1.0 - n * (1.0 - z) / 2.0
    return {
        "n": n,
        "z": z,
        "lambda": lam,
        "stabilizer_count": 2**n,
        "max_backbone_deviation": worst,
        "fidelity": fid,
        "fidelity_expected": expected,
        "fidelity_deviation": abs(fid - expected),
    }


def cmd_thresholds(args) -> str:
    if args.max_measured < 1:
        raise DomainError("--max-measured must be at least 1")
    rows = []
    for m in range(1, args.max_measured + 1):
        t = threshold_z_exact(m)
        rows.append({"measured_qubits": m, "threshold_z_exact": f"{t.numerator}/{t.denominator}", "threshold_z": float(t)})
    return _table(("measured_qubits", "threshold_z_exact", "threshold_z"), rows, args.format)


def cmd_wc_verify(args) -> str:
    return to_json(wc_verify_report(args.n, args.z))


COMPARE_FIELDS = ("p", "zxz_value", "zxz_range", "direct_range", "le3_direct", "le3_zxz")


def cmd_compare(args) -> str:
    if not 0.0 <= args.p_min < args.p_max <= 0.5:
        raise DomainError("need 0 <= p_min < p_max <= 1/2")
    if args.steps < 2:
        raise DomainError("--steps must be at least 2")
    grid = np.linspace(args.p_min, args.p_max, args.steps)
    rows = compare_ranges(grid, args.max_span)
    if args.format == "json":
        return to_json({"columns": list(COMPARE_FIELDS), "rows": rows, "crossing_points": crossing_points()})
    return to_csv(COMPARE_FIELDS, rows)


def cmd_localize(args) -> str:
    if not 3 <= args.n <= 9:
        raise DomainError("--n must lie in 3..9")
    cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    rows = []
    for lam in args.lam:
        res = maximize_le(wc_state(args.n, lam), cfg, args.mode)
        rows.append(
            {
                "lambda": float(lam),
                "n": args.n,
                "mode": args.mode,
                "best_value": res.best_value,
                "theta_rms_deviation_from_pi_over_2": res.best_angles.theta_rms_deviation(),
                "iterations": res.iterations,
                "converged": str(res.converged).lower(),
            }
        )
    return _table(SWEEP_FIELDS, rows, args.format)


def cmd_estimate(args) -> str:
    n_photons = max(args.n, 3)
    source = SourceParams(n_photons, args.p, dense_limit=0)
    plan = ExperimentPlan(efficiency=args.eta, windows=args.windows, seed=args.seed)
    est = estimate_correlator(simulate_tally(source, plan), delta=args.delta)
    reports = certified_report(est, args.spans)
    return to_json(
        {
            "source": {"n_photons": n_photons, "p_y": args.p},
            "efficiency": args.eta,
            "windows": args.windows,
            "estimate": est.to_dict(),
            "reports": [r.to_dict() for r in reports],
        }
    )


def cmd_plan(args) -> str:
    complete, windows = plan_samples(args.eta, args.epsilon, args.delta)
    return to_json(
        {"eta": args.eta, "epsilon": args.epsilon, "delta": args.delta, "complete_triples": complete, "windows": windows}
    )


COMMANDS: dict[str, Callable] = {
    "thresholds": cmd_thresholds,
    "wc-verify": cmd_wc_verify,
    "compare": cmd_compare,
    "localize": cmd_localize,
    "estimate": cmd_estimate,
    "plan": cmd_plan,
}
SEEDED = {"localize", "estimate"}


# ---------------------------------------------------------------------------
# argument parsing


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zxzcert",
        description="Certify cluster-state resources from three-qubit correlators.",
        epilog=(
            f"Environment: {DENSE_LIMIT_ENV} overrides the dense-simulation qubit limit. "
            "Exit codes: 0 success, 2 domain error, 3 insufficient data, 4 resource limit."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fmt_default="csv"):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--out", help="write output here (atomically) plus <out>.manifest.json")
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default, help="output format")
        return p

    p = add("thresholds", "Threshold <ZXZ> values certifying LE across 1..N measured qubits.")
    p.add_argument("--max-measured", type=int, default=20)

    p = add("wc-verify", "Check backbone saturation and fidelity of the worst-case state.", "json")
    p.add_argument("--n", type=int, required=True, help="chain length")
    p.add_argument("--z", type=float, required=True, help="<ZXZ> value")

    p = add("compare", "Certified ranges of the <ZXZ> and direct bounds under Y errors.")
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=0.15)
    p.add_argument("--steps", type=int, default=31)
    p.add_argument("--max-span", type=int, default=30)

    p = add("localize", "Optimize measurement angles on worst-case states.")
    p.add_argument("--n", type=int, default=7, help="chain length (3..9)")
    p.add_argument(
        "--lambda", dest="lam", type=_float_list, default=[0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        help="comma-separated cluster weights",
    )
    p.add_argument("--mode", choices=MODES, default="postselected")
    p.add_argument("--restarts", type=int, default=OptimizerConfig.restarts)
    p.add_argument("--seed", type=int, default=0)

    p = add("estimate", "Simulate a lossy <ZXZ> experiment and certify bounds.", "json")
    p.add_argument("--p", type=float, required=True, help="Y-error probability of the source")
    p.add_argument("--eta", type=float, required=True, help="per-photon detection efficiency")
    p.add_argument("--windows", type=int, required=True, help="three-photon windows attempted")
    p.add_argument("--n", type=int, default=5, help="photons per emitted chain")
    p.add_argument("--spans", type=_int_list, default=[1, 2, 3], help="comma-separated measured-qubit spans")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="1 - confidence")
    p.add_argument("--seed", type=int, default=0)

    p = add("plan", "Windows needed for a target precision.", "json")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)

    p = sub.add_parser("replay", help="Re-run a manifest and verify its checksums.")
    p.add_argument("manifest")
    p.add_argument("--out", help="where to write the regenerated output")
    return parser


def _parameters(args) -> dict:
    skip = {"command", "out"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def run(args) -> str:
    return COMMANDS[args.command](args)


def _replay(args, parser) -> int:
    with open(args.manifest) as fh:
        manifest = RunManifest.from_json(fh.read())
    ns = argparse.Namespace(command=manifest.command, out=args.out, **manifest.parameters)
    text = run(ns)
    if args.out:
        atomic_write(args.out, text)
    ok = sha256(text) == manifest.checksums.get("output")
    print(f"replay {'matches' if ok else 'DIFFERS FROM'} manifest checksum", file=sys.stderr)
    return EXIT_OK if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args, parser)
        text = run(args)
        if args.out:
            atomic_write(args.out, text)
            params = _parameters(args)
            manifest = RunManifest(
                command=args.command,
                parameters=params,
                seed=params.get("seed") if args.command in SEEDED else None,
                checksums={"output": sha256(text)},
            )
            atomic_write(args.out + ".manifest.json", manifest.to_json())
        else:
            sys.stdout.write(text)
    except InsufficientDataError as exc:
        print(f"zxzcert: insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except ResourceError as exc:
        print(f"zxzcert: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, ValueError) as exc:
        print(f"zxzcert: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
