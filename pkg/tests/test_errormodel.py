import csv
import itertools
import json
from pathlib import Path

import numpy as np
import pytest

from zxzcert.bounds import le_floor_segment
from zxzcert.densesim import cluster_state, expectation
from zxzcert.errormodel import (
    SourceParams,
    _run_circuit,
    compare_ranges,
    correlator_analytic,
    crossing_points,
    emit_state,
    error_images,
    le3_values,
    segment_triplet,
    zxz_value,
)
from zxzcert.errors import DomainError, ResourceError
from zxzcert.pauli import PauliString, cluster_generators, compose, surviving_triplet

GOLDEN = Path(__file__).parent / "golden"


def test_error_free_source_is_cluster():
    rho = emit_state(SourceParams(4, 0.0))
    assert len(rho.branches) == 1
    assert rho.branches[0][1].fidelity(cluster_state(5)) == pytest.approx(1, abs=1e-12)
    for g in cluster_generators(5):
        assert expectation(rho, g) == pytest.approx(1, abs=1e-12)


def test_weak_translational_invariance():
    rho = emit_state(SourceParams(5, 0.05))
    g = cluster_generators(6)
    # photons 1..5 then the spin; K_5 touches the spin and is not interior
    interior = [expectation(rho, g[i]) for i in range(2, 5)]
    np.testing.assert_allclose(interior, zxz_value(0.05), atol=1e-12)


def test_error_images_by_dense_conjugation():
    """A Y error before emission j equals its image applied at the output."""
    n = 4
    base = emit_state(SourceParams(n, 0.0)).branches[0][1]
    for j, image in enumerate(error_images(n)):
        pattern = [0] * n
        pattern[j] = 1
        hit = _run_circuit(n, pattern)
        moved = image.to_matrix() @ base.amplitudes
        assert abs(np.vdot(hit, moved)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("p", [0.0, 0.02, 0.1, 0.3])
def test_analytic_matches_dense(n, p):
    params = SourceParams(n, p)
    rho = emit_state(params)
    g = cluster_generators(n + 1)
    rng = np.random.default_rng(n)
    masks = list(itertools.product((0, 1), repeat=n + 1))
    for k in rng.choice(len(masks), size=min(len(masks), 24), replace=False):
        op = compose(g, [i + 1 for i, b in enumerate(masks[k]) if b]).operator
        assert correlator_analytic(op, params) == pytest.approx(expectation(rho, op), abs=1e-10)


def test_analytic_limits():
    g = cluster_generators(6)
    for i in range(1, 7):
        assert correlator_analytic(g[i], SourceParams(5, 0.0)) == 1
    assert correlator_analytic(g[3], SourceParams(5, 0.5)) == pytest.approx(0)
    assert correlator_analytic(g[3].negate(), SourceParams(5, 0.0)) == -1
    with pytest.raises(DomainError):
        correlator_analytic(PauliString.from_label("ZIIIII"), SourceParams(5, 0.1))


def test_dense_limit_guard():
    with pytest.raises(ResourceError):
        emit_state(SourceParams(6, 0.1, dense_limit=5))
    with pytest.raises(DomainError):
        SourceParams(3, 0.7)


def test_segment_triplet_matches_dense_chain():
    """Clipped-segment triplet equals the full-chain stabilizer value on a dense emission."""
    p, n = 0.07, 4
    rho = emit_state(SourceParams(n + 2, p))
    full = cluster_generators(n + 3)
    for bases in ("XY", "YY", "XX"):
        dense = [
            expectation(rho, compose(full, [i + 1 for i in el.generator_indices]).operator)
            for el in surviving_triplet(n, bases)
        ]
        np.testing.assert_allclose(segment_triplet(p, n, bases), dense, atol=1e-12)


def test_le3_values():
    assert le3_values(0.0) == pytest.approx((1.0, 1.0))
    for p in (0.001, 0.01, 0.03):
        direct, zxz = le3_values(p)
        assert direct > zxz
        assert zxz == pytest.approx(le_floor_segment(zxz_value(p), 5))


def test_compare_ranges_properties():
    grid = np.linspace(0, 0.2, 30)
    rows = compare_ranges(grid, max_span=40)
    assert rows[0]["zxz_range"] == rows[0]["direct_range"] == 40
    for prev, row in zip(rows, rows[1:]):
        assert row["zxz_range"] <= prev["zxz_range"]
        assert row["direct_range"] <= prev["direct_range"]
    assert all(r["direct_range"] >= r["zxz_range"] for r in rows)
    gaps = [le3_values(p)[0] - le3_values(p)[1] for p in (1e-2, 1e-3, 1e-4, 1e-5)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_crossing_points_golden():
    golden = json.loads((GOLDEN / "crossing_points.json").read_text())
    cp = crossing_points()
    assert cp["zxz"] == pytest.approx(golden["zxz"], abs=1e-12)
    assert cp["direct"] == pytest.approx(golden["direct"], abs=1e-10)
    assert cp["zxz"] < cp["direct"]


def test_compare_table_golden():
    with open(GOLDEN / "compare.csv") as fh:
        rows = list(csv.DictReader(fh))
    grid = [float(r["p"]) for r in rows]
    fresh = compare_ranges(grid, max_span=30)
    for old, new in zip(rows, fresh):
        assert int(old["zxz_range"]) == new["zxz_range"]
        assert int(old["direct_range"]) == new["direct_range"]
        assert float(old["le3_direct"]) == pytest.approx(new["le3_direct"], abs=1e-11)
        assert float(old["le3_zxz"]) == pytest.approx(new["le3_zxz"], abs=1e-11)
