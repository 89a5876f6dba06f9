import csv
import io
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zxzcert.bounds import (
    CSV_FIELDS,
    BoundReport,
    direct_bound,
    fef_floor_from_triplet,
    fidelity_floor,
    fidelity_floor_general,
    le_floor_pair,
    le_floor_segment,
    max_certified_span,
    reports_to_csv,
    teleport_floor,
    teleport_floor_raw,
    threshold_z,
    threshold_z_exact,
    wc_lambda,
    wc_triplet_sum,
    wc_z,
)
from zxzcert.densesim import expectation, fidelity_with_cluster, wc_state
from zxzcert.entanglement import teleport_fidelity
from zxzcert.errors import DomainError, InconsistentCorrelatorsError, NoWCStateError
from zxzcert.pauli import cluster_generators


def test_le_floor_pair():
    assert le_floor_pair(1.0, 9) == 1
    assert le_floor_pair(6 / 7, 6) == pytest.approx(0, abs=1e-15)
    assert le_floor_pair(6 / 7, 5) == pytest.approx(1 / 7)
    with pytest.raises(DomainError):
        le_floor_pair(0.9, 0)


def test_le_floor_segment():
    assert le_floor_segment(1.0, 12) == 1
    z = wc_z(0.9, 7)
    assert le_floor_segment(z, 7) == pytest.approx(0.8)
    assert le_floor_segment(2 / 3, 3) == pytest.approx(0, abs=1e-15)


def test_thresholds_exact():
    assert threshold_z_exact(5) == Fraction(6, 7)
    assert threshold_z_exact(20) == Fraction(21, 22)
    assert threshold_z_exact(1) == Fraction(2, 3)
    assert threshold_z(5) == pytest.approx(0.8571, abs=1e-4)
    assert threshold_z(20) == pytest.approx(0.9545, abs=1e-4)


@given(st.floats(0.0, 0.9999), st.integers(1, 400))
def test_max_certified_span_matches_scan(z, cap):
    expected = 0
    for m in range(1, cap + 1):
        if le_floor_pair(z, m + 1) > 0:
            expected = m
        else:
            break
    assert max_certified_span(z, cap=cap) == expected


def test_max_certified_span_at_one():
    assert max_certified_span(1.0, cap=17) == 17
    with pytest.raises(DomainError):
        max_certified_span(1.0)


def test_direct_bound_examples():
    assert direct_bound(1, 1, 1) == pytest.approx(1)
    assert direct_bound(0.9, 0.9, 0.9) == pytest.approx(0.85)
    with pytest.raises(InconsistentCorrelatorsError):
        direct_bound(1, 1, -1)


def test_fidelity_floors():
    assert fidelity_floor_general([1, 1, 1]) == 1
    assert fidelity_floor_general([0.9] * 4) == pytest.approx(0.8)
    for lam in (0.2, 0.6, 0.95):
        rho = wc_state(6, lam)
        gens = [expectation(rho, g) for g in cluster_generators(6)]
        assert fidelity_floor_general(gens) == pytest.approx(fidelity_with_cluster(rho), abs=1e-12)
    assert fidelity_floor(0.9, 4) == pytest.approx(0.8)


def test_fef_floor():
    assert fef_floor_from_triplet(3) == 1
    assert fef_floor_from_triplet(1) == 0.5
    for n in (3, 5, 8):
        for z in (0.85, 0.95):
            assert fef_floor_from_triplet(wc_triplet_sum(z, n)) == pytest.approx(1 - n * (1 - z) / 2, abs=1e-12)


def test_teleport_floor():
    assert teleport_floor(1, 9) == 1
    assert teleport_floor(0.9, 3) == pytest.approx(0.9)
    assert teleport_floor(0.1, 20) == 0.5
    for n in range(3, 12):
        for z in np.linspace(1 - 1.5 / n, 1, 7):
            # z >= 1 - 1.5/n keeps the triplet sum nonnegative
            chain = teleport_fidelity(fef_floor_from_triplet(wc_triplet_sum(z, n)))
            assert abs(chain - teleport_floor_raw(z, n)) < 1e-12


def test_wc_lambda():
    assert wc_lambda(1, 5) == 1
    assert wc_lambda(0.9, 4) == pytest.approx(0.8)
    with pytest.raises(NoWCStateError):
        wc_lambda(0.7, 10)
    for n in (3, 6):
        assert wc_z(wc_lambda(0.93, n), n) == pytest.approx(0.93)


def test_bound_report_values_and_kinds():
    r = BoundReport.from_z(0.9, 1)
    assert r.segment_size == 3
    assert r.le_floor == pytest.approx(0.7)
    assert r.teleport_floor == pytest.approx(0.9)
    s = BoundReport.from_z(0.9, 3, span_kind="segment")
    assert s.to_dict() == {**r.to_dict(), "span": 3, "span_kind": "segment"}
    low = BoundReport.from_z(0.5, 10)
    assert low.le_floor == 0 and low.le_floor_raw < 0
    assert low.teleport_floor == 0.5
    with pytest.raises(DomainError):
        BoundReport.from_z(0.9, 1, span_kind="pairs")


def test_bound_report_json_and_csv():
    reports = [BoundReport.from_z(0.95, k, method="hoeffding", confidence=0.99) for k in (1, 2, 3)]
    for r in reports:
        assert BoundReport.from_dict(json.loads(r.to_json())) == r
    rows = list(csv.reader(io.StringIO(reports_to_csv(reports))))
    assert tuple(rows[0]) == CSV_FIELDS
    assert float(rows[2][2]) == pytest.approx(reports[1].le_floor, rel=1e-11)
