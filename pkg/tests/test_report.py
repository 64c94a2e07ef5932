"""JSON report round-trips: exact floats, matrices, channels, files."""

import json

import numpy as np
import pytest

from entropygap import (
    CampaignConfig,
    CampaignReport,
    apply_channel,
    emit_report,
    load_report,
    matrix_from_json,
    matrix_to_json,
    random_hermitian,
    render_report,
    report_from_dict,
    report_to_dict,
    run_campaign,
)
from entropygap import RngStream


def _report(campaign: str = "C1", **overrides) -> CampaignReport:
    base = dict(campaign=campaign, d1=2, d2=2, samples=5, seed=7)
    base.update(overrides)
    return run_campaign(CampaignConfig(**base))


def test_matrix_encoding_shape():
    m = np.array([[1.0 + 2.0j, 0.0], [3.5, -1.0j]])
    encoded = matrix_to_json(m)
    assert encoded == [[[1.0, 2.0], [0.0, 0.0]], [[3.5, 0.0], [0.0, -1.0]]]
    assert np.array_equal(matrix_from_json(encoded), m)


def test_matrix_round_trip_is_bitwise():
    m = random_hermitian(5, RngStream(307, 0))
    through_text = matrix_from_json(json.loads(json.dumps(matrix_to_json(m))))
    assert np.array_equal(through_text, m)


def test_empty_report_round_trips_to_equality():
    report = CampaignReport(
        config=CampaignConfig(campaign="C1", samples=1),
        margins=[],
        violations=0,
        worst_margin=None,
        witness=None,
        errors=[],
        wall_time=0.0,
    )
    assert report_from_dict(report_to_dict(report)) == report


def test_wall_time_is_not_serialized():
    report = _report()
    assert report.wall_time > 0.0
    data = report_to_dict(report)
    assert "wall_time" not in data
    assert "wall_time" not in render_report(report)


def test_identity_run_shows_zero_violations():
    report = _report(function="identity")
    assert '"violations": 0' in render_report(report)


def test_witness_matrices_round_trip_exactly():
    report = _report(campaign="C2")
    recovered = report_from_dict(json.loads(render_report(report)))
    assert recovered.config == report.config
    assert recovered.margins == report.margins
    assert recovered.violations == report.violations
    assert recovered.worst_margin == report.worst_margin
    assert recovered.errors == report.errors
    assert set(recovered.witness) == set(report.witness)
    for key in ("rho", "h"):
        assert np.array_equal(recovered.witness[key], report.witness[key])
    assert recovered.witness["sample"] == report.witness["sample"]


def test_channel_witness_round_trips():
    report = _report(campaign="C3", d2=3, channel_family="pinching")
    recovered = report_from_dict(json.loads(render_report(report)))
    original = report.witness["channel"]
    decoded = recovered.witness["channel"]
    assert decoded.is_conditional_expectation == original.is_conditional_expectation
    assert np.array_equal(decoded.weights, original.weights)
    assert np.array_equal(decoded.unitaries, original.unitaries)
    probe = random_hermitian(6, RngStream(311, 0))
    assert np.array_equal(apply_channel(decoded, probe), apply_channel(original, probe))


def test_render_is_deterministic():
    a = render_report(_report())
    b = render_report(_report())
    assert a == b


def test_emit_and_load(tmp_path):
    report = _report(campaign="C8")
    path = tmp_path / "report.json"
    emit_report(report, path)
    loaded = load_report(path)
    assert loaded.margins == report.margins
    assert loaded.wall_time == 0.0
    # A second emit produces identical bytes.
    text = path.read_bytes()
    emit_report(report, path)
    assert path.read_bytes() == text


def test_emit_reports_unwritable_path():
    report = _report()
    with pytest.raises(OSError, match="no-such-directory"):
        emit_report(report, "/no-such-directory/report.json")


def test_load_reports_missing_path(tmp_path):
    with pytest.raises(OSError, match="missing.json"):
        load_report(tmp_path / "missing.json")
