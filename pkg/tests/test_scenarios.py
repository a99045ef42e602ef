from __future__ import annotations

import pytest

from fmit.compare import IntegrationMode, compute_cee, match_features
from fmit.merge import ConflictKind, detect_conflicts
from fmit.model import is_well_formed, structurally_equal
from fmit.scenarios import build_scenarios, relationship_count, write_scenario_files
from fmit.xmlio import parse_xml

SCENARIOS = {sc.name: sc for sc in build_scenarios()}


def test_six_scenarios():
    assert len(SCENARIOS) == 6


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_models_are_well_formed(name):
    sc = SCENARIOS[name]
    assert is_well_formed(sc.base)
    assert is_well_formed(sc.other)


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_element_counts(name):
    sc = SCENARIOS[name]
    assert (len(sc.base.features), relationship_count(sc.base)) == sc.expected_base_counts
    assert (len(sc.other.features), relationship_count(sc.other)) == sc.expected_other_counts


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_conflict_counts(name):
    sc = SCENARIOS[name]
    conflicts = detect_conflicts(sc.base, sc.other, match_features(sc.base, sc.other))
    assert len(conflicts) == sc.expected_conflicts


def test_conflict_kind_profiles():
    def kinds(name):
        sc = SCENARIOS[name]
        found = detect_conflicts(sc.base, sc.other, match_features(sc.base, sc.other))
        return [c.kind for c in found]

    assert all(k is ConflictKind.NAME for k in kinds("scenario2"))
    assert all(k is ConflictKind.STRUCTURAL for k in kinds("scenario3"))
    assert all(k is ConflictKind.RELATIONSHIP_KIND for k in kinds("scenario4"))
    s6 = kinds("scenario6")
    assert sum(k is ConflictKind.NAME for k in s6) == 3
    assert sum(k is ConflictKind.RELATIONSHIP_KIND for k in s6) == 4


@pytest.mark.parametrize(
    "name,cee",
    [
        ("scenario1", 1.0),
        ("scenario2", 0.9937),
        ("scenario3", 0.9881),
        ("scenario4", 0.8333),
        ("scenario5", 0.3968),
        ("scenario6", 0.8282),
    ],
)
def test_global_equivalence_values(name, cee):
    sc = SCENARIOS[name]
    report = compute_cee(sc.base, sc.other)
    assert report.cee == pytest.approx(cee, abs=0.0005)


def test_identical_pair_dispatches_automatic():
    report = compute_cee(SCENARIOS["scenario1"].base, SCENARIOS["scenario1"].other)
    assert report.recommended_mode is IntegrationMode.AUTOMATIC


def test_semantic_pair_dispatches_semi_automatic():
    report = compute_cee(SCENARIOS["scenario4"].base, SCENARIOS["scenario4"].other)
    assert report.recommended_mode is IntegrationMode.SEMI_AUTOMATIC


def test_write_scenario_files_round_trips(tmp_path):
    written = write_scenario_files(tmp_path)
    assert len(written) == 12
    for sc in build_scenarios():
        for side, model in (("base", sc.base), ("other", sc.other)):
            parsed = parse_xml((tmp_path / f"{sc.name}_{side}.xml").read_bytes())
            assert parsed.ok
            assert structurally_equal(parsed.model, model)
