import json
from fractions import Fraction

import pytest

from archdd.decisions import DecisionKind
from archdd.errors import ConfigError
from archdd.pipeline import RunConfig, run_pipeline

from conftest import write_mini_project


def test_mini_project_matches_hand_derived_ledger(mini_project):
    config = RunConfig.from_file(mini_project)
    result = run_pipeline(config, write=False)
    assert not result.failures
    assert len(result.outcomes) == 1
    outcome = result.outcomes[0]

    assert len(outcome.changes) == 4
    by_component = {
        (c.target_component or c.source_component): c for c in outcome.changes
    }
    assert set(by_component) == {"core", "io", "web", "metrics"}
    assert by_component["metrics"].kind.value == "added"
    assert by_component["core"].delta_entities == {"app.core.Cache"}
    assert by_component["io"].delta_entities == {"app.util.Log"}
    assert by_component["web"].delta_entities == {"thirdparty.jetty.Http"}

    assert outcome.impact.entries == {
        "APP-1": frozenset({"app.core.Cache", "app.core.Engine"}),
        "APP-2": frozenset({"app.core.Cache", "app.util.Log"}),
        "APP-3": frozenset({"app.metrics.Meter"}),
    }
    assert outcome.impact.diagnostics.excluded_entity_count == 1
    assert outcome.impact.diagnostics.skipped_paths == ["docs/metrics.md"]

    kinds = sorted(d.kind.value for d in outcome.decisions)
    assert kinds == ["crosscutting", "simple"]
    crosscutting = next(d for d in outcome.decisions if d.kind is DecisionKind.CROSSCUTTING)
    simple = next(d for d in outcome.decisions if d.kind is DecisionKind.SIMPLE)
    assert crosscutting.issue_ids == {"APP-1", "APP-2"}
    assert crosscutting.change_ids == {by_component["core"].id, by_component["io"].id}
    assert simple.issue_ids == {"APP-3"}
    assert simple.change_ids == {by_component["metrics"].id}

    stats = outcome.stats
    assert stats.coverage_before_cleanup == Fraction(3, 4)
    assert stats.coverage_after_cleanup == Fraction(1)
    assert stats.coverage_before_cleanup < stats.coverage_after_cleanup
    assert by_component["web"] not in outcome.clean_changes
    assert stats.issues_in_decisions == 3
    assert stats.avg_issues_per_decision == Fraction(3, 2)
    assert stats.avg_changes_per_decision == Fraction(3, 2)

    # entity overlap diagnostic: all 4 distinct mapped entities exist in the v2 universe
    assert outcome.entity_overlap == (4, 4)


def test_pipeline_writes_outputs(mini_project):
    config = RunConfig.from_file(mini_project)
    result = run_pipeline(config)
    names = {path.name for path in result.written}
    assert names == {"run.json", "decisions.txt", "summary.txt"}
    run_doc = json.loads((config.output_dir / "run.json").read_text())
    assert run_doc["schema_version"] == 1 and run_doc["kind"] == "run"
    assert run_doc["pairs"][0]["matching_cost"] == 4
    decisions_text = (config.output_dir / "decisions.txt").read_text()
    assert "[crosscutting]" in decisions_text and "[simple]" in decisions_text


def test_pipeline_reruns_byte_identical(mini_project):
    config = RunConfig.from_file(mini_project)
    first = run_pipeline(config)
    first_bytes = (config.output_dir / "run.json").read_bytes()
    second = run_pipeline(config)
    second_bytes = (config.output_dir / "run.json").read_bytes()
    assert first_bytes == second_bytes
    assert first.run_doc == second.run_doc


def test_pipeline_identical_snapshots_contribute_nothing(tmp_path):
    write_mini_project(tmp_path)
    config_obj = json.loads((tmp_path / "config.json").read_text())
    config_obj["versions"] = [
        {"label": "1.0.0", "snapshot": "arch-1.0.0.rsf"},
        {"label": "1.0.0b", "snapshot": "arch-1.0.0.rsf"},
    ]
    path = tmp_path / "config2.json"
    path.write_text(json.dumps(config_obj))
    result = run_pipeline(RunConfig.from_file(path), write=False)
    outcome = result.outcomes[0]
    assert outcome.changes == frozenset()
    assert outcome.decisions == []
    assert outcome.stats.coverage_before_cleanup == Fraction(1)


def test_pipeline_three_versions_two_pairs(tmp_path):
    write_mini_project(tmp_path)
    (tmp_path / "arch-1.2.0.rsf").write_text(
        (tmp_path / "arch-1.1.0.rsf").read_text() + "contain core app.core.Planner\n"
    )
    config_obj = json.loads((tmp_path / "config.json").read_text())
    config_obj["versions"].append({"label": "1.2.0", "snapshot": "arch-1.2.0.rsf"})
    path = tmp_path / "config3.json"
    path.write_text(json.dumps(config_obj))
    result = run_pipeline(RunConfig.from_file(path), write=False)
    assert len(result.outcomes) == 2
    assert [(o.from_version, o.to_version) for o in result.outcomes] == [
        ("1.0.0", "1.1.0"),
        ("1.1.0", "1.2.0"),
    ]


def test_pipeline_failure_isolation(tmp_path):
    write_mini_project(tmp_path)
    (tmp_path / "arch-bad.rsf").write_text("contain only-two-tokens\n")
    config_obj = json.loads((tmp_path / "config.json").read_text())
    config_obj["versions"].append({"label": "1.2.0", "snapshot": "arch-bad.rsf"})
    path = tmp_path / "config4.json"
    path.write_text(json.dumps(config_obj))
    result = run_pipeline(RunConfig.from_file(path), write=False)
    assert len(result.outcomes) == 1  # the good pair still ran
    assert len(result.failures) == 1
    assert result.failures[0]["from_version"] == "1.1.0"
    assert "snapshot line 1" in result.failures[0]["error"]


def test_pipeline_workers_match_serial(mini_project, tmp_path):
    config = RunConfig.from_file(mini_project)
    serial = run_pipeline(config, write=False)
    threaded = run_pipeline(config, workers=4, write=False)
    assert serial.run_doc == threaded.run_doc


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    with pytest.raises(ConfigError):
        RunConfig.from_file(bad)
    bad.write_text(json.dumps({"versions": [{"label": "a", "snapshot": "s"}]}))
    with pytest.raises(ConfigError):
        RunConfig.from_file(bad)
    bad.write_text(
        json.dumps(
            {
                "versions": [
                    {"label": "a", "snapshot": "s"},
                    {"label": "a", "snapshot": "s"},
                ],
                "issues": "i",
                "commits": "c",
            }
        )
    )
    with pytest.raises(ConfigError):
        RunConfig.from_file(bad)
