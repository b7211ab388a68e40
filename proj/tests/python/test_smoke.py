import math

import pytest

import scenkit


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("scenkit")
    data, out = root / "data", root / "out"
    assert scenkit.synth(str(data), corpus="oracle", seed=7, n=24) >= 1
    stats = scenkit.extract(str(data), str(out))
    return data, out, stats


def test_weights_and_scene_count():
    w = scenkit.default_weights()
    assert len(w) == 13
    assert math.isclose(sum(w), 1.0, abs_tol=1e-12)
    assert scenkit.scene_count(13.6, 0.04) == 340
    assert scenkit.complexity_class(0.2) == "low"
    with pytest.raises(scenkit.ArgumentError):
        scenkit.scene_count(0.01, 0.04)


def test_extract_score_simulate(workspace):
    data, out, stats = workspace
    assert stats["total_vehicles"] >= stats["after_free_driving_filter"] >= stats["with_challenger"]
    assert stats["catalog_entries"] == stats["with_challenger"] > 0

    hist = scenkit.score(str(out / "catalog.jsonl"), str(data))
    assert hist["count"] == stats["catalog_entries"]
    assert hist["low"] + hist["medium"] + hist["high"] == hist["count"]

    catalog = scenkit.read_catalog(out / "catalog.jsonl")
    assert all(0.0 <= e["complexity"] <= 1.0 for e in catalog)

    tiers = scenkit.simulate(str(out / "catalog.jsonl"), str(data), n=3)
    assert [t["tier"] for t in tiers] == ["lowest", "average", "highest"]
    for t in tiers:
        assert t["selected"] == t["too_short"] + t["excluded_other_blame"] + t["scenarios"]
    assert (out / "results.csv").exists()
    assert scenkit.report(str(out / "catalog.jsonl"))


def test_analyze_matches_catalog(workspace):
    data, out, _ = workspace
    stats, entries = scenkit.analyze(data, 1)
    assert stats["with_challenger"] == len(entries)
    if entries:
        e = entries[0]
        c = scenkit.scenario_complexity(str(data), e["recording_id"], e["ego_id"])
        assert 0.0 <= c["value"] <= 1.0
        assert max(c["series"]) == pytest.approx(c["value"])


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(scenkit.IoError):
        scenkit.extract(str(tmp_path / "missing"), str(tmp_path / "out"))
    with pytest.raises(scenkit.ArgumentError):
        scenkit.synth(str(tmp_path / "s"), corpus="nonsense")
    assert issubclass(scenkit.ConfigError, scenkit.ScenkitError)
    assert "[roi]" in scenkit.dump_config()
