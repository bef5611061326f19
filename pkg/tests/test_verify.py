import pytest

from poset_cube.verify import VerifyConfig, run_verify


@pytest.fixture(scope="module")
def default_report():
    return run_verify(VerifyConfig())


def test_default_run_passes(default_report):
    assert default_report.status == "pass"
    bad = [c.name for c in default_report.checks if c.status != "pass"]
    assert bad == []


def test_default_counts(default_report):
    by_name = {c.name: c for c in default_report.checks}
    assert by_name["iir-bound"].passed == 87
    assert by_name["char-iir"].passed == 87 + 50
    assert default_report.posets_checked == 137


def test_summary_schema(default_report):
    data = default_report.as_dict()
    assert data["schema"] == "poset-cube/1"
    assert data["config"]["seed"] == 0


def test_small_config():
    report = run_verify(VerifyConfig(max_n=3, sample_n6=0))
    assert report.posets_checked == 8 and report.status == "pass"


def test_seed_changes_sample_not_verdicts():
    a = run_verify(VerifyConfig(max_n=2, sample_n6=5, seed=1), only=["char-iir"])
    b = run_verify(VerifyConfig(max_n=2, sample_n6=5, seed=2), only=["char-iir"])
    assert a.status == b.status == "pass"


def test_tiny_budget_is_inconclusive():
    report = run_verify(VerifyConfig(max_n=6, sample_n6=0, time_budget=1e-9), only=["parameter-chain"])
    assert report.status == "inconclusive"


@pytest.mark.parametrize("kwargs", [{"max_n": 0}, {"max_n": 8}, {"sample_n6": -1}, {"time_budget": 0}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        VerifyConfig(**kwargs)
