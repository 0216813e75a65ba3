import re

import pytest

from covkit.suites import SUITES, ConfigError, SuiteConfig, UnknownSuite, run_suite


def _strip(rep):
    d = rep.as_dict()
    d.pop("wall_time")
    return d


def test_reports_are_deterministic():
    a = run_suite("identities", SuiteConfig(seed=3))
    b = run_suite("identities", SuiteConfig(seed=3))
    assert _strip(a) == _strip(b)
    assert a.seed == 3 and a.wall_time > 0


def test_parallel_matches_serial():
    a = run_suite("identities", SuiteConfig(seed=1))
    b = run_suite("identities", SuiteConfig(seed=1, jobs=2))
    assert _strip(a) == _strip(b)


def test_seed_changes_samples():
    a = run_suite("chords", SuiteConfig(seed=1))
    b = run_suite("chords", SuiteConfig(seed=2))
    assert [c.residual for c in a.checks] != [c.residual for c in b.checks]


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("everything")


@pytest.mark.parametrize("kw", [{"band": 0.0}, {"band": 0.5}, {"jobs": 0}, {"n": 63}, {"n_mc": 10}])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SuiteConfig(**kw).validate()


def test_checks_are_labelled():
    rep = run_suite("p1p2")
    assert rep.checks
    for c in rep.checks:
        d = c.as_dict()
        assert set(d) == {"name", "anchor", "pass", "residual", "tolerance", "criterion"}
        assert d["anchor"] and not re.search(r"\(\d+\)|§|[Ee]q\.", d["anchor"])
        assert 1 <= d["criterion"] <= 11


def test_suite_names():
    assert set(SUITES) == {
        "identities", "dk", "p1p2", "part4", "radial-flip", "remark-flip", "chords", "simplex", "symmetry",
    }


def test_written_reports_are_byte_identical(tmp_path):
    from covkit import io

    paths = []
    for i in range(2):
        d = run_suite("chords", SuiteConfig(seed=4)).as_dict()
        d["wall_time"] = 0.0
        paths.append(tmp_path / f"{i}.json")
        io.write_json(d, paths[-1])
    assert paths[0].read_bytes() == paths[1].read_bytes()
