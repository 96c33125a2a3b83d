import pytest

from spinweave.errors import DomainError
from spinweave.verify import SUITES, run_suites


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_all_suites_pass(n):
    report = run_suites(n)
    failed = [(s["suite"], c["name"]) for s in report["suites"] for c in s["checks"] if not c["passed"]]
    assert report["passed"], failed


def test_named_suite_only():
    report = run_suites(4, ["symmetry"])
    assert [s["suite"] for s in report["suites"]] == ["symmetry"]
    names = [c["name"] for c in report["suites"][0]["checks"]]
    assert any("1432" in name for name in names)


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_suites(3, ["nope"])


def test_registry():
    assert sorted(SUITES) == ["dimensions", "groups", "mlo", "rff", "second-j", "states", "symmetry"]
