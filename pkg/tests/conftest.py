import functools

import pytest

from omfiber.arrangement import SUITE, from_arrangement
from omfiber.pipeline import Pipeline


@functools.lru_cache(maxsize=None)
def suite_pipeline(name: str) -> Pipeline:
    return Pipeline(from_arrangement(SUITE[name]()))


@pytest.fixture(params=sorted(SUITE))
def suite_name(request):
    return request.param


@pytest.fixture
def pipe(suite_name):
    return suite_pipeline(suite_name)


@pytest.fixture
def hexagon():
    """The three lines xy(x - y)."""
    return suite_pipeline("xy(x-y)")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, text = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")
