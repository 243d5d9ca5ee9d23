import pytest
from hypothesis import settings

settings.register_profile("quick", max_examples=60, deadline=None)
settings.load_profile("quick")


@pytest.fixture(scope="session")
def ab_rule():
    from quasitile.inflation import ab_rule

    return ab_rule()


@pytest.fixture(scope="session")
def penrose_rule():
    from quasitile.inflation import penrose_rule

    return penrose_rule()


@pytest.fixture(scope="session")
def penrose_r10():
    from quasitile.cutproject import penrose_tiling

    return penrose_tiling(10)


@pytest.fixture(scope="session")
def penrose_legal():
    """Decorated rhomb patch from four inflation steps of the sun."""
    from quasitile.inflation import pair_halves, penrose_rule, seed_patch, substitute
    from quasitile.matching import PENROSE_TEMPLATE

    rule = penrose_rule()
    return pair_halves(substitute(rule, seed_patch(rule, "sun"), 4), PENROSE_TEMPLATE)


# --- acceptance summary -----------------------------------------------------------
# tests marked ``acceptance(n, title)`` get one PASS/FAIL line each at the end of the run

_acceptance: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    # runs before deselection, so skipped criteria still get a line
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            _acceptance.setdefault(m.args[0], [m.args[1], []])


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("acceptance")
    if m and (call.when == "call" or call.excinfo is not None):
        _acceptance[m.args[0]][1].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, outcomes = _acceptance[n]
        status = "NOT RUN" if not outcomes else "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d} {status}  {title}")
