import pytest

_LINES_KEY = pytest.StashKey[list]()
_PROPS_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []
    config.stash[_PROPS_KEY] = []


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so it can see the property-suite results
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.path.name == "test_properties.py":
        item.config.stash[_PROPS_KEY].append((item.nodeid, rep.passed, rep.duration))


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for the acceptance summary."""
    lines = request.config.stash[_LINES_KEY]

    def record(number, ok, detail):
        status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
        lines.append(f"criterion {number}: {status}  {detail}")
        return ok

    return record


@pytest.fixture
def property_results(request):
    return request.config.stash[_PROPS_KEY]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_LINES_KEY]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
