import json
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

FIXTURES = Path(__file__).parent / "fixtures"
SHOP = FIXTURES / "shop"


@pytest.fixture(scope="session")
def shop_root() -> Path:
    return SHOP


@pytest.fixture(scope="session")
def shop_golden() -> dict:
    return json.loads((FIXTURES / "shop_golden.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def shop_graph():
    from codegraph.ontology import build_graph

    return build_graph(SHOP)


@pytest.fixture(scope="session")
def shop_index():
    from codegraph.index import build_index
    from codegraph.ontology import scan_repository

    return build_index(SHOP, scan_repository(SHOP))


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker:
            name = marker.args[0] + (f" [{marker.args[1]}]" if len(marker.args) > 1 else "")
            item.user_properties.append(("criterion", name))


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for key in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(key, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" not in props:
                continue
            if rep.when == "call" or rep.outcome != "passed":
                outcomes.setdefault(props["criterion"], "FAIL" if rep.outcome == "failed" else
                                    rep.outcome.upper().replace("PASSED", "PASS"))
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(outcomes.items()):
        terminalreporter.write_line(f"{outcome:<8}{name}")
