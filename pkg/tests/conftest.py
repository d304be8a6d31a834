import time
from types import SimpleNamespace

import numpy as np
import pytest

from dogtilt.presets import get_preset
from dogtilt.pipeline import analyze, compute_stack, make_stimulus

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def _analyzed(name):
    t0 = time.perf_counter()
    cfg = get_preset(name)
    img, geo = make_stimulus(cfg)
    stack = compute_stack(img, cfg)
    report, grouping = analyze(stack, cfg, geo)
    return SimpleNamespace(cfg=cfg, img=img, geo=geo, stack=stack, report=report,
                           grouping={r["sigma_c"]: r for r in grouping},
                           seconds=time.perf_counter() - t0)


@pytest.fixture(scope="session")
def cafe_desk():
    return _analyzed("fig3_cafewall_desk")


@pytest.fixture(scope="session")
def munsterberg_desk():
    return _analyzed("fig4_munsterberg_desk")


@pytest.fixture(scope="session")
def bulge_run():
    return _analyzed("fig6_bulge")
