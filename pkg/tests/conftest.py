import re

import pytest

from ltrcweibull.data_model import load_transformer_dataset
from ltrcweibull.mle_common import solve_alpha
from ltrcweibull.mle_separate import fit_separate

_CRITERION_PATTERN = re.compile(r"test_criterion_(\d+)")
_acceptance_outcomes = {}
_acceptance_titles = {
    1: "transformer common-shape MLEs",
    2: "separate-shape MLEs and equal-shape LRT",
    3: "rate-ratio identity",
    4: "fixed point matches grid argmax",
    5: "transformer posterior means",
    6: "conjugate moments and trapezoid coverage",
    7: "sampler means match quadrature",
    8: "transformer interval tables",
    9: "simulation study operating characteristics",
    10: "randomized property suites",
}


@pytest.fixture(scope="session")
def transformer_dataset():
    return load_transformer_dataset()


@pytest.fixture(scope="session")
def transformer_fit(transformer_dataset):
    return solve_alpha(transformer_dataset)


@pytest.fixture(scope="session")
def transformer_separate_fit(transformer_dataset):
    return fit_separate(transformer_dataset)


def pytest_runtest_logreport(report):
    match = _CRITERION_PATTERN.search(report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call":
        _acceptance_outcomes[num] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[num] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[num]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        title = _acceptance_titles.get(num, "")
        terminalreporter.write_line(f"criterion {num:2d} [{verdict}] {title}")
