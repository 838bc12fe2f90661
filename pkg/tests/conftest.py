from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

# One row per fixture record in tests/fixtures/fig2, in file order:
# (fidelity, attunement, restrictive veracity, permissive veracity).
# Veracity cells are {outcome: mass}; worked out by hand from the combiner rules.
FIG2_TABLE = [
    ("H", "H", {"H": 1}, {"H": 1}),
    ("H", "M", {"M": 1}, {"H": 1}),
    ("H", "FA", {"FA": 1}, {"H": 1}),
    ("H", "CR", {"H": 0.5, "CR": 0.5}, {"H": 0.5, "CR": 0.5}),
    ("M", "H", {"M": 1}, {"H": 1}),
    ("M", "M", {"M": 1}, {"M": 1}),
    ("M", "FA", {"M": 0.5, "FA": 0.5}, {"M": 0.5, "FA": 0.5}),
    ("M", "CR", {"M": 1}, {"CR": 1}),
    ("FA", "H", {"FA": 1}, {"H": 1}),
    ("FA", "M", {"M": 0.5, "FA": 0.5}, {"M": 0.5, "FA": 0.5}),
    ("FA", "FA", {"FA": 1}, {"FA": 1}),
    ("FA", "CR", {"FA": 1}, {"CR": 1}),
    ("CR", "H", {"H": 0.5, "CR": 0.5}, {"H": 0.5, "CR": 0.5}),
    ("CR", "M", {"M": 1}, {"CR": 1}),
    ("CR", "FA", {"FA": 1}, {"CR": 1}),
    ("CR", "CR", {"CR": 1}, {"CR": 1}),
]


def balanced_cell(fid, att, restrictive, permissive):
    """Balanced splits the mixed-correctness rows and agrees elsewhere."""
    if restrictive == permissive:
        return restrictive
    return {fid: 0.5, att: 0.5}


@pytest.fixture
def fixture_dir():
    def get(name):
        return FIXTURES / name

    return get


def read_inputs(name):
    d = FIXTURES / name
    return (d / "items.tsv").read_bytes(), (d / "ratings.tsv").read_bytes(), (d / "explanations.jsonl").read_bytes()


ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    criterion = dict(report.user_properties).get("criterion")
    if criterion:
        ACCEPTANCE_RESULTS[criterion] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[{status}] {name}")
