"""Shared fixtures and the acceptance-report terminal summary."""

import io
import os
import sys

import numpy as np
import pytest

ACCEPTANCE_REPORT = os.path.join(os.path.dirname(__file__), "..",
                                 "acceptance_report.txt")


def pytest_configure(config):
    # start each session with a clean acceptance report
    if os.path.exists(ACCEPTANCE_REPORT):
        os.remove(ACCEPTANCE_REPORT)


def pytest_terminal_summary(terminalreporter):
    if os.path.exists(ACCEPTANCE_REPORT):
        terminalreporter.write_sep("=", "acceptance criteria")
        with open(ACCEPTANCE_REPORT, encoding="utf-8") as fh:
            for line in fh:
                terminalreporter.write_line(line.rstrip("\n"))


def record_criterion(line: str):
    """One pass/fail line per acceptance criterion, echoed at session end."""
    with open(ACCEPTANCE_REPORT, "a", encoding="utf-8") as fh:
        fh.write(line + "\n")
    print(line, file=sys.stderr)


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    from trigauss import cli

    def _run(*argv):
        code = cli.main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


@pytest.fixture
def returns_csv(tmp_path):
    """A small bivariate returns CSV with a header and one comment line."""
    rng = np.random.default_rng(7)
    n = 250
    z1 = rng.standard_normal(n)
    z2 = rng.standard_normal(n)
    x = 0.01 * z1
    y = 0.01 * (0.6 * z1 + 0.8 * z2)
    buf = io.StringIO()
    buf.write("# sample returns\n")
    buf.write("ret_a,ret_b\n")
    for a, b in zip(x, y):
        buf.write(f"{float(a)!r},{float(b)!r}\n")
    path = tmp_path / "returns.csv"
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path
