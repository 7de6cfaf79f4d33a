from __future__ import annotations


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion at the end of the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(RESULTS):
        name, ok, detail = RESULTS[num]
        status = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {num:2d} [{name}]: {status}{suffix}")
