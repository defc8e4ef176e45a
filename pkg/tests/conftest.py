import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, when that suite ran."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RAN", False):
        return
    terminalreporter.section("acceptance criteria")
    for name in mod.CRITERIA:
        if name not in mod.ATTEMPTED:
            continue
        detail = mod.RESULTS.get(name)
        if detail is None:
            terminalreporter.write_line(f"FAIL {name}")
        else:
            suffix = f" ({detail})" if detail is not True else ""
            terminalreporter.write_line(f"PASS {name}{suffix}")
