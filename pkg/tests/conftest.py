import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# filled by the acceptance suite: criterion number -> (verdict, seconds, note)
CRITERIA: dict[int, tuple[str, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        verdict, secs, note = CRITERIA[n]
        line = f"criterion {n:2d}: {verdict:<4} ({secs:7.1f} s)"
        terminalreporter.write_line(f"{line}  {note}" if note else line)
