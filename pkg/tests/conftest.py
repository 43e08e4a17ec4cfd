ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, passed: bool, title: str, detail: str) -> None:
    ACCEPTANCE[criterion] = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion:2d}  {title}: {detail}"
    print(ACCEPTANCE[criterion])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
