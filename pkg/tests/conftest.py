import pytest

from zptower.tower import make_spec

# towers used across the test-suite: (id, keyword arguments for make_spec)
SUITE = [
    ("A1-F2-x3", dict(p=2, f=[0, 0, 0, 1])),
    ("A1-F2-x3+x", dict(p=2, f=[0, 1, 0, 1])),
    ("A1-F2-x5", dict(p=2, f=[0, 0, 0, 0, 0, 1])),
    ("Gm-F2-x+1/x", dict(p=2, f=[0, 1], domain="Gm", f_neg=[1])),
    ("A1-F3-x2", dict(p=3, f=[0, 0, 1])),
    ("Gm-F3-x+1/x", dict(p=3, f=[0, 1], domain="Gm", f_neg=[1])),
    ("A1-F4-x3", dict(p=2, r=2, f=[0, 0, 0, 1])),
]

_acceptance_lines = []


def record_acceptance(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    _acceptance_lines.append(line)
    print(line)


@pytest.fixture(scope="session")
def flagship():
    return make_spec(2, [0, 0, 0, 1])


@pytest.fixture(scope="session")
def suite():
    return [(name, make_spec(**kw)) for name, kw in SUITE]


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
