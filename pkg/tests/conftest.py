import pytest

from gorbit import catalog
from gorbit.spaces import space_from_dict

SAME_SU3 = {"k": {"family": "so", "n": 3}, "g1": {"family": "su", "n": 3},
            "embedding1": "defining", "same_group": True, "label": "su3-same"}

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record_acceptance(number: int, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE[number] = ("PASS" if passed else "FAIL", detail)


@pytest.fixture(scope="session")
def b3_space():
    return catalog.lookup("B.3").build_space(3)


@pytest.fixture(scope="session")
def b7_space():
    return catalog.lookup("B.7").build_space()


@pytest.fixture(scope="session")
def same_space():
    return space_from_dict(SAME_SU3)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
