import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_TITLES = {
    1: "sphere scan to 18602 gives exceptions 3, 5, 9, 13, 25",
    2: "x1+x2+x3=0 count (q^2-6q+5)/8",
    3: "hyperplane closed form equals brute force",
    4: "Fermat hypersurface bound sweep",
    5: "four counting methods agree on Fermat shapes",
    6: "Dwork-regular bound sweep",
    7: "primitive d-th roots of an element",
    8: "Jacobi sum values and magnitudes",
    9: "sieve delta row and primorial facts",
    10: "sphere sufficiency threshold",
    11: "mixed character sum bound",
}
_acceptance_results: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """record(n, ok, detail): store the verdict of acceptance criterion n."""

    def record(n: int, ok: bool, detail: str = "") -> bool:
        _acceptance_results[n] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'} [{n}] {ACCEPTANCE_TITLES[n]}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in ACCEPTANCE_TITLES.items():
        if n in _acceptance_results:
            ok, detail = _acceptance_results[n]
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title}: {detail}")
        else:
            terminalreporter.write_line(f"FAIL [{n:2d}] {title}: not run or errored")
