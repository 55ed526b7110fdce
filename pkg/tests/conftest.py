import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from restartlab import StrategySpec  # noqa: E402

LAMBDA0S = (1, 2, 10)
NUS = (1, 2, 5, 20)
RHOS = (1.1, 1.5, 2, 3, 5)
ALPHAS = (1, 1.5, 2, 3)


def grid_specs() -> list[StrategySpec]:
    specs = []
    for l0 in LAMBDA0S:
        specs += [StrategySpec.plus(l0, nu) for nu in NUS]
        specs += [StrategySpec.star(l0, rho) for rho in RHOS]
        specs += [StrategySpec.times(l0, rho) for rho in RHOS]
        specs += [StrategySpec.pow(l0, a) for a in ALPHAS]
    return specs


GRID = grid_specs()


@pytest.fixture(params=GRID, ids=str)
def grid_spec(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
