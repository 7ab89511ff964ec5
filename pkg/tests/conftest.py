import math

import pytest

from rdstab import REFERENCE_FHN, REFERENCE_LE, find_equilibrium, preset_fitzhugh_nagumo, preset_lengyel_epstein

# activator-inhibitor variant of the Lengyel-Epstein kinetics used for the
# diffusion-driven instability checks
TURING_LE = dict(a=10.0, mu=1.0, lam=4.0, sigma=4.0, d1=1.0, d2=1.0)


@pytest.fixture(scope="session")
def le():
    return preset_lengyel_epstein(**REFERENCE_LE)


@pytest.fixture(scope="session")
def fhn():
    return preset_fitzhugh_nagumo(**REFERENCE_FHN)


@pytest.fixture(scope="session")
def le_eq(le):
    return find_equilibrium(le)


@pytest.fixture(scope="session")
def fhn_eq(fhn):
    return find_equilibrium(fhn)


@pytest.fixture(scope="session")
def turing_spec():
    return preset_lengyel_epstein(**TURING_LE)


def le_with_a2(a2, **kw):
    return preset_lengyel_epstein(**{**REFERENCE_LE, "a": math.sqrt(a2), **kw})


# acceptance report ------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {line}")
