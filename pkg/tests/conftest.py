import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def hecke_reports():
    """Spectra of D, D1, D2 at kappa=1/4 for each tested mu, computed once per session."""
    from apollogap.spectral import hecke_D, hecke_D1, hecke_D2, spectrum_below

    cache = {}

    def get(name, mu=None):
        key = (name, mu)
        if key not in cache:
            dom = {"D": lambda: hecke_D(mu), "D1": hecke_D1, "D2": lambda: hecke_D2(mu)}[name]()
            cache[key] = spectrum_below(dom, 0.25)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def hecke_gap():
    from apollogap.gap import verify_hecke_gap

    cache = {}

    def get(mu):
        if mu not in cache:
            cache[mu] = verify_hecke_gap(mu)
        return cache[mu]

    return get


@pytest.fixture(scope="session")
def apollonian_1e6():
    from apollogap.gap import apollonian_report

    return apollonian_report(1e6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
