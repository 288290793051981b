import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from regimecast.data import PriceSeries, default_data_dir, load_fixture

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = default_data_dir()


def make_series(close, sid="SYN", volume=None, start="2020-01-01") -> PriceSeries:
    close = np.asarray(close, dtype=float)
    dates = np.datetime64(start, "D") + np.arange(len(close))
    return PriceSeries(sid, dates, close, volume=volume)


def fixture_or_skip(name: str) -> PriceSeries:
    if not (DATA / f"{name}.csv").is_file():
        pytest.skip(f"{name}.csv fixture not present")
    return load_fixture(name)


@pytest.fixture(scope="session")
def btc():
    return fixture_or_skip("BTC")


@pytest.fixture(scope="session")
def msft():
    return fixture_or_skip("MSFT")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda l: int(l.split()[2])):
            terminalreporter.write_line(line)
