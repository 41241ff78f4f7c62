import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def complex_normal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def within_3se(count: int, trials: int, bound: float) -> bool:
    """Empirical rate <= bound + 3 standard errors (binomial SE at the bound)."""
    p = max(bound, 1.0 / trials)
    se = np.sqrt(p * (1 - min(p, 1.0)) / trials) if p < 1 else 0.0
    return count / trials <= bound + 3 * se


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def record(request):
    """record(criterion, passed, detail): one PASS/FAIL line per acceptance criterion."""

    def _record(name: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        print(line)
        request.config.acceptance_lines.append(line)

    return _record
