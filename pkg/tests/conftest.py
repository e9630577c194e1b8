import numpy as np
import pytest

from cyclewalk.state import make_config, paper_initial_state, localized_state


def random_unitary(rng, n=2):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def coin_from_angles(theta, alpha, beta, gamma):
    return np.exp(1j * gamma) * np.array(
        [
            [np.exp(1j * alpha) * np.cos(theta), np.exp(1j * beta) * np.sin(theta)],
            [-np.exp(-1j * beta) * np.sin(theta), np.exp(-1j * alpha) * np.cos(theta)],
        ]
    )


def fig1_states(cfg):
    """The two initial states compared in the limiting-distribution figure."""
    return {"paper": paper_initial_state(cfg), "localized": localized_state(cfg, 0, 0, 0)}


@pytest.fixture
def rng():
    return np.random.default_rng(20130114)


@pytest.fixture
def mem4():
    return make_config(4, True)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
