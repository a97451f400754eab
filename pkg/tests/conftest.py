import numpy as np
import pytest

from sild.synth import ChannelSpec, LossModel, ideal_diff_channel, inject_se_delay, uniform_grid

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fine_grid():
    """10 MHz to 110 GHz in 10 MHz steps."""
    return uniform_grid(10e6, 110e9, 10e6)


@pytest.fixture
def grid():
    return uniform_grid(50e6, 110e9, 50e6)


@pytest.fixture
def twinax_spec():
    """Lossy, weakly coupled base channel: 15 dB at 53.125 GHz."""

    def make(f, coupling=0.05, phase=90.0):
        return ChannelSpec(f, 1e-9, LossModel.skin_for(15.0, 53.125e9, dc_loss_db=0.5), coupling, phase)

    return make


def skewed(spec, tau, line="P", side="left"):
    return inject_se_delay(ideal_diff_channel(spec), line, side, tau)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
