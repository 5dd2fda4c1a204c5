import numpy as np
import pytest
from hypothesis import settings

from isacsim.metrics import HardwareProfile
from isacsim.scene import ScenarioParams, sample_scene, sample_users, trial_streams

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def make_instance(seed=0, trial=0, M=16, K=3, Q=2, **params):
    p = ScenarioParams(num_users=K, num_clutter=Q, **params)
    rs, ru = trial_streams(seed, trial)
    return sample_scene(rs, p), sample_users(ru, p, M)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def hw():
    return HardwareProfile(kappa_t=0.01, kappa_r=0.01, total_power=1e4, ue_noise_var=1e-12, radar_noise_var=1e-12)


ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Records one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
