import numpy as np
import pytest

import bioblend

DESK = dict(
    n_labels=20, n_samples_per_label=16, n_true_features=8, n_fake_features=32,
    average_consecutive_locations=2, average_shared_locations=3, n_features_out=2000,
    blending_mode="logarithmic", seed=0, store_hidden=True,
)


@pytest.fixture
def desk_config():
    return bioblend.validate_config(DESK)


@pytest.fixture(scope="session")
def desk_bundle():
    return bioblend.run_pipeline(bioblend.validate_config(DESK))


@pytest.fixture
def small_config():
    return bioblend.validate_config(dict(
        n_labels=4, n_samples_per_label=5, n_true_features=3, n_fake_features=2,
        n_features_out=12, seed=7, store_hidden=True,
    ))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
