import numpy as np
import pytest

from ttabma import PredictionTable, SyntheticConfig, synthesize


def make_table(
    seed,
    n_rows=200,
    n_columns=3,
    signal_noise=0.5,
    adversarial=(),
    label_flip_rate=0.0,
):
    return synthesize(
        SyntheticConfig(
            n_rows=n_rows,
            n_columns=n_columns,
            signal_noise=signal_noise,
            adversarial_columns=frozenset(adversarial),
            label_flip_rate=label_flip_rate,
            seed=seed,
        )
    )


def table_seeds(count, start=1000):
    """Seeds whose generated tables carry both label classes."""
    found = []
    seed = start
    while len(found) < count:
        table = make_table(seed, n_rows=40, n_columns=1)
        if 0 < table.labels.sum() < table.n_rows:
            found.append(seed)
        seed += 1
    return found


@pytest.fixture(scope="session")
def seed42_table():
    """200 x 3 table, noise 0.5, column 2 adversarial; shared across modules."""
    return make_table(42, n_rows=200, n_columns=3, adversarial=(2,))


@pytest.fixture(scope="session")
def seed42_small():
    """50-row, 3-column table for solver-level checks."""
    return make_table(42, n_rows=50, n_columns=3)


@pytest.fixture
def tiny_table():
    return PredictionTable(
        np.array([[0.9, 0.8], [0.2, 0.3], [0.7, 0.6], [0.1, 0.4]]),
        np.array([1, 0, 1, 0]),
    )
