import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from polargrid.dataset import read_dataset, write_dataset
from polargrid.taskgen import generate_dataset


@pytest.fixture(scope="session")
def small_dataset_dir(tmp_path_factory):
    """A tiny dataset (2 pairs per task) shared across test modules."""
    out = tmp_path_factory.mktemp("dataset")
    pairs = list(generate_dataset(2, base_seed=0))
    write_dataset(out, pairs)
    return out


@pytest.fixture(scope="session")
def small_records(small_dataset_dir):
    return read_dataset(small_dataset_dir)
