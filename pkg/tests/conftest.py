import numpy as np
import pytest

from qcube.generators import GeneratorSpec, generate


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_op(n, seed, kind="random_hermitian"):
    return generate(GeneratorSpec(kind, n, seed))


@pytest.fixture
def random_ops():
    return [random_op(n, seed) for n in (1, 2, 3, 4) for seed in range(3)]


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
