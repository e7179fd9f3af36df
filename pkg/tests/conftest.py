import json
from importlib import resources

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    g = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def schemas():
    root = resources.files("symtangle") / "schemas"
    return {p.name.split(".")[0]: json.loads(p.read_text()) for p in root.iterdir() if p.name.endswith(".json")}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
