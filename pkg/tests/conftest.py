import functools
import sys

import pytest

from cubekit.cubes import enumerate_cubes
from cubekit.fixtures import load_builtin
from cubekit.homology import build_chain_complex, homology_groups
from cubekit.presentation import close_square_set
from cubekit.rank_graph import adjacency_matrices


class Pipeline:
    def __init__(self, name):
        self.name = name
        self.p = load_builtin(name)
        self.sq = close_square_set(self.p)

    @functools.cached_property
    def cubes(self):
        return enumerate_cubes(self.p, self.p.k, self.sq)

    @functools.cached_property
    def mats(self):
        return adjacency_matrices(self.cubes, self.p)

    @functools.cached_property
    def complex(self):
        return build_chain_complex(self.p.k, self.mats.mats)

    @functools.cached_property
    def homology(self):
        return homology_groups(self.complex, threads=2, transforms_for=(1,))


@functools.lru_cache(maxsize=None)
def pipeline(name):
    return Pipeline(name)


FIXTURES = ("gamma357", "gamma234", "F2^3", "F3^3", "F2^4")


@pytest.fixture(scope="session")
def get_pipeline():
    return pipeline


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
