import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings

from fradical import catalog
from fradical.perm import PermGroup, mul

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def reshuffle(G: PermGroup, seed: int) -> PermGroup:
    """Same group from shuffled generators padded with random products."""
    rng = random.Random(seed)
    gens = list(G.gens)
    rng.shuffle(gens)
    extra = []
    for _ in range(2):
        if gens:
            extra.append(mul(rng.choice(gens), rng.choice(gens)))
    return PermGroup(G.degree, gens + extra, seed=seed)


@pytest.fixture
def S4():
    return catalog.sym(4)


@pytest.fixture
def V4():
    return PermGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)])


@pytest.fixture
def A4():
    return catalog.alt(4)


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
