import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cssconcat import load, make_tower, pair_new
from cssconcat.presets import even, hamming7

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        ok, detail = log[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def gf4():
    return make_tower(2, 2, [1, 1, 1])


@pytest.fixture(scope="session")
def gf8():
    return make_tower(2, 3, [1, 1, 0, 1])


@pytest.fixture(scope="session")
def gf9():
    return make_tower(3, 2, [2, 1, 1])


@pytest.fixture(scope="session")
def hamming_even():
    return pair_new(hamming7(), even(7, 2))


@pytest.fixture(scope="session")
def css49():
    return load("css49_9")


@pytest.fixture(scope="session")
def kasami_lin():
    return load("kasami_lin")


@pytest.fixture(scope="session")
def quantum_rs():
    return load("quantum_rs8")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def mixed_q3():
    """Mixed inner lengths over GF(3): (full3, even3) and (full2, full2), both k = 2."""
    from cssconcat.concat import concatenate, outer_pair
    from cssconcat.presets import full_space

    t = make_tower(3, 2, [2, 1, 1])
    pa = pair_new(full_space(3, 3), even(3, 3))
    pb = pair_new(full_space(2, 3), full_space(2, 3))
    inners = [pa, pb, pa, pa, pb, pa, pa, pa]
    D1, D2 = outer_pair(t, t.exp[:8], np.ones(8, dtype=np.int64), 5, 4)
    return concatenate(inners, D1, D2)
