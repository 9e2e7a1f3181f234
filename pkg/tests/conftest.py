import numpy as np
import pytest

from uscparity import PointerSet, SystemParams, derive


@pytest.fixture(scope="session")
def operating_params():
    """Standard ultrastrong operating point: g=15k, g/wr=0.5, g/delta=0.1, eps=0.5k."""
    return SystemParams.from_ratios(
        g_over_kappa=15.0, g_over_omega_r=0.5, eps_over_kappa=0.5
    )


@pytest.fixture(scope="session")
def operating_derived(operating_params):
    return derive(operating_params)


def random_symmetric_sets(n, seed=1234, max_abs=3.0):
    """Mirror-symmetric pointer sets with |alpha| <= max_abs, seeded."""
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(n):
        aee = complex(rng.uniform(-max_abs, max_abs), rng.uniform(-max_abs, max_abs))
        aeg = complex(rng.uniform(-max_abs, max_abs), rng.uniform(-max_abs, max_abs))
        if abs(aee) > max_abs:
            aee *= max_abs / abs(aee)
        if abs(aeg) > max_abs:
            aeg *= max_abs / abs(aeg)
        sets.append(PointerSet.symmetric(aee, aeg))
    return sets
