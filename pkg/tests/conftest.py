import numpy as np
import pytest

from fgqa.cells import BiasSet, CapacitanceNetwork


def random_network(rng, lo=1e-19, hi=5e-18) -> CapacitanceNetwork:
    """Random physical three-cell network with positive branch capacitances."""
    def draw(n):
        return rng.uniform(lo, hi, n)
    return CapacitanceNetwork(
        c_gate=draw(3),
        c_sub=draw(3),
        c_fg=np.r_[draw(2), 0.0],
        c_gate_left=np.r_[0.0, draw(2)],
        c_gate_right=np.r_[draw(2), 0.0],
        c_source=draw(3),
        c_drain=draw(3),
    )


def random_bias(rng, scale=5.0) -> BiasSet:
    return BiasSet(tuple(rng.uniform(-scale, scale, 3)),
                   float(rng.uniform(-scale, scale)),
                   tuple(rng.uniform(-scale, scale, 4)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)
