import os

import numpy as np
import pytest

from noblesqueeze.gaussian import ChannelSpec
from noblesqueeze.io_utils import parse_config
from noblesqueeze.params import derive

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "configs")

HEADLINE_SPEC = ChannelSpec(kappa=2.0, epsilon=0.3, eta=0.125, rho=0.162)


def config_path(name):
    return os.path.join(CONFIG_DIR, name + ".yaml")


@pytest.fixture(scope="session")
def headline_config():
    return parse_config(config_path("he3_k_headline"))


@pytest.fixture(scope="session")
def headline_params(headline_config):
    return derive(headline_config)


def random_specs(n, seed, kappa_range=(0.3, 4.0), loss_max=0.8, rho_max=1.0):
    """Deterministic batch of channel parameter tuples for oracle tests."""
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    specs = []
    for _ in range(n):
        specs.append(ChannelSpec(
            kappa=float(rng.uniform(*kappa_range)),
            epsilon=float(rng.uniform(0.0, loss_max)),
            eta=float(rng.uniform(0.0, loss_max)),
            rho=float(rng.uniform(0.0, rho_max)),
        ))
    return specs
