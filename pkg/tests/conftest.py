import pytest

from locap import kernels
from locap.entropyopt import OptimizerConfig, maximize_entropy


@pytest.fixture(params=sorted(kernels.available_backends()))
def kernel_backend(request):
    """Run the decorated test once per available kernel backend."""
    previous = kernels.force_backend(request.param)
    yield request.param
    kernels.force_backend(previous)


# Heavy optimizations shared between the module tests and the acceptance
# suite; session-scoped so each runs once.

@pytest.fixture(scope="session")
def opt_352_x13():
    cfg = OptimizerConfig(restarts=16, max_iter=6000)
    return maximize_entropy(3, 5, 2, 13, cfg, seed=100)


@pytest.fixture(scope="session")
def opt_352_x20():
    cfg = OptimizerConfig(restarts=4, max_iter=4000)
    return maximize_entropy(3, 5, 2, 20, cfg, seed=12)


@pytest.fixture(scope="session")
def opt_363_x38():
    cfg = OptimizerConfig(restarts=2, max_iter=1500)
    return maximize_entropy(3, 6, 3, 38, cfg, seed=21)


@pytest.fixture(scope="session")
def opt_363_x60():
    cfg = OptimizerConfig(restarts=2, max_iter=1500)
    return maximize_entropy(3, 6, 3, 60, cfg, seed=21)
