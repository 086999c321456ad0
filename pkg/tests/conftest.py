import numpy as np
import pytest

from funkbalance import RadialBody2D, ball, build_rule, ellipsoid, randers


@pytest.fixture(scope="session")
def rule2():
    return build_rule(2, 256)


@pytest.fixture(scope="session")
def rule3():
    return build_rule(3, 64)


@pytest.fixture(scope="session")
def randers_body():
    return randers(np.eye(2), [0.0, 0.3])


@pytest.fixture(scope="session")
def fourier_body():
    return RadialBody2D(1.0, [0.0, 0.1])


@pytest.fixture(scope="session")
def ellipse21():
    return ellipsoid(axes=[2.0, 1.0])


@pytest.fixture(scope="session")
def ellipsoid3():
    return ellipsoid(axes=[2.0, 1.0, 0.5])


@pytest.fixture(scope="session")
def ball3():
    return ball(3)


def interior_points(body, count, seed, max_gauge=0.7):
    """Deterministic interior points spread over directions and depths."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((count, body.dimension))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    depths = np.linspace(0.1, max_gauge, count)
    gauges = np.asarray(body.minkowski(dirs))
    return depths[:, None] * dirs / gauges[:, None]
