import pytest

from vinesim.core import default_robot_spec


@pytest.fixture
def spec():
    """Paper-default robot: r = 16 mm, 4 x 100 mm segments, default skin."""
    return default_robot_spec()


@pytest.fixture
def spec_2seg():
    return default_robot_spec(n_segments=2)
