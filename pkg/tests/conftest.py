import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

# (model, curve text, s-interval) of every golden curve
GOLDEN = [
    ("e3", "s, 0, 1", (-2.0, 2.0)),
    ("e3", "0, s, 1", (-2.0, 2.0)),
    ("e3", "cos(s), sin(s), 0", (0.0, 6.0)),
    ("e3", "0, cos(s), sin(s)", (0.0, 3.0)),
    ("e3", "0, 0, s", (0.0, 1.0)),
    ("r3m3", "0, 2*s, 1", (0.0, 2.0)),
    ("r3m3", "2*s, 0, 1", (0.0, 1.0)),
    ("r3m3", "2*cos(s), 0, 2*sin(s)", (0.1, 1.4)),
    ("h3m1", "s, 0, 1", (0.0, 1.0)),
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_unit_state(model_id, rng):
    """Random chart point and unit-speed chart velocity for a model."""
    from ssfrenet.manifolds import frame_to_coordinate

    p = rng.uniform(-1.0, 1.0, 3)
    if model_id == "h3m1":
        p[2] = rng.uniform(0.5, 2.0)
    a = rng.normal(size=3)
    a /= np.linalg.norm(a)
    return p, np.asarray(frame_to_coordinate(model_id, p, a), dtype=float)
