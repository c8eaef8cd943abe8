import os
import sys

import pytest

# Ensure the project root is in the path
root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(root_dir, "src"))

from train_track_builder.core.config import Config, set_config  # noqa: E402
from train_track_builder.graphs.automorphism import Automorphism  # noqa: E402
from train_track_builder.toprep.toprep import TopRep, refine_filtration  # noqa: E402

TWO_VERTEX_JSON = {
    "vertices": ["v", "x"],
    "edges": {"a": ["v", "v"], "b": ["v", "v"], "c": ["x", "v"], "d": ["x", "v"]},
    "base": "v",
    "images": {"a": "a", "b": "baa", "c": "ca", "d": "db"},
}


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts from the default limits."""
    cfg = Config()
    set_config(cfg)
    yield cfg
    set_config(Config())


@pytest.fixture
def cfg(default_config):
    return default_config


@pytest.fixture
def isolated_fs(tmp_path):
    """Provides an isolated filesystem for tests"""
    return tmp_path


@pytest.fixture
def commutator_tt():
    """a->ab, b->bab: a single fixed conjugacy class."""
    return Automorphism.parse("a->ab; b->bab")


@pytest.fixture
def commutator_rep(commutator_tt):
    return refine_filtration(TopRep.from_automorphism(commutator_tt))


@pytest.fixture
def two_vertex_json():
    return dict(TWO_VERTEX_JSON)


@pytest.fixture
def two_vertex_rep():
    """Two vertices, loops a and b at v, edges c and d from x to v."""
    return refine_filtration(TopRep.from_json(TWO_VERTEX_JSON))


@pytest.fixture
def lollipop_chain():
    """Linear 2-rose a1, a2 plus edges a_k -> a2^(2k) a_k a2^(2k+1) for 2 < k <= n."""

    def build(n: int = 3) -> Automorphism:
        rules = ["a1->a1", "a2->a2a1"]
        rules += [f"a{k}->{'a2' * (2 * k)}a{k}{'a2' * (2 * k + 1)}" for k in range(3, n + 1)]
        return Automorphism.parse("; ".join(rules))

    return build


@pytest.fixture
def identity3():
    return Automorphism.identity(3)


@pytest.fixture
def swap():
    return Automorphism.parse("a->b; b->a")
