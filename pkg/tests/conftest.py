import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orientcorr.graph import parse_edge_list  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def triangle():
    return parse_edge_list("s a\ns b\na b\n")


@pytest.fixture
def path3():
    return parse_edge_list("u v\nv w\n")


@pytest.fixture
def k4_minus_ab():
    # all edges on {a, b, s, c} except ab
    return parse_edge_list("a s\na c\nb s\nb c\ns c\n")


@pytest.fixture
def data_dir():
    return DATA
