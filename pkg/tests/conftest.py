import os
import sys

# deep but finite delay trees force recursively
sys.setrecursionlimit(20000)

import pytest

EXAMPLES = os.path.abspath(
    os.path.join(os.path.dirname(__file__), os.pardir, "examples"))


def example(name):
    return os.path.join(EXAMPLES, name)


@pytest.fixture
def examples_dir():
    return EXAMPLES
