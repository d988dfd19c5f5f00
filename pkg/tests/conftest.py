import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from boundsmith.lang import parse_model, resolve_model  # noqa: E402

MODELS_DIR = os.path.join(os.path.dirname(__file__), "..", "models")
MODEL_NAMES = ("sll", "shapes", "singleton", "net")


def model_source(name: str) -> str:
    with open(os.path.join(MODELS_DIR, f"{name}.bsm")) as fh:
        return fh.read()


def load_model(name: str):
    return resolve_model(parse_model(model_source(name)))


@pytest.fixture(scope="session")
def sll():
    return load_model("sll")


@pytest.fixture(scope="session")
def shapes():
    return load_model("shapes")


@pytest.fixture(scope="session")
def singleton():
    return load_model("singleton")


@pytest.fixture(scope="session", params=MODEL_NAMES)
def example_model(request):
    return request.param, load_model(request.param)
