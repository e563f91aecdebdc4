import pathlib

import pytest

from cstree import load_spec

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURES / name


def load(name: str):
    return load_spec(fixture_path(name))


@pytest.fixture
def fig1():
    return load("fig1.json")


@pytest.fixture
def fig3():
    return load("fig3.json")


@pytest.fixture
def fig4():
    return load("fig4.json")


@pytest.fixture
def fig5_tree():
    return load("fig5_tree.json")


@pytest.fixture
def chain():
    return load("chain123.json")
