import pathlib

import pytest

from entrolp import assemble, build_reduction_map, parse_file

DATA = pathlib.Path(__file__).parent / "data"
PROBLEMS = pathlib.Path(__file__).parent.parent / "problems"


@pytest.fixture(scope="session")
def rg16_text():
    return (PROBLEMS / "PDRG4x3x3.pd").read_text()


@pytest.fixture(scope="session")
def rg16_pd(rg16_text):
    return parse_file(rg16_text).pd


@pytest.fixture(scope="session")
def rg16_rmap(rg16_pd):
    return build_reduction_map(rg16_pd)


@pytest.fixture(scope="session")
def rg16_instance(rg16_pd, rg16_rmap):
    return assemble(rg16_pd, rg16_rmap)


@pytest.fixture(scope="session")
def rg12_text():
    return (DATA / "PDRG4x3x3_12rv.pd").read_text()


@pytest.fixture(scope="session")
def rg12_pd(rg12_text):
    return parse_file(rg12_text).pd
