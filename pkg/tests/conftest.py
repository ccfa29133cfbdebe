import pytest

from tripodgate.config import bundled_config_path, load_config
from tripodgate.params import AtomParams, FieldParams, MediumParams

REFERENCE_DELTAS = (10.01, 10.0, 10.02)


@pytest.fixture(scope="session")
def ref():
    sp, _ = load_config(bundled_config_path(), environ={})
    return sp


@pytest.fixture
def ref_atom():
    return AtomParams(*REFERENCE_DELTAS, gamma_d=0.01)


@pytest.fixture
def default_fields():
    return FieldParams(1.0, 1.0, 4.5)


@pytest.fixture
def medium():
    return MediumParams()
