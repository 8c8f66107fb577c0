import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyplab.catalog import builtin_catalog, builtin_module_catalog  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def catalog_by_label(catalog):
    return {G.label: G for G in catalog}


@pytest.fixture(scope="session")
def module_catalog():
    return builtin_module_catalog()


@pytest.fixture(scope="session")
def modules_by_label(module_catalog):
    return {A.label: A for A in module_catalog}
