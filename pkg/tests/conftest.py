import pytest
from click.testing import CliRunner

from core.constants import ArithmeticMode
from core.logger import setup_logger
from services.bounds_service import BoundsService
from services.marginals_service import MarginalsService
from services.measure_service import MeasureFamilyService
from services.oracle_service import OracleService
from services.table_service import TableService

RATIONAL = ArithmeticMode.RATIONAL
FLOATING = ArithmeticMode.FLOATING


@pytest.fixture(autouse=True, scope="session")
def quiet_logger():
    setup_logger("WARNING")


@pytest.fixture
def marginals():
    return MarginalsService()


@pytest.fixture
def measure_family(marginals):
    return MeasureFamilyService(marginals)


@pytest.fixture
def bounds(measure_family):
    return BoundsService(measure_family)


@pytest.fixture
def oracle(measure_family, bounds):
    return OracleService(measure_family, bounds)


@pytest.fixture
def tables(bounds):
    return TableService(bounds)


@pytest.fixture
def profile(marginals):
    """Builds a profile from decimal strings, floating by default."""

    def build(*values, mode=FLOATING):
        return marginals.from_raw([str(value) for value in values], mode)

    return build


@pytest.fixture
def uniform(marginals):
    def build(n, value, mode=RATIONAL):
        return marginals.uniform_profile(n, str(value), mode)

    return build


@pytest.fixture
def runner():
    return CliRunner()
