import os

import pytest

from qembench import synthetic

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def find_telco_csv():
    """Locate the public churn CSV, if the user provided it."""
    for env in ("QEMBENCH_TELCO_CSV", "QEMBENCH_DATA"):
        path = os.environ.get(env)
        if path and os.path.exists(path):
            return path
    default = os.path.join(os.path.dirname(__file__), os.pardir, "data", "telco_churn.csv")
    if os.path.exists(default):
        return os.path.abspath(default)
    return None


TELCO_PATH = find_telco_csv()

requires_dataset = pytest.mark.skipif(
    TELCO_PATH is None,
    reason="dataset not present: public churn CSV not found "
    "(set QEMBENCH_TELCO_CSV or place it at data/telco_churn.csv)",
)


@pytest.fixture(scope="session")
def fixture_csv_20():
    return os.path.join(FIXTURES, "telco_synth_20.csv")


@pytest.fixture(scope="session")
def synth_csv(tmp_path_factory):
    """A 700-row synthetic churn file with learnable signal."""
    path = tmp_path_factory.mktemp("data") / "synth700.csv"
    synthetic.write_csv(path, 700, seed=11)
    return str(path)
