import numpy as np
import pytest

from accustripes.ingest import EnsembleDataset, EnsembleRow


@pytest.fixture
def lognormal_ensemble():
    """Three heavy-tailed rows, seeded."""
    rng = np.random.default_rng(11)
    rows = [
        EnsembleRow(f"tile_{i:03d}", rng.lognormal(2.0, 0.8, 400))
        for i in range(3)
    ]
    return EnsembleDataset.from_rows(rows, "volume")


@pytest.fixture
def small_csv(tmp_path):
    path = tmp_path / "particles.csv"
    path.write_text(
        "volume,sphericity,cx,cy,cz\n"
        "10,95.5,1.0,2.0,3.0\n"
        "20,80.25,4.0,5.0,6.0\n"
    )
    return path
