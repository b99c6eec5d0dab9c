import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zoneloc.belief import MassFunction  # noqa: E402
from zoneloc.statfit import Family, FittedDistribution, ObservationModel  # noqa: E402


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def random_mass(rng, n_zones, max_focal=None):
    """Random normalized mass function with a random number of focal sets."""
    universe = np.arange(1, 1 << n_zones)
    k = int(rng.integers(1, (max_focal or universe.size) + 1))
    focal = rng.choice(universe, size=min(k, universe.size), replace=False)
    w = rng.random(focal.size) + 1e-3
    w /= w.sum()
    return MassFunction(n_zones, {int(b): float(v) for b, v in zip(focal, w)})


def random_model(rng, n_zones, n_aps, p_degenerate=0.1):
    """Observation model with random Normal/Logistic cells, no fitting involved."""
    table = {}
    for ap in range(n_aps):
        for bits in range(1, 1 << n_zones):
            if rng.random() < p_degenerate:
                table[(ap, bits)] = FittedDistribution.degenerate_marker(int(rng.integers(0, 3)))
                continue
            family = Family.NORMAL if rng.random() < 0.5 else Family.LOGISTIC
            params = (float(rng.uniform(-90, -30)), float(rng.uniform(2, 15)))
            table[(ap, bits)] = FittedDistribution(
                family=family, params=params, ks_stat=float(rng.random()), accepted=True, n=50
            )
    zones = tuple(f"Z{k + 1}" for k in range(n_zones))
    aps = tuple(f"AP{n + 1}" for n in range(n_aps))
    return ObservationModel(zones=zones, aps=aps, table=table)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
