# ABOUTME: Long-horizon checks of the conditioning regimes, orders and error bound
# ABOUTME: Closed-form oracles where they exist, growth classes elsewhere

import json
import math

import pytest

from app.conditioning.models import GrowthClass
from app.integrators.tableau import EULER, MIDPOINT, RK4
from app.main import run
from app.studies.runner import StudyRunner
from app.systems.builtin import get_system

pytestmark = pytest.mark.integration


def _regime(name, t_final, h, queries=200):
    return StudyRunner().regime_experiment(get_system(name), t_final, h, queries=queries)


class TestRegimes:
    """Growth of E(t) on each built-in system"""

    def test_decay_is_constant(self):
        """E(40) = 1 - e^-40"""
        curve, report = _regime("decay", 40.0, 1e-3)

        assert 0.999 <= curve.values[-1] <= 1.001
        assert report.growth_class is GrowthClass.CONSTANT

    def test_rotation_is_linear(self):
        """E(t) = t for a rotation"""
        curve, report = _regime("rotation", 50.0, 1e-3)

        assert 49.75 <= curve.values[-1] <= 50.25
        assert report.growth_class is GrowthClass.LINEAR

    def test_expand_is_exponential(self):
        """E(5) = e^5 - 1"""
        curve, report = _regime("expand", 5.0, 1e-3)

        assert curve.values[-1] == pytest.approx(math.exp(5.0) - 1.0, rel=0.02)
        assert report.growth_class is GrowthClass.EXPONENTIAL

    def test_limit_cycle_is_linear(self):
        """Van der Pol grows linearly along its attracting cycle"""
        curve, report = _regime("vdp", 200.0, 1e-3, queries=201)

        assert curve.query_times[100] == pytest.approx(100.0)
        assert report.growth_class is GrowthClass.LINEAR
        assert report.tail_linear_fit.r_squared >= 0.99
        assert 1.6 <= curve.values[-1] / curve.values[100] <= 2.4

    def test_torus_is_linear(self):
        """Quasiperiodic flow on a torus grows linearly"""
        _, report = _regime("torus4", 200.0, 1e-3)

        assert report.growth_class is GrowthClass.LINEAR

    def test_lorenz_is_exponential(self):
        """Chaotic flow grows near its leading Lyapunov exponent"""
        _, report = _regime("lorenz", 20.0, 1e-4)

        assert report.growth_class is GrowthClass.EXPONENTIAL
        assert 0.5 <= report.tail_exp_fit.slope <= 1.3


@pytest.mark.parametrize("method,low,high", [
    (RK4, 3.7, 4.3),
    (EULER, 0.9, 1.1),
    (MIDPOINT, 1.7, 2.3),
])
def test_observed_orders(method, low, high):
    """Observed orders on decay match the method order"""
    decay = get_system("decay")
    study = StudyRunner().convergence_study(decay, method, 1.0, 0.1, 4)

    assert all(low <= p <= high for p in study.observed_orders)


@pytest.mark.parametrize("name,t_final,h0", [
    ("decay", 20.0, 0.05),
    ("rotation", 50.0, 0.02),
    ("vdp", 10.0, 0.1),
])
def test_bound_verified(name, t_final, h0):
    """K(h) stays within a factor 2 across four halvings"""
    report = StudyRunner().bound_check(get_system(name), RK4, t_final, h0, 4, 0.01)

    assert report.verified
    ks = [k for _, k in report.per_level]
    assert len(ks) == 4
    assert all(0.5 <= a / b <= 2.0 for a, b in zip(ks, ks[1:]))


def test_cli_regime_json(tmp_path, capsys):
    """regime through the CLI writes the curve and reports the class"""
    out = tmp_path / "rotation.csv"
    code = run([
        "regime", "--system", "rotation", "--t-final", "50", "--h", "0.001",
        "--out", str(out), "--svg", "--json",
    ])

    assert code == 0
    stdout = capsys.readouterr().out
    payload = json.loads(stdout[stdout.index("{"):])
    assert payload["growth"]["class"] == "Linear"
    assert 49.75 <= payload["E_final"] <= 50.25
    assert (tmp_path / "rotation.svg").exists()
