# ABOUTME: Tests for the built-in system suite
# ABOUTME: Checks names, regimes, closed-form flows and lookup errors

import math

import numpy as np
import pytest

from app.errors import UsageError
from app.integrators.stepper import integrate
from app.integrators.tableau import RK4
from app.systems.builtin import (
    LORENZ_MAX_HORIZON,
    builtin_suite,
    get_system,
    make_torus4,
    make_zero_system,
    system_names,
)
from app.systems.rhs import evaluate


def test_suite_covers_every_regime():
    """The suite spans fixed points, cycles, tori and the contrast cases"""
    regimes = {system.regime for system in builtin_suite()}

    assert {"fixed-point", "cycle", "torus", "neutral", "unstable", "chaotic"} <= regimes


def test_suite_order_is_fixed():
    """builtin_suite and system_names agree and never reorder"""
    assert [s.name for s in builtin_suite()] == system_names()
    assert system_names()[:3] == ["decay", "expand", "rotation"]


def test_decay_exact_flow():
    """decay has exact(t, [1]) = [e^-t]"""
    decay = get_system("decay")

    assert decay.exact_at(1.0, np.array([1.0]))[0] == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_vdp_has_no_exact_flow():
    """vdp is two-dimensional with no closed form"""
    vdp = get_system("vdp")

    assert vdp.dimension == 2
    assert vdp.has_exact is False
    assert vdp.parameters["mu"] == 1.0


def test_lorenz_is_capped_for_studies():
    """Lorenz references cannot be certified on long horizons"""
    lorenz = get_system("lorenz")

    assert lorenz.max_study_horizon == LORENZ_MAX_HORIZON
    assert lorenz.has_exact is False


def test_forced_decay_is_nonautonomous():
    """The forced system depends on t explicitly"""
    forced = get_system("forced_decay")

    assert forced.autonomous is False
    assert forced.rhs(math.pi / 2, np.array([0.0]))[0] == pytest.approx(1.0)


def test_exact_flows_match_fine_integration():
    """Every closed-form flow agrees with rk4 at h=1e-3 on [0, 1]"""
    for system in builtin_suite():
        if not system.has_exact:
            continue
        trajectory = integrate(RK4, system, system.default_x0, 0.0, 1.0, 1e-3)
        exact = system.exact_at(1.0, system.default_x0)
        np.testing.assert_allclose(trajectory.final_state, exact, atol=1e-10, err_msg=system.name)


def test_exact_flows_satisfy_the_ode():
    """Central-difference d/dt of each exact flow equals the rhs at 10 times"""
    rng = np.random.default_rng(5)
    delta = 1e-5
    for system in builtin_suite():
        if not system.has_exact:
            continue
        x0 = system.default_x0
        for t in rng.uniform(0.1, 5.0, size=10):
            derivative = (system.exact_at(t + delta, x0) - system.exact_at(t - delta, x0)) / (2 * delta)
            f = evaluate(system, t, system.exact_at(t, x0))
            scale = 1.0 + np.max(np.abs(f))
            assert np.max(np.abs(derivative - f)) <= 1e-6 * scale, f"{system.name} at t={t}"


def test_torus4_exact_flow_reaches_unit_radius():
    """From default_x0 both planes settle on radius 1 by t=50"""
    torus = make_torus4()
    x = torus.exact_at(50.0, torus.default_x0)

    assert abs(x[0] ** 2 + x[1] ** 2 - 1.0) < 1e-6
    assert abs(x[2] ** 2 + x[3] ** 2 - 1.0) < 1e-6


def test_torus4_integration_reaches_unit_radius():
    """Numerical trajectory agrees with the attracting torus"""
    torus = make_torus4()
    x = integrate(RK4, torus, torus.default_x0, 0.0, 50.0, 0.01).final_state

    assert abs(x[0] ** 2 + x[1] ** 2 - 1.0) < 1e-6
    assert abs(x[2] ** 2 + x[3] ** 2 - 1.0) < 1e-6


def test_zero_system_any_dimension():
    """f = 0 in any dimension, with an exact constant flow"""
    zero = make_zero_system(5)

    assert zero.dimension == 5
    assert zero.rhs(0.0, np.ones(5)).tolist() == [0.0] * 5
    assert zero.exact_at(3.0, np.arange(5.0)).tolist() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert make_zero_system().default_x0.tolist() == [3.0, 4.0]


def test_get_system_returns_fresh_instances():
    """Lookups build new System objects"""
    assert get_system("decay") is not get_system("decay")


def test_unknown_system_lists_choices():
    """Unknown names are usage errors naming the valid ones"""
    with pytest.raises(UsageError) as excinfo:
        get_system("duffing")

    assert "decay" in str(excinfo.value)
