# ABOUTME: Built-in benchmark suite of ODE systems across the stability regimes
# ABOUTME: Each system carries an analytic Jacobian; most also carry a closed-form flow

import math

import numpy as np

from app.errors import UsageError
from app.systems.models import StateVector, System

# van der Pol
VDP_MU = 1.0

# Two Hopf normal-form oscillators; golden-ratio frequency ratio keeps the flow quasiperiodic
TORUS_OMEGA_1 = 1.0
TORUS_OMEGA_2 = (1.0 + math.sqrt(5.0)) / 2.0

# Lorenz
LORENZ_SIGMA = 10.0
LORENZ_RHO = 28.0
LORENZ_BETA = 8.0 / 3.0
LORENZ_MAX_HORIZON = 20.0


def _linear_system(name: str, a: np.ndarray, exact, x0, description: str, regime) -> System:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return System(
        name=name,
        dimension=a.shape[0],
        rhs=lambda t, x: a @ x,
        jacobian=lambda t, x: a.copy(),
        exact=exact,
        default_x0=x0,
        description=description,
        regime=regime,
        parameters={"A": a.tolist()},
    )


def _rotation_matrix(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, s], [-s, c]])


def make_decay() -> System:
    return _linear_system(
        "decay", [[-1.0]],
        exact=lambda t, x0: math.exp(-t) * np.asarray(x0, dtype=np.float64),
        x0=[1.0],
        description="x' = -x, stable hyperbolic fixed point",
        regime="fixed-point",
    )


def make_expand() -> System:
    return _linear_system(
        "expand", [[1.0]],
        exact=lambda t, x0: math.exp(t) * np.asarray(x0, dtype=np.float64),
        x0=[1.0],
        description="x' = x, unstable fixed point",
        regime="unstable",
    )


def make_rotation() -> System:
    return _linear_system(
        "rotation", [[0.0, 1.0], [-1.0, 0.0]],
        exact=lambda t, x0: _rotation_matrix(t) @ np.asarray(x0, dtype=np.float64),
        x0=[1.0, 0.0],
        description="x' = [x2, -x1], neutral rotation (orthogonal flow)",
        regime="neutral",
    )


def make_stable_focus() -> System:
    return _linear_system(
        "stable_focus", [[-1.0, 1.0], [-1.0, -1.0]],
        exact=lambda t, x0: math.exp(-t) * (_rotation_matrix(t) @ np.asarray(x0, dtype=np.float64)),
        x0=[1.0, 0.0],
        description="x' = [-x1 + x2, -x1 - x2], stable spiral",
        regime="fixed-point",
    )


def make_zero_system(dimension: int = 2, x0=None) -> System:
    """f = 0 in R^dimension; every point is fixed."""
    if x0 is None:
        x0 = [3.0, 4.0] if dimension == 2 else [1.0] * dimension
    return System(
        name="zero",
        dimension=dimension,
        rhs=lambda t, x: np.zeros(dimension),
        jacobian=lambda t, x: np.zeros((dimension, dimension)),
        exact=lambda t, x0: np.array(x0, dtype=np.float64),
        default_x0=x0,
        description="x' = 0, every point fixed",
        regime="neutral",
    )


def _forced_decay_rhs(t: float, x: StateVector) -> np.ndarray:
    return np.array([-x[0] + math.sin(t)])


def _forced_decay_exact(t: float, x0: StateVector) -> np.ndarray:
    return np.array([(x0[0] + 0.5) * math.exp(-t) + 0.5 * (math.sin(t) - math.cos(t))])


def make_forced_decay() -> System:
    return System(
        name="forced_decay",
        dimension=1,
        rhs=_forced_decay_rhs,
        jacobian=lambda t, x: np.array([[-1.0]]),
        exact=_forced_decay_exact,
        default_x0=[1.0],
        description="x' = -x + sin t, nonautonomous, attracting periodic response",
        regime="fixed-point",
        autonomous=False,
    )


def make_vdp(mu: float = VDP_MU) -> System:
    def rhs(t, x):
        return np.array([x[1], mu * (1.0 - x[0] * x[0]) * x[1] - x[0]])

    def jacobian(t, x):
        return np.array([
            [0.0, 1.0],
            [-2.0 * mu * x[0] * x[1] - 1.0, mu * (1.0 - x[0] * x[0])],
        ])

    return System(
        name="vdp",
        dimension=2,
        rhs=rhs,
        jacobian=jacobian,
        default_x0=[0.5, 0.0],
        description=f"van der Pol, mu={mu:g}, stable hyperbolic limit cycle",
        regime="cycle",
        parameters={"mu": mu},
    )


def _hopf_plane(u: float, v: float, omega: float) -> tuple[float, float]:
    s = 1.0 - u * u - v * v
    return u * s - omega * v, v * s + omega * u


def _hopf_block(u: float, v: float, omega: float) -> list[list[float]]:
    s = 1.0 - u * u - v * v
    return [
        [s - 2.0 * u * u, -2.0 * u * v - omega],
        [-2.0 * u * v + omega, s - 2.0 * v * v],
    ]


def _hopf_flow(t: float, u: float, v: float, omega: float) -> tuple[float, float]:
    r0_sq = u * u + v * v
    if r0_sq == 0.0:
        return 0.0, 0.0
    r = 1.0 / math.sqrt(1.0 + (1.0 / r0_sq - 1.0) * math.exp(-2.0 * t))
    theta = math.atan2(v, u) + omega * t
    return r * math.cos(theta), r * math.sin(theta)


def make_torus4(omega_1: float = TORUS_OMEGA_1, omega_2: float = TORUS_OMEGA_2) -> System:
    def rhs(t, x):
        du, dv = _hopf_plane(x[0], x[1], omega_1)
        dp, dq = _hopf_plane(x[2], x[3], omega_2)
        return np.array([du, dv, dp, dq])

    def jacobian(t, x):
        jac = np.zeros((4, 4))
        jac[:2, :2] = _hopf_block(x[0], x[1], omega_1)
        jac[2:, 2:] = _hopf_block(x[2], x[3], omega_2)
        return jac

    def exact(t, x0):
        u, v = _hopf_flow(t, x0[0], x0[1], omega_1)
        p, q = _hopf_flow(t, x0[2], x0[3], omega_2)
        return np.array([u, v, p, q])

    return System(
        name="torus4",
        dimension=4,
        rhs=rhs,
        jacobian=jacobian,
        exact=exact,
        default_x0=[0.5, 0.0, 0.5, 0.0],
        description="two Hopf oscillators, attracting 2-torus with quasiperiodic flow",
        regime="torus",
        parameters={"omega_1": omega_1, "omega_2": omega_2},
    )


def make_lorenz(
    sigma: float = LORENZ_SIGMA, rho: float = LORENZ_RHO, beta: float = LORENZ_BETA
) -> System:
    def rhs(t, x):
        return np.array([
            sigma * (x[1] - x[0]),
            x[0] * (rho - x[2]) - x[1],
            x[0] * x[1] - beta * x[2],
        ])

    def jacobian(t, x):
        return np.array([
            [-sigma, sigma, 0.0],
            [rho - x[2], -1.0, -x[0]],
            [x[1], x[0], -beta],
        ])

    return System(
        name="lorenz",
        dimension=3,
        rhs=rhs,
        jacobian=jacobian,
        default_x0=[1.0, 1.0, 1.0],
        description="Lorenz, chaotic attractor (outside every stability hypothesis)",
        regime="chaotic",
        max_study_horizon=LORENZ_MAX_HORIZON,
        parameters={"sigma": sigma, "rho": rho, "beta": beta},
    )


_FACTORIES = {
    "decay": make_decay,
    "expand": make_expand,
    "rotation": make_rotation,
    "stable_focus": make_stable_focus,
    "forced_decay": make_forced_decay,
    "vdp": make_vdp,
    "torus4": make_torus4,
    "lorenz": make_lorenz,
    "zero": make_zero_system,
}


def builtin_suite() -> list[System]:
    """All built-in systems, in a fixed order."""
    return [factory() for factory in _FACTORIES.values()]


def system_names() -> list[str]:
    return list(_FACTORIES)


def get_system(name: str) -> System:
    """Look up a built-in system by name."""
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise UsageError(
            f"Unknown system '{name}', expected one of: {', '.join(_FACTORIES)}"
        ) from None
