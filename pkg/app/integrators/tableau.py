# ABOUTME: Butcher tableaux for the explicit one-step methods
# ABOUTME: Method objects validate consistency and row-sum conditions on construction

from dataclasses import dataclass

from app.errors import UsageError

_TOLERANCE = 1e-14


@dataclass(frozen=True)
class Method:
    """
    Explicit Runge-Kutta method given by its Butcher tableau.

    a is strictly lower triangular: row i holds a_i0 .. a_i(i-1).
    """
    name: str
    order: int
    a: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        s = len(self.b)
        if len(self.a) != s or len(self.c) != s:
            raise UsageError(f"Tableau '{self.name}' has inconsistent stage counts")
        if self.order < 1:
            raise UsageError(f"Order must be positive, got {self.order}")
        if abs(sum(self.b) - 1.0) > _TOLERANCE:
            raise UsageError(f"Tableau '{self.name}' weights sum to {sum(self.b)}, not 1")
        for i, row in enumerate(self.a):
            if len(row) != i:
                raise UsageError(f"Tableau '{self.name}' row {i} is not strictly lower triangular")
            if abs(sum(row) - self.c[i]) > _TOLERANCE:
                raise UsageError(f"Tableau '{self.name}' row {i} breaks c_i = sum_j a_ij")

    @property
    def stages(self) -> int:
        return len(self.b)

    def __str__(self) -> str:
        return f"{self.name} (order {self.order}, {self.stages} stages)"


EULER = Method(
    name="euler",
    order=1,
    a=((),),
    b=(1.0,),
    c=(0.0,),
)

MIDPOINT = Method(
    name="midpoint",
    order=2,
    a=((), (0.5,)),
    b=(0.0, 1.0),
    c=(0.0, 0.5),
)

RK4 = Method(
    name="rk4",
    order=4,
    a=((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0)),
    b=(1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0),
    c=(0.0, 0.5, 0.5, 1.0),
)

METHODS = {m.name: m for m in (EULER, MIDPOINT, RK4)}


def get_method(name: str) -> Method:
    """Look up a method by name."""
    try:
        return METHODS[name]
    except KeyError:
        raise UsageError(
            f"Unknown method '{name}', expected one of: {', '.join(METHODS)}"
        ) from None
