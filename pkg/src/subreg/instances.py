"""Named base pairs shared by the suite and the tests.

Each instance carries the facts known in closed form: whether the
subdifferential is (strongly) subregular there and, where it is forced
analytically, the value of the constant on the default grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import (
    Abs,
    BasePair,
    IndicatorBox,
    MaxAffine,
    PowerEven,
    Quadratic,
    Scaled,
    Separable,
    Sum,
    Tilted,
)


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    bp: BasePair
    subregular: bool | None  # None: solution set not kept exact
    strongly_subregular: bool
    kappa: float | None = None
    c: float | None = None
    c_strong: float | None = None
    smooth: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.bp.f.dim


def _q(A, b=None) -> Quadratic:
    A = np.atleast_2d(np.array(A, dtype=float))
    return Quadratic(A, np.zeros(A.shape[0]) if b is None else b)


SQUARE = _q([[2.0]])  # x^2
HALF_SQUARE = _q([[1.0]])  # x^2 / 2
RAMP = MaxAffine([[0.0], [1.0]], [0.0, 0.0])  # max(0, x)


def catalog_instances() -> list[Instance]:
    """The regularity matrix: 1-D instances first, then 2-D."""
    return [
        Instance("square", BasePair(SQUARE, [0.0], [0.0]), True, True, 0.5, 1.0, 1.0, smooth=True),
        Instance(
            "quartic", BasePair(PowerEven(4), [0.0], [0.0]), False, False, smooth=True, notes={"isolated": True}
        ),
        Instance("abs", BasePair(Abs(), [0.0], [0.0]), True, True, 1.0, 1.0, 1.0),
        Instance("ramp_left", BasePair(RAMP, [-1.0], [0.0], radius=2.0), True, False, 1.0),
        Instance("ramp_kink", BasePair(RAMP, [0.0], [0.0]), True, False, 1.0, 1.0),
        Instance("ramp_right", BasePair(RAMP, [1.0], [1.0], radius=2.0), True, False, 1.0),
        Instance("scaled_square", BasePair(Scaled(SQUARE, 2.0), [0.0], [0.0]), True, True, 0.25, 2.0, 2.0, smooth=True),
        Instance("square_plus_abs", BasePair(Sum(SQUARE, Abs()), [0.0], [0.0]), None, True, c_strong=2.0),
        Instance("tilted_square", BasePair(Tilted(SQUARE, [1.0]), [0.5], [0.0]), True, True, 0.5, 1.0, 1.0, smooth=True),
        Instance("indicator", BasePair(IndicatorBox([0.0], [1.0]), [0.0], [-1.0]), True, True, 1.0, 1.0, 1.0),
        Instance("diag24", BasePair(_q(np.diag([2.0, 4.0])), [0.0, 0.0], [0.0, 0.0]), True, True, 0.5, 1.0, 1.0, smooth=True),
        Instance("diag20", BasePair(_q(np.diag([2.0, 0.0])), [0.0, 0.0], [0.0, 0.0]), True, False, 0.5, 1.0, smooth=True),
        Instance("coupled", BasePair(_q([[2.0, 1.0], [1.0, 2.0]]), [0.0, 0.0], [0.0, 0.0]), True, True, 1.0, 0.5, 0.5, smooth=True),
        Instance(
            "sep_abs_square", BasePair(Separable((Abs(), SQUARE)), [0.0, 0.0], [0.0, 0.0]), True, True, 1.0, 1.0, 1.0
        ),
        Instance(
            "linf",
            BasePair(MaxAffine([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0.0] * 4), [0.0, 0.0], [0.0, 0.0]),
            None,
            True,
        ),
    ]


def instance(name: str) -> Instance:
    for inst in catalog_instances():
        if inst.name == name:
            return inst
    raise KeyError(name)


def sum_rule_pairs() -> list[tuple[str, BasePair, BasePair, float]]:
    """(name, f, g, exact strong growth constant of f + g on the unit ball)."""
    z = [0.0]
    return [
        ("square+double_square", BasePair(SQUARE, z, z), BasePair(Scaled(SQUARE, 2.0), z, z), 3.0),
        ("square+abs", BasePair(SQUARE, z, z), BasePair(Abs(), z, z), 2.0),
        (
            "diag24+coupled",
            BasePair(_q(np.diag([2.0, 4.0])), [0.0, 0.0], [0.0, 0.0]),
            BasePair(_q([[2.0, 1.0], [1.0, 2.0]]), [0.0, 0.0], [0.0, 0.0]),
            (5.0 - 2.0**0.5) / 2,
        ),
    ]


def conjugate_instances() -> list[tuple[str, BasePair, float]]:
    """(name, base pair, radius of the dual neighbourhood V)."""
    return [
        ("half_square", BasePair(HALF_SQUARE, [0.0], [0.0]), 1.0),
        ("abs", BasePair(Abs(), [0.0], [0.0]), 2.0),
        ("indicator", BasePair(IndicatorBox([0.0], [1.0]), [0.0], [-1.0]), 2.0),
        ("ramp_kink", BasePair(RAMP, [0.0], [0.0]), 1.0),
        ("square", BasePair(SQUARE, [0.0], [0.0]), 1.0),
    ]
