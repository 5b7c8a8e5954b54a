"""Dormand-Prince 5(4) stepper for planar fields.

The tracer needs control between steps (chart handoff, landing tests, ball
tests), so this is a step generator rather than a solve-to-time routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

Field = Callable[[float, float], tuple]

# Butcher tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


@dataclass
class StepperConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = 0.05
    first_step: float = 1e-4
    min_step: float = 1e-14

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


def rk_step(f: Field, x: float, y: float, h: float, k1=None):
    """One Dormand-Prince step; returns the new point, error estimate and the FSAL slope."""
    ks = [k1 if k1 is not None else f(x, y)]
    for i in range(1, 7):
        a = _A[i]
        dx = dy = 0.0
        for j, aij in enumerate(a):
            if aij:
                dx += aij * ks[j][0]
                dy += aij * ks[j][1]
        ks.append(f(x + h * dx, y + h * dy))
    nx = x + h * sum(b * k[0] for b, k in zip(_B, ks))
    ny = y + h * sum(b * k[1] for b, k in zip(_B, ks))
    ex = h * sum(e * k[0] for e, k in zip(_E, ks))
    ey = h * sum(e * k[1] for e, k in zip(_E, ks))
    return nx, ny, ex, ey, ks[6]


def steps(f: Field, x: float, y: float, cfg: StepperConfig, h: float | None = None) -> Iterator[tuple]:
    """Yield accepted ``(x, y, h)`` states of an adaptive integration of ``f``.

    Runs until the consumer stops iterating; raises ``FloatingPointError`` if
    the step size collapses below ``cfg.min_step``.
    """
    h = h or cfg.first_step
    k1 = f(x, y)
    while True:
        h = min(h, cfg.max_step)
        nx, ny, ex, ey, k7 = rk_step(f, x, y, h, k1)
        sx = cfg.atol + cfg.rtol * max(abs(x), abs(nx))
        sy = cfg.atol + cfg.rtol * max(abs(y), abs(ny))
        err = math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2)
        if err <= 1.0 and math.isfinite(nx) and math.isfinite(ny):
            x, y, k1 = nx, ny, k7
            yield x, y, h
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            h *= max(0.2, factor)
        else:
            factor = 0.2 if not math.isfinite(err) else max(0.2, 0.9 * err ** -0.25)
            h *= factor
            if h < cfg.min_step:
                raise FloatingPointError("step size underflow")
