"""Arithmetic of the deformation parameter q = exp(i*pi/r) on the unit circle.

Everything downstream is phrased in terms of a single real deformation index
r > 1.  q-integers are evaluated as the real sine ratio sin(n*pi/r)/sin(pi/r)
rather than as a difference of complex powers, so they are exactly real; this
keeps the positivity analysis of the metric operator free of spurious
imaginary dust.  Fractional powers of q are always taken on the principal
branch exp(i*pi*x/r), never through a complex ** call.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

DEFAULT_TOL = 1e-10


class VanishingQFactorialError(ArithmeticError):
    """A q-factorial hit the vanishing factor [r]_q at a root of unity."""


@dataclass(frozen=True)
class QPhase:
    """Deformation parameter q = exp(i*pi/r).

    r is any real > 1 except 2.  Integer r >= 3 is the root-of-unity regime
    (q^r = -1) in which the state-space reduction machinery applies; r = 2 is
    rejected outright because the quantum group reduction degenerates there.
    """

    r: float

    def __post_init__(self):
        r = float(self.r)
        if not r > 1.0:
            raise ValueError(f"deformation index must satisfy r > 1, got {r!r}")
        if r == 2.0:
            raise ValueError("r = 2 (q = sqrt(-1)) is not supported")
        object.__setattr__(self, "r", r)

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi / self.r)

    @property
    def is_root_of_unity(self) -> bool:
        return self.r.is_integer() and self.r >= 3.0

    @property
    def r_int(self) -> int:
        if not self.r.is_integer():
            raise ValueError(f"r = {self.r} is not an integer")
        return int(self.r)

    def q_power(self, x) -> complex:
        """q**x on the principal branch, exp(i*pi*x/r), for any real x."""
        return cmath.exp(1j * math.pi * float(x) / self.r)

    def q_int(self, n) -> float:
        return q_int(self, n)

    def q_factorial(self, n: int) -> float:
        return q_factorial(self, n)


def q_int(phase: QPhase, n) -> float:
    """The q-integer [n] = sin(n*pi/r)/sin(pi/r); real for q on the unit circle."""
    return math.sin(float(n) * math.pi / phase.r) / math.sin(math.pi / phase.r)


def q_factorial(phase: QPhase, n: int) -> float:
    """[n]! = [1][2]...[n] with [0]! = 1.

    At a root of unity the factor [r]_q vanishes, so n >= r is rejected:
    every downstream use divides by a q-factorial.
    """
    if n < 0:
        raise ValueError(f"q-factorial needs n >= 0, got {n}")
    if phase.is_root_of_unity and n >= phase.r:
        raise VanishingQFactorialError(
            f"[{n}]! vanishes at r = {phase.r_int} (contains [r] = 0)"
        )
    out = 1.0
    for k in range(2, n + 1):
        out *= q_int(phase, k)
    return out


def approx_eq(a: complex, b: complex, tol: float = DEFAULT_TOL) -> bool:
    """Relative-scaled comparison: |a - b| <= tol * max(1, |a|, |b|)."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def to_half_integer(x) -> Fraction:
    """Coerce x to an exact element of (1/2)Z, rejecting anything else."""
    if isinstance(x, Fraction):
        f = x
    elif isinstance(x, int):
        f = Fraction(x)
    elif isinstance(x, float):
        f = Fraction(x).limit_denominator(2)
        if not math.isclose(float(f), x, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError(f"{x} is not a half-integer")
    elif isinstance(x, Real):
        return to_half_integer(float(x))
    else:
        raise TypeError(f"cannot interpret {x!r} as a half-integer")
    if f.denominator not in (1, 2):
        raise ValueError(f"{x} is not a half-integer")
    return f
