"""Admissible spin paths (Bratteli paths) and their counting formulas.

A path is a sequence (j_0, j_1, ..., j_N) of half-integers with j_0 = 0,
j_{k+1} = j_k +- 1/2 and j_k >= 0.  At a root of unity q = exp(i*pi/r) with
integer r >= 3 the restricted paths additionally satisfy 2 j_k + 1 < r for
k = 1..N; those are the paths whose Clebsch-Gordan data stays positive.

Half-integers are kept exact as Fractions.  Families are enumerated in
lexicographic order of the step signs with "+1/2" before "-1/2", which fixes
the basis ordering used everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .qnum import to_half_integer

HALF = Fraction(1, 2)


def _binom(n: int, k) -> int:
    if k != int(k) or k < 0 or k > n:
        return 0
    return math.comb(n, int(k))


@dataclass(frozen=True)
class BratteliPath:
    steps: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.steps or self.steps[0] != 0:
            raise ValueError("paths are rooted at j_0 = 0")
        for a, b in zip(self.steps, self.steps[1:]):
            if abs(b - a) != HALF or b < 0:
                raise ValueError(f"inadmissible step {a} -> {b}")

    @property
    def N(self) -> int:
        return len(self.steps) - 1

    @property
    def endpoint(self) -> Fraction:
        return self.steps[-1]

    def is_restricted(self, r: int) -> bool:
        return all(2 * j + 1 < r for j in self.steps[1:])

    def twice(self) -> list[int]:
        """Doubled integers (2 j_k), the JSON wire form."""
        return [int(2 * j) for j in self.steps]

    def __repr__(self):
        return "Path(" + ",".join(str(j) for j in self.steps) + ")"


@dataclass(frozen=True)
class PathFamily:
    N: int
    r: int | None
    endpoint: Fraction | None
    paths: tuple[BratteliPath, ...]

    def __len__(self):
        return len(self.paths)

    def endpoints(self) -> list[Fraction]:
        seen = []
        for p in self.paths:
            if p.endpoint not in seen:
                seen.append(p.endpoint)
        return seen

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "endpoint_twice": None if self.endpoint is None else int(2 * self.endpoint),
            "paths": [p.twice() for p in self.paths],
        }


def enumerate_paths(N: int, r: int | None = None, endpoint=None) -> PathFamily:
    """All admissible (optionally restricted, optionally endpoint-filtered) paths."""
    if N < 0:
        raise ValueError("chain length must be non-negative")
    if r is not None:
        if r != int(r) or int(r) < 3:
            raise ValueError(f"restriction index must be an integer >= 3, got {r}")
        r = int(r)
    j_end = None if endpoint is None else to_half_integer(endpoint)
    jmax_allowed = None if r is None else Fraction(r - 2, 2)

    out: list[BratteliPath] = []

    def grow(prefix: list[Fraction]):
        k = len(prefix) - 1
        if k == N:
            if j_end is None or prefix[-1] == j_end:
                out.append(BratteliPath(tuple(prefix)))
            return
        last = prefix[-1]
        for step in (HALF, -HALF):
            nxt = last + step
            if nxt < 0:
                continue
            if jmax_allowed is not None and nxt > jmax_allowed:
                continue
            if j_end is not None and abs(nxt - j_end) > Fraction(N - k - 1, 2):
                continue
            prefix.append(nxt)
            grow(prefix)
            prefix.pop()

    grow([Fraction(0)])
    return PathFamily(N=N, r=r, endpoint=j_end, paths=tuple(out))


def multiplicity(N: int, j) -> int:
    """mu_j = C(N, N/2 - j) - C(N, N/2 + j + 1), extended verbatim to any j.

    Out-of-range binomials vanish; for j < 0 this can go negative, exactly as
    the restricted dimension formula requires.
    """
    j = to_half_integer(j)
    if (Fraction(N, 2) - j).denominator != 1:
        raise ValueError(f"j = {j} has the wrong parity for N = {N}")
    return _binom(N, Fraction(N, 2) - j) - _binom(N, Fraction(N, 2) + j + 1)


def dim_gamma(N: int, j) -> int:
    """Number of paths of length N ending at j (generic-q multiplicity)."""
    j = to_half_integer(j)
    if j < 0 or j > Fraction(N, 2):
        raise ValueError(f"endpoint j = {j} outside [0, N/2]")
    return multiplicity(N, j)


def dim_gamma_restricted(N: int, j, r: int) -> int:
    """Number of restricted paths ending at j: sum_k mu_{j + r k}."""
    j = to_half_integer(j)
    if r != int(r) or int(r) < 3:
        raise ValueError(f"restriction index must be an integer >= 3, got {r}")
    r = int(r)
    if 2 * j + 1 >= r:
        raise ValueError(f"endpoint j = {j} is not restricted at r = {r}")
    total = 0
    kmax = N // r + 2
    for k in range(-kmax, kmax + 1):
        total += multiplicity(N, j + r * k) if abs(j + r * k) <= Fraction(N, 2) + r else 0
    return total
