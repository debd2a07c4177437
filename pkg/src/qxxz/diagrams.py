"""Symbolic Temperley-Lieb diagram calculus over exact Laurent polynomials.

This module is the oracle that never touches floating point or matrices.  A
word in the generators e_i is a planar diagram; its class in the irreducible
quotient module W_k is determined by the cap structure on the bottom edge:
k+1 disjoint nested caps plus through strands, with no through strand trapped
under a cap.  Generators act by composition from below; a closed loop inserts
the exact two-term factor -(q + q^{-1}); a composition that raises the cap
count falls into the next ideal and is the zero class.

Hecke generators act through b_i = q^{-1} + e_i, so braid words evaluate to
dictionaries mapping cap diagrams to integer Laurent polynomials in q.  The
central element (parity braid)^2 must come out as an exact monomial times the
starting diagram; the module reports that exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence


class LaurentPoly:
    """Laurent polynomial in q with integer coefficients (exact arithmetic)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | int = 0):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs} if coeffs else {}
        self.coeffs = {e: c for e, c in coeffs.items() if c != 0}

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def loop_factor(cls) -> "LaurentPoly":
        return cls({1: -1, -1: -1})  # -(q + q^{-1})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        out = LaurentPoly(1)
        for _ in range(n):
            out = out * self
        return out

    def as_monomial(self) -> tuple[int, int]:
        """(exponent, coefficient) if this is a single term, else ValueError."""
        if len(self.coeffs) != 1:
            raise ValueError(f"not a monomial: {self}")
        ((e, c),) = self.coeffs.items()
        return e, c

    def evaluate(self, q: complex) -> complex:
        return sum(c * q**e for e, c in self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"{c}*q^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(parts)


@dataclass(frozen=True)
class CapDiagram:
    """Bottom half of a planar Temperley-Lieb diagram on n points (1-based).

    caps is a sorted tuple of disjoint (a, b) pairs, a < b, pairwise
    non-crossing; every unpaired point is a through strand and may not lie
    strictly inside any cap.
    """

    n: int
    caps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for a, b in self.caps:
            if not (1 <= a < b <= self.n):
                raise ValueError(f"cap ({a},{b}) out of range")
            if a in seen or b in seen:
                raise ValueError("caps are not disjoint")
            seen.update((a, b))
        for a, b in self.caps:
            for c, d in self.caps:
                if a < c < b < d:
                    raise ValueError(f"caps ({a},{b}) and ({c},{d}) cross")
        for p in range(1, self.n + 1):
            if p not in seen:
                if any(a < p < b for a, b in self.caps):
                    raise ValueError(f"through strand {p} trapped under a cap")
        object.__setattr__(self, "caps", tuple(sorted(self.caps)))

    @property
    def n_caps(self) -> int:
        return len(self.caps)

    @property
    def through(self) -> tuple[int, ...]:
        paired = {p for cap in self.caps for p in cap}
        return tuple(p for p in range(1, self.n + 1) if p not in paired)

    def partner(self) -> dict[int, int]:
        out = {}
        for a, b in self.caps:
            out[a] = b
            out[b] = a
        return out


def identity_diagram(n: int) -> CapDiagram:
    return CapDiagram(n=n, caps=())


def act_tl(d: CapDiagram, i: int) -> tuple[CapDiagram, int, bool]:
    """Compose the generator e_i below the diagram d.

    Returns (result, loops, raised) where loops counts closed circles (each
    worth -(q+q^{-1})) and raised flags that the cap count increased (the
    zero class in a fixed module W_k).
    """
    if not 1 <= i <= d.n - 1:
        raise IndexError(f"generator index {i} outside 1..{d.n - 1}")
    partner = d.partner()
    a = partner.get(i)
    b = partner.get(i + 1)
    caps = set(d.caps)
    if a is None and b is None:
        caps.add((i, i + 1))
        return CapDiagram(d.n, tuple(caps)), 0, True
    if a == i + 1:
        return d, 1, False
    if a is not None and b is None:
        caps.remove(tuple(sorted((i, a))))
        caps.add((i, i + 1))
        return CapDiagram(d.n, tuple(caps)), 0, False
    if a is None and b is not None:
        caps.remove(tuple(sorted((i + 1, b))))
        caps.add((i, i + 1))
        return CapDiagram(d.n, tuple(caps)), 0, False
    caps.remove(tuple(sorted((i, a))))
    caps.remove(tuple(sorted((i + 1, b))))
    caps.add((i, i + 1))
    caps.add(tuple(sorted((a, b))))
    return CapDiagram(d.n, tuple(caps)), 0, False


def act_generator(d: CapDiagram, i: int) -> tuple[CapDiagram | None, LaurentPoly]:
    """Module action of e_i on a basis diagram of W_k (k+1 = d.n_caps).

    Cap-raising results are the zero class: returns (None, 0)."""
    result, loops, raised = act_tl(d, i)
    if raised:
        return None, LaurentPoly(0)
    return result, LaurentPoly.loop_factor() ** loops if loops else LaurentPoly(1)


def jumps(word: Sequence[int]) -> int:
    """Number of adjacent index gaps > 1 in a generator word."""
    return sum(1 for a, b in zip(word, word[1:]) if abs(a - b) > 1)


def word_diagram(N: int, word: Sequence[int]) -> tuple[CapDiagram, int]:
    """Bottom half-diagram of a generator word, with its closed-loop count."""
    d = identity_diagram(N)
    loops = 0
    for i in reversed(list(word)):
        d, dl, _ = act_tl(d, i)
        loops += dl
    return d, loops


def basis_words(N: int, k: int) -> list[tuple[int, ...]]:
    """Levy's reduced words w_{m_1..m_{k+1}} with m_i >= 2i-1 increasing.

    Each factor is the descending run e_{m_i} e_{m_i - 1} ... e_{2i-1}.
    k = -1 denotes the trivial module (empty word)."""
    if k == -1:
        return [()]
    out = []

    def choose(i: int, start: int, acc: list[int]):
        if i == k + 2:
            word: list[int] = []
            for pos, m in enumerate(acc, start=1):
                word.extend(range(m, 2 * pos - 2, -1))
            out.append(tuple(word))
            return
        for m in range(max(start, 2 * i - 1), N):
            choose(i + 1, m + 1, acc + [m])

    choose(1, 1, [])
    return out


def dim_w(N: int, k: int) -> int:
    """dim W_k = C(N-1, k+1) - C(N-1, k-1) with vanishing out-of-range terms."""

    def binom(n, kk):
        return math.comb(n, kk) if 0 <= kk <= n else 0

    return binom(N - 1, k + 1) - binom(N - 1, k - 1)


def reduced_word_basis(N: int, k: int) -> list[CapDiagram]:
    """Cap diagrams of the reduced-word basis of W_k, in word order."""
    if not -1 <= k <= N // 2 - 1:
        raise ValueError(f"k = {k} outside -1..{N // 2 - 1}")
    diagrams = []
    for word in basis_words(N, k):
        d, loops = word_diagram(N, word)
        if loops:
            raise AssertionError(f"reduced word {word} closed a loop")
        if d.n_caps != k + 1:
            raise AssertionError(f"reduced word {word} has {d.n_caps} caps, wanted {k + 1}")
        diagrams.append(d)
    if len(set(diagrams)) != len(diagrams):
        raise AssertionError("reduced words map to coinciding diagrams")
    if len(diagrams) != dim_w(N, k):
        raise AssertionError("basis count disagrees with the dimension formula")
    return diagrams


def all_cap_diagrams(N: int, n_caps: int) -> Iterator[CapDiagram]:
    """Every admissible diagram with the given cap count (ballot walk)."""
    caps: list[tuple[int, int]] = []
    open_stack: list[int] = []

    def walk(pos: int, used: int):
        if pos > N:
            if not open_stack and used == n_caps:
                yield CapDiagram(N, tuple(caps))
            return
        if used < n_caps:
            open_stack.append(pos)
            yield from walk(pos + 1, used + 1)
            open_stack.pop()
        if open_stack:
            a = open_stack.pop()
            caps.append((a, pos))
            yield from walk(pos + 1, used)
            caps.pop()
            open_stack.append(a)
        else:
            # through strands are only legal outside every open cap
            yield from walk(pos + 1, used)

    yield from walk(1, 0)


State = dict[CapDiagram, LaurentPoly]


def apply_word_tl(N: int, word: Sequence[int], state: State) -> State:
    """Left action of a TL generator word on a module state (exact)."""
    for i in reversed(list(word)):
        new: State = {}
        for d, coeff in state.items():
            res, scalar = act_generator(d, i)
            if res is None:
                continue
            total = new.get(res, LaurentPoly(0)) + coeff * scalar
            if total:
                new[res] = total
            elif res in new:
                del new[res]
        state = new
    return state


def apply_word_hecke(N: int, word: Sequence[int], state: State, inverse: bool = False) -> State:
    """Left action of a braid word through b_i = q^{-1} + e_i (or q + e_i)."""
    shift = 1 if inverse else -1
    for i in reversed(list(word)):
        new: State = {}
        for d, coeff in state.items():
            contributions = [(d, coeff * LaurentPoly.monomial(shift))]
            res, scalar = act_generator(d, i)
            if res is not None:
                contributions.append((res, coeff * scalar))
            for dd, cc in contributions:
                total = new.get(dd, LaurentPoly(0)) + cc
                if total:
                    new[dd] = total
                elif dd in new:
                    del new[dd]
        state = new
    return state


def parity_braid_word(N: int) -> list[int]:
    """The braid word beta_1 beta_2 ... beta_{N-1} with beta_n = b_n ... b_1,
    listed left to right; it implements the index reversal e_k -> e_{N-k}."""
    word: list[int] = []
    for n in range(1, N):
        word.extend(range(n, 0, -1))
    return word


def canonical_word_diagram(N: int, k: int) -> CapDiagram:
    """The diagram of e_1 e_3 ... e_{2k+1}: caps at (1,2), (3,4), ..."""
    return CapDiagram(N, tuple((2 * i + 1, 2 * i + 2) for i in range(k + 1)))


def beta_squared_exponent(N: int, k: int) -> int:
    """Exponent y with (parity braid)^2 = q^{-y} on W_k, evaluated symbolically.

    The braid word is applied twice to the canonical basis diagram with exact
    Laurent coefficients; the result must be a monomial multiple of the same
    diagram (anything else is an error, not an approximation).
    """
    if not -1 <= k <= N // 2 - 1:
        raise ValueError(f"k = {k} outside -1..{N // 2 - 1}")
    start = canonical_word_diagram(N, k)
    word = parity_braid_word(N)
    state: State = {start: LaurentPoly(1)}
    state = apply_word_hecke(N, word, state)
    state = apply_word_hecke(N, word, state)
    if set(state) != {start}:
        raise AssertionError(f"beta^2 is not scalar on W_{k}: support {list(state)}")
    exponent, coeff = state[start].as_monomial()
    if coeff != 1:
        raise AssertionError(f"beta^2 scalar has coefficient {coeff} != 1")
    return -exponent
