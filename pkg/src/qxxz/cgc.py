"""q-deformed Clebsch-Gordan coefficients for coupling spin j with spin 1/2.

Conventions.  The coefficient cgc(phase, j, m, alpha, J) is the amplitude of
|j, m> (x) |1/2, alpha> inside the embedded vector |J, m + alpha>, with
J = j +- 1/2.  Closed forms:

    J = j + 1/2 :   q^(-alpha j + m/2) * sqrt([j + 2 alpha m + 1] / [2j + 1])
    J = j - 1/2 :   2 alpha q^(alpha (j+1) + m/2) * sqrt([j - 2 alpha m] / [2j + 1])

Square roots are principal-branch over non-negative real radicands.  A
negative or singular radicand signals an unrestricted path at a root of
unity (the q-integer positivity band was left) and raises
NegativeRadicandError rather than silently going complex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .qnum import QPhase, q_int, to_half_integer

HALF = Fraction(1, 2)

_RADICAND_EPS = 1e-13


class NegativeRadicandError(ArithmeticError):
    """A q-integer under a CG square root is negative (or its norm vanishes)."""


def cgc(phase: QPhase, j, m, alpha, J) -> complex:
    """Coefficient of |j,m> (x) |1/2,alpha> in |J, m+alpha>, J = j +- 1/2."""
    j = to_half_integer(j)
    m = to_half_integer(m)
    alpha = to_half_integer(alpha)
    J = to_half_integer(J)
    if alpha not in (HALF, -HALF):
        raise ValueError(f"alpha must be +-1/2, got {alpha}")
    if J not in (j + HALF, j - HALF) or J < 0:
        raise ValueError(f"J = {J} is not an admissible coupling of j = {j} with 1/2")
    if abs(m) > j:
        raise ValueError(f"|m| = {abs(m)} exceeds j = {j}")

    norm = q_int(phase, 2 * j + 1)
    if abs(norm) < _RADICAND_EPS:
        raise NegativeRadicandError(f"[2j+1] = [{2*j + 1}] vanishes at r = {phase.r}")
    two_alpha = int(2 * alpha)
    if J == j + HALF:
        num = q_int(phase, j + 2 * alpha * m + 1)
        prefactor = phase.q_power(-alpha * j + m / 2)
    else:
        num = q_int(phase, j - 2 * alpha * m)
        prefactor = two_alpha * phase.q_power(alpha * (j + 1) + m / 2)
    radicand = num / norm
    if radicand < -_RADICAND_EPS:
        raise NegativeRadicandError(
            f"negative radicand {radicand:.3e} for (j={j}, m={m}, alpha={alpha}, J={J}) "
            f"at r = {phase.r}"
        )
    return prefactor * math.sqrt(max(radicand, 0.0))


@dataclass(frozen=True)
class UnitarityReport:
    ok: bool
    max_residual: float
    worst: tuple | None


def verify_unitarity(phase: QPhase, j, tol: float = 1e-12) -> UnitarityReport:
    """Check sum_{m,alpha} C(j,1/2,J'; m,alpha) C(j,1/2,J''; m,alpha) = delta.

    The sum is bilinear (no conjugation); it runs over every reachable total
    weight M and both couplings J', J''.
    """
    j = to_half_integer(j)
    couplings = [J for J in (j + HALF, j - HALF) if J >= 0]
    worst = None
    max_res = 0.0
    for Jp in couplings:
        for Jpp in couplings:
            M = -(j + HALF)
            while M <= j + HALF:
                total = 0.0 + 0.0j
                seen = False
                for alpha in (HALF, -HALF):
                    m = M - alpha
                    if abs(m) > j or abs(M) > Jp or abs(M) > Jpp:
                        continue
                    seen = True
                    total += cgc(phase, j, m, alpha, Jp) * cgc(phase, j, m, alpha, Jpp)
                if seen:
                    res = abs(total - (1.0 if Jp == Jpp else 0.0))
                    if res > max_res:
                        max_res, worst = res, (Jp, Jpp, M)
                M += 1
    return UnitarityReport(ok=max_res <= tol, max_residual=max_res, worst=worst)


def _cgc_or_none(phase, j, m, alpha, J):
    """cgc for identity sweeps: 0 outside the weight range, None off-domain."""
    j = to_half_integer(j)
    m = to_half_integer(m)
    J = to_half_integer(J)
    if J < 0:
        return None
    if abs(m) > j or abs(m + alpha) > J:
        return 0.0 + 0.0j
    try:
        return cgc(phase, j, m, alpha, J)
    except NegativeRadicandError:
        return None


def _cgc_times_rootnorm(phase, j, m, alpha, J):
    """sqrt([2j+1]) * cgc(phase, j, m, alpha, J).

    The norm [2j+1] of the coefficient cancels against the weight, so this
    stays finite even where [2j+1] = 0 (the 0 * infinity limit in the sum
    rules at a root of unity).
    """
    j = to_half_integer(j)
    m = to_half_integer(m)
    alpha = to_half_integer(alpha)
    J = to_half_integer(J)
    if J < 0:
        return None
    if abs(m) > j or abs(m + alpha) > J:
        return 0.0 + 0.0j
    if J == j + HALF:
        num = q_int(phase, j + 2 * alpha * m + 1)
        pref = phase.q_power(-alpha * j + m / 2)
    else:
        num = q_int(phase, j - 2 * alpha * m)
        pref = int(2 * alpha) * phase.q_power(alpha * (j + 1) + m / 2)
    if num < -_RADICAND_EPS:
        return None
    return pref * math.sqrt(max(num, 0.0))


def verify_appendix_identities(phase: QPhase, jmax) -> dict[str, float]:
    """Max residual of the five CG identity families used to derive the
    path-basis Temperley-Lieb action, swept over j <= jmax and all weights.

    Keys: reflection, product_exchange, product_ratio, sum_orthogonal,
    sum_contraction.
    """
    jmax = to_half_integer(jmax)
    res = {
        "reflection": 0.0,
        "product_exchange": 0.0,
        "product_ratio": 0.0,
        "sum_orthogonal": 0.0,
        "sum_contraction": 0.0,
    }

    def bump(key, value):
        res[key] = max(res[key], value)

    j = HALF
    while j <= jmax:
        ms = [Fraction(t, 2) for t in range(int(-2 * j), int(2 * j) + 1, 2)]
        for m in ms:
            for alpha in (HALF, -HALF):
                for sgn in (1, -1):
                    Jmid = j + sgn * HALF
                    if Jmid < 0:
                        continue
                    # reflection: the reversed coupling (Jmid, 1/2 -> j)
                    lhs = _cgc_or_none(phase, Jmid, m + alpha, -alpha, j)
                    rhs0 = _cgc_or_none(phase, j, m, alpha, Jmid)
                    den = q_int(phase, 2 * j + 1 + sgn)
                    if lhs is not None and rhs0 is not None and abs(den) > 1e-12:
                        ratio = q_int(phase, 2 * j + 1) / den
                        if ratio >= 0.0:
                            pref = -sgn * 2 * alpha * phase.q_power(-alpha)
                            bump("reflection", abs(lhs - pref * math.sqrt(ratio) * rhs0))

                    # product identities climbing to j +- 1
                    a1 = _cgc_or_none(phase, j, m, alpha, Jmid)
                    a2 = _cgc_or_none(phase, Jmid, m + alpha, -alpha, j + sgn)
                    b1 = _cgc_or_none(phase, j, m, -alpha, Jmid)
                    b2 = _cgc_or_none(phase, Jmid, m - alpha, alpha, j + sgn)
                    if None not in (a1, a2, b1, b2):
                        bump(
                            "product_exchange",
                            abs(a1 * a2 - phase.q_power(2 * alpha) * b1 * b2),
                        )

                    # product identity returning to j, with the q-integer ratio
                    c2 = _cgc_or_none(phase, Jmid, m + alpha, -alpha, j)
                    d2 = _cgc_or_none(phase, Jmid, m - alpha, alpha, j)
                    if None not in (a1, c2, b1, d2):
                        half_shift = Fraction(1 + sgn, 2)
                        den = q_int(phase, j - sgn * 2 * alpha * m + half_shift)
                        num = q_int(phase, j + sgn * 2 * alpha * m + half_shift)
                        if abs(den) > 1e-12:
                            pref = -phase.q_power(-2 * alpha * (2 * j + 1)) * num / den
                            bump("product_ratio", abs(a1 * c2 - pref * b1 * d2))

            # the two sum rules over j' = j +- 1/2; the sqrt([2j'+1]) weight is
            # folded into the second factor so the [2j'+1] = 0 branch stays finite
            for alpha in (HALF, -HALF):
                s_orth = 0.0 + 0.0j
                s_contr = 0.0 + 0.0j
                n_orth = 0
                n_contr = 0
                for sgn in (1, -1):
                    Jp = j + sgn * HALF
                    if Jp < 0:
                        continue
                    f1 = _cgc_or_none(phase, j, m, alpha, Jp)
                    g = _cgc_times_rootnorm(phase, Jp, m + alpha, alpha, j)
                    h = _cgc_times_rootnorm(phase, Jp, m + alpha, -alpha, j)
                    if f1 is not None and g is not None:
                        s_orth += f1 * g
                        n_orth += 1
                    if f1 is not None and h is not None:
                        s_contr += sgn * f1 * h
                        n_contr += 1
                if n_orth == 2 and abs(m + 2 * alpha) <= j:
                    bump("sum_orthogonal", abs(s_orth))
                if n_contr == 2:
                    target = -2 * alpha * phase.q_power(-alpha) * math.sqrt(
                        q_int(phase, 2 * j + 1)
                    )
                    bump("sum_contraction", abs(s_contr - target))
        j += HALF
    return res
