"""Path-basis vectors in the spin basis and the intrinsic TL action on paths.

A Bratteli path j = (j_0, ..., j_N) and a weight m with |m| <= j_N determine
the vector |j, m> whose amplitude on a spin configuration alpha is the
product of Clebsch-Gordan factors

    <alpha | j, m> = prod_{k=1}^{N-1} cgc(j_k, m_k, alpha_{k+1}, j_{k+1}),
    m_k = alpha_1 + ... + alpha_k ,

zero whenever a partial weight leaves |m_k| <= j_k.  The conjugate family
(entrywise complex conjugates) is bilinearly dual to it: sum_a <a|j,m><a|j',m'>
is a Kronecker delta, which is what makes the metric-operator assembly work.

The same module also realizes the Temperley-Lieb generators directly on the
path labels (real matrices, no spin space), giving a representation that must
agree with the conjugated spin representation; the agreement check is one of
the package's primary oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bratteli import HALF, BratteliPath, PathFamily, enumerate_paths
from .cgc import NegativeRadicandError, cgc
from .chain import ChainSpec, build_tl_generator
from .linops import numeric_rank
from .qnum import QPhase, q_int, to_half_integer


def path_state(phase: QPhase, path: BratteliPath, m, conjugated: bool = False) -> np.ndarray:
    """Dense spin-basis vector of |path, m> (or its T-conjugate twin)."""
    m = to_half_integer(m)
    N = path.N
    if abs(m) > path.endpoint:
        raise ValueError(f"|m| = {abs(m)} exceeds the endpoint {path.endpoint}")
    vec = np.zeros(2**N, dtype=complex)

    def descend(site: int, index: int, weight: Fraction, amp: complex):
        if site == N:
            if weight == m:
                vec[index] += amp
            return
        # remaining sites must be able to bridge the weight gap
        if abs(m - weight) > Fraction(N - site, 2):
            return
        for alpha in (HALF, -HALF):
            nxt = weight + alpha
            if abs(nxt) > path.steps[site + 1]:
                continue
            factor = 1.0 + 0.0j
            if site >= 1:
                factor = cgc(phase, path.steps[site], weight, alpha, path.steps[site + 1])
            if factor == 0:
                continue
            bit = 0 if alpha > 0 else 1
            descend(site + 1, index | (bit << (N - site - 1)), nxt, amp * factor)

    descend(0, 0, Fraction(0), 1.0 + 0.0j)
    return np.conj(vec) if conjugated else vec


def state_to_json(phase: QPhase, path: BratteliPath, m) -> dict:
    """Wire form {path: [2 j_k], m2: 2m, amplitudes: [(bitstring, re, im)]}."""
    vec = path_state(phase, path, m)
    amps = []
    for idx in np.flatnonzero(np.abs(vec) > 0):
        bits = format(int(idx), f"0{path.N}b")
        amps.append((bits, float(vec[idx].real), float(vec[idx].imag)))
    return {"path": path.twice(), "m2": int(2 * to_half_integer(m)), "amplitudes": amps}


@dataclass(frozen=True)
class StateLabel:
    path: BratteliPath
    m: Fraction


def family_labels(family: PathFamily) -> list[StateLabel]:
    """One label per (path, m) pair, m descending from the endpoint."""
    labels = []
    for path in family.paths:
        j = path.endpoint
        m = j
        while m >= -j:
            labels.append(StateLabel(path=path, m=m))
            m -= 1
    return labels


def family_states(
    phase: QPhase,
    family: PathFamily,
    conjugated: bool = False,
    fixed_m=None,
) -> tuple[np.ndarray, list[StateLabel]]:
    """Column matrix of the family's states (optionally only weight fixed_m)."""
    labels = family_labels(family)
    if fixed_m is not None:
        want = to_half_integer(fixed_m)
        labels = [lb for lb in labels if lb.m == want]
    cols = [path_state(phase, lb.path, lb.m, conjugated=conjugated) for lb in labels]
    if not cols:
        return np.zeros((2**family.N, 0), dtype=complex), labels
    return np.column_stack(cols), labels


@dataclass(frozen=True)
class PairingReport:
    n_states: int
    span_rank: int
    pairing_residual: float
    resolution_residual: float


def pairing_check(phase: QPhase, N: int, r: int | None = None) -> PairingReport:
    """Bilinear duality and resolution-of-identity on the (restricted) span.

    V^T V must be the identity over state labels, and Q = V V^T must act as
    the identity on every family state.  At a root of unity the family spans
    a proper subspace; the rank reported is that span's dimension.
    """
    family = enumerate_paths(N, r=r)
    v, labels = family_states(phase, family)
    gram = v.T @ v
    pairing_res = float(np.abs(gram - np.eye(len(labels))).max()) if labels else 0.0
    resolution = v @ (v.T @ v) - v
    resolution_res = float(np.abs(resolution).max()) if labels else 0.0
    rank = numeric_rank(v) if labels else 0
    return PairingReport(
        n_states=len(labels),
        span_rank=rank,
        pairing_residual=pairing_res,
        resolution_residual=resolution_res,
    )


def tl_action_on_paths(phase: QPhase, family: PathFamily, k: int) -> np.ndarray:
    """Matrix of E_k on a fixed-endpoint path family, straight from the labels.

    Entry rule: E_k maps path j to the paths j' differing only in slot k,
    provided j_{k-1} = j_{k+1}; the coefficient is
    (-1)^(j_k - j' + 1) sqrt([2 j_k + 1][2 j' + 1]) / [2 j_{k-1} + 1],
    i.e. diagonal entries -[2 j_k + 1]/[2 j_{k-1} + 1] and positive
    off-diagonal square roots.  Real by band positivity on restricted
    families; a negative product under the root raises NegativeRadicandError.
    """
    if family.endpoint is None:
        raise ValueError("tl_action_on_paths needs an endpoint-filtered family")
    if not 1 <= k <= family.N - 1:
        raise IndexError(f"generator index {k} outside 1..{family.N - 1}")
    index = {p.steps: i for i, p in enumerate(family.paths)}
    dim = len(family.paths)
    mat = np.zeros((dim, dim), dtype=float)
    for col, path in enumerate(family.paths):
        jkm1, jk, jkp1 = path.steps[k - 1], path.steps[k], path.steps[k + 1]
        if jkm1 != jkp1:
            continue
        den = q_int(phase, 2 * jkm1 + 1)
        if abs(den) < 1e-13:
            raise NegativeRadicandError(f"[{2 * jkm1 + 1}] vanishes at r = {phase.r}")
        for jp in (jkm1 + HALF, jkm1 - HALF):
            if jp < 0:
                continue
            radicand = q_int(phase, 2 * jk + 1) * q_int(phase, 2 * jp + 1)
            if radicand < -1e-13:
                raise NegativeRadicandError(
                    f"negative product [{2 * jk + 1}][{2 * jp + 1}] at r = {phase.r}"
                )
            target = path.steps[:k] + (jp,) + path.steps[k + 1 :]
            row = index.get(target)
            if row is None:
                # escaping a restricted family is only legal through the
                # vanishing channel [2 j' + 1] = [r] = 0
                if abs(q_int(phase, 2 * jp + 1)) > 1e-9:
                    raise AssertionError(f"E_{k} escapes the family at j' = {jp}")
                continue
            sign = -1.0 if jp == jk else 1.0
            mat[row, col] += sign * np.sqrt(max(radicand, 0.0)) / den
    return mat


@dataclass(frozen=True)
class IsoReport:
    N: int
    r: int | None
    endpoint: Fraction
    dim: int
    max_residual: float


def representation_isomorphism_check(
    phase: QPhase, N: int, j, r: int | None = None
) -> IsoReport:
    """Intrinsic path action vs the spin representation conjugated into the
    path basis (dual frame = bilinear transpose), over every generator and
    every weight of the multiplet."""
    j = to_half_integer(j)
    family = enumerate_paths(N, r=r, endpoint=j)
    if not family.paths:
        raise ValueError(f"empty family for N={N}, j={j}, r={r}")
    spec = ChainSpec(N=N, phase=phase)
    worst = 0.0
    m = j
    while m >= -j:
        v, _ = family_states(phase, family, fixed_m=m)
        for k in range(1, N):
            intrinsic = tl_action_on_paths(phase, family, k)
            spin_side = v.T @ (build_tl_generator(spec, k) @ v)
            worst = max(worst, float(np.abs(spin_side - intrinsic).max()))
        m -= 1
    return IsoReport(N=N, r=r, endpoint=j, dim=len(family.paths), max_residual=worst)
