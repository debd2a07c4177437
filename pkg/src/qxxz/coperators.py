"""The two C-operators C = P eta and C' = R eta and their exact identities.

On the (restricted) span both are involutions, commute with each other and
with H, and split along Schur-Weyl lines: C lives in the braid-generator
algebra and commutes with the quantum group; C' lives in the quantum group
and commutes with every Temperley-Lieb generator.  On each fixed-endpoint
block the braid identity pins C down completely:

    C = chi_j * B(parity braid),   chi_j = q^{N(N-4)/4 + j(j+1)},

with the square of the braid acting as the scalar q^{-N(N-4)/2 - 2j(j+1)}
(independently reproduced by the symbolic diagram oracle).  C' acts on path
states by |j, m> -> (-1)^{N/2 - j_N} |j, -m>, which also has a closed
expression in powers of the lowering/raising operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bratteli import BratteliPath, enumerate_paths
from .chain import (
    ChainSpec,
    apply_braid,
    build_hamiltonian,
    build_qgroup_generators,
    build_tl_generator,
    parity_permutation,
    spin_reversal_permutation,
    sz_values,
)
from .linops import dagger, frob
from .metric import MetricData, build_metric
from .pathbasis import family_states, path_state
from .qnum import QPhase, q_factorial, to_half_integer

HALF = Fraction(1, 2)


@dataclass
class COperatorPair:
    spec: ChainSpec
    data: MetricData
    C: np.ndarray
    Cprime: np.ndarray

    @property
    def span(self) -> np.ndarray:
        return self.data.span


def build_c_operators(spec: ChainSpec, data: MetricData | None = None) -> COperatorPair:
    # P and R are involutive permutations, so P @ eta is a row shuffle
    data = data or build_metric(spec)
    perm_p = parity_permutation(spec.N)
    perm_r = spin_reversal_permutation(spec.N)
    return COperatorPair(
        spec=spec, data=data, C=data.eta[perm_p, :], Cprime=data.eta[perm_r, :]
    )


def chi_expected(phase: QPhase, N: int, j) -> complex:
    """The block scalar q^{N(N-4)/4 + j(j+1)} on the principal branch."""
    j = to_half_integer(j)
    return phase.q_power(Fraction(N * (N - 4), 4) + j * (j + 1))


def beta_squared_expected_exponent(N: int, j) -> Fraction:
    """y with (parity braid)^2 = q^{-y} on the endpoint-j block."""
    j = to_half_integer(j)
    return Fraction(N * (N - 4), 2) + 2 * j * (j + 1)


def designated_path(N: int, j) -> BratteliPath:
    """Zigzag between 0 and 1/2 as long as possible, then rise monotonically
    to the endpoint; survives every restriction that admits the endpoint."""
    j = to_half_integer(j)
    zig = int(N - 2 * j)
    steps = [Fraction(k % 2, 2) for k in range(zig + 1)]
    level = steps[-1]
    while level < j:
        level += HALF
        steps.append(level)
    return BratteliPath(tuple(steps))


@dataclass
class BlockBraidResult:
    endpoint: Fraction
    dim: int
    chi_expected: complex
    chi_measured: complex
    beta2_expected: complex
    beta2_measured: complex
    beta2_exponent: Fraction
    proportionality_residual: float

    @property
    def chi_error(self) -> float:
        return abs(self.chi_measured - self.chi_expected)

    @property
    def beta2_error(self) -> float:
        return abs(self.beta2_measured - self.beta2_expected)

    def to_json(self) -> dict:
        return {
            "2j": int(2 * self.endpoint),
            "dim": self.dim,
            "chi_expected": [self.chi_expected.real, self.chi_expected.imag],
            "chi_measured": [self.chi_measured.real, self.chi_measured.imag],
            "chi_error": self.chi_error,
            "beta2_exponent": [self.beta2_exponent.numerator, self.beta2_exponent.denominator],
            "beta2_error": self.beta2_error,
            "residual": self.proportionality_residual,
        }


def braid_identity_check(spec: ChainSpec, data: MetricData | None = None) -> list[BlockBraidResult]:
    """Measure the block scalars of C B^{-1} and B^2 on every endpoint block.

    chi is extracted from the designated path state (Schur's lemma makes any
    block vector sufficient) and then certified against the whole block:
    the residual is ||C V - chi B V|| / ||B V|| over all block states.
    """
    data = data or build_metric(spec)
    phase = spec.phase
    results = []
    for j in data.family.endpoints():
        fam_j = enumerate_paths(spec.N, r=data.family.r, endpoint=j)
        v_probe = path_state(phase, designated_path(spec.N, j), j)
        b_probe = apply_braid(spec, v_probe)
        c_probe = data.apply(v_probe)[parity_permutation(spec.N)]
        imax = int(np.argmax(np.abs(b_probe)))
        chi_meas = complex(c_probe[imax] / b_probe[imax])
        b2_probe = apply_braid(spec, b_probe)
        imax2 = int(np.argmax(np.abs(v_probe)))
        beta2_meas = complex(b2_probe[imax2] / v_probe[imax2])

        v_all, _ = family_states(phase, fam_j)
        b_all = np.column_stack([apply_braid(spec, v_all[:, c]) for c in range(v_all.shape[1])])
        c_all = (data.states_t @ (dagger(data.states_t) @ v_all))[parity_permutation(spec.N)]
        residual = frob(c_all - chi_meas * b_all) / max(frob(b_all), 1e-300)

        exponent = beta_squared_expected_exponent(spec.N, j)
        results.append(
            BlockBraidResult(
                endpoint=j,
                dim=len(fam_j.paths),
                chi_expected=chi_expected(phase, spec.N, j),
                chi_measured=chi_meas,
                beta2_expected=phase.q_power(-exponent),
                beta2_measured=beta2_meas,
                beta2_exponent=exponent,
                proportionality_residual=residual,
            )
        )
    return results


@dataclass
class CPrimeReport:
    max_state_residual: float
    max_qgroup_residual: float


def cprime_path_action_check(spec: ChainSpec, data: MetricData | None = None) -> CPrimeReport:
    """C'|j,m> = (-1)^{N/2 - j_N} |j,-m> on every family state, plus the
    quantum-group closed form of C' on each endpoint block."""
    data = data or build_metric(spec)
    phase = spec.phase
    perm_r = spin_reversal_permutation(spec.N)
    gens = build_qgroup_generators(spec)
    twice_sz = np.rint(2 * sz_values(spec.N)).astype(int)

    worst_state = 0.0
    for label in data.labels:
        v = path_state(phase, label.path, label.m)
        lhs = data.apply(v)[perm_r]
        sign = (-1) ** int(Fraction(spec.N, 2) - label.path.endpoint)
        rhs = sign * path_state(phase, label.path, -label.m)
        worst_state = max(worst_state, float(np.abs(lhs - rhs).max()))

    worst_qg = 0.0
    for j in data.family.endpoints():
        op = _cprime_qgroup_expression(spec, gens, twice_sz, j)
        fam_j = enumerate_paths(spec.N, r=data.family.r, endpoint=j)
        v_all, _ = family_states(phase, fam_j)
        lhs = (data.states_t @ (dagger(data.states_t) @ v_all))[perm_r]
        worst_qg = max(worst_qg, float(np.abs(lhs - op @ v_all).max()))
    return CPrimeReport(max_state_residual=worst_state, max_qgroup_residual=worst_qg)


def _cprime_qgroup_expression(spec, gens, twice_sz, j) -> np.ndarray:
    """(-1)^{N/2-j} sum_m ([j-m]!/[j+m]!) ((S^-)^{2m} P_m + (S^+)^{2m} P_{-m})
    with the m = 0 term halved; P_m projects onto the S^z = m eigenspace."""
    j = to_half_integer(j)
    phase = spec.phase
    dim = spec.dim
    out = np.zeros((dim, dim), dtype=complex)
    m = j % 1  # 0 for integer j, 1/2 for half-integer j
    while m <= j:
        ratio = q_factorial(phase, int(j - m)) / q_factorial(phase, int(j + m))
        proj_plus = np.diag((twice_sz == int(2 * m)).astype(complex))
        proj_minus = np.diag((twice_sz == -int(2 * m)).astype(complex))
        lower = np.linalg.matrix_power(gens.sminus, int(2 * m))
        raise_ = np.linalg.matrix_power(gens.splus, int(2 * m))
        term = ratio * (lower @ proj_plus + raise_ @ proj_minus)
        if m == 0:
            term = term / 2.0
        out += term
        m += 1
    sign = (-1) ** int(Fraction(spec.N, 2) - j)
    return sign * out


@dataclass
class CommutationReport:
    """Frobenius residuals of the Table-4 identities on the span."""

    residuals: dict[str, float] = field(default_factory=dict)

    @property
    def worst(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


def table4_check(spec: ChainSpec, pair: COperatorPair | None = None) -> CommutationReport:
    pair = pair or build_c_operators(spec)
    data = pair.data
    frame = data.span
    eta, c, cp = data.eta, pair.C, pair.Cprime
    h = build_hamiltonian(spec)
    gens = build_qgroup_generators(spec)
    sz = np.diag(sz_values(spec.N).astype(complex))

    def on_span(mat: np.ndarray) -> float:
        return frob(mat @ frame)

    res: dict[str, float] = {}
    res["eta_H"] = on_span(eta @ h - dagger(h) @ eta)
    res["eta_Ek"] = 0.0
    res["C_Ek"] = 0.0
    res["Cprime_Ek"] = 0.0
    for k in range(1, spec.N):
        ek = build_tl_generator(spec, k)
        en_k = build_tl_generator(spec, spec.N - k)
        res["eta_Ek"] = max(res["eta_Ek"], on_span(eta @ ek - dagger(ek) @ eta))
        res["C_Ek"] = max(res["C_Ek"], on_span(c @ ek - en_k @ c))
        res["Cprime_Ek"] = max(res["Cprime_Ek"], on_span(cp @ ek - ek @ cp))
    res["eta_S"] = max(
        on_span(eta @ gens.splus - gens.splus_op @ eta),
        on_span(eta @ gens.sminus - gens.sminus_op @ eta),
    )
    res["C_H"] = on_span(c @ h - h @ c)
    res["C_S"] = max(
        on_span(c @ gens.splus - gens.splus @ c),
        on_span(c @ gens.sminus - gens.sminus @ c),
    )
    res["C_Sz"] = on_span(c @ sz - sz @ c)
    res["Cprime_H"] = on_span(cp @ h - h @ cp)
    res["Cprime_S"] = max(
        on_span(cp @ gens.splus - gens.sminus @ cp),
        on_span(cp @ gens.sminus - gens.splus @ cp),
    )
    res["Cprime_Sz"] = on_span(cp @ sz + sz @ cp)
    return CommutationReport(residuals=res)


@dataclass
class InvolutionReport:
    c_squared: float
    cprime_squared: float
    commutator: float


def cc_commute_check(spec: ChainSpec, pair: COperatorPair | None = None) -> InvolutionReport:
    """||C^2 - 1||, ||C'^2 - 1|| and ||[C, C']|| on the span."""
    pair = pair or build_c_operators(spec)
    frame = pair.span
    c, cp = pair.C, pair.Cprime
    return InvolutionReport(
        c_squared=frob(c @ (c @ frame) - frame),
        cprime_squared=frob(cp @ (cp @ frame) - frame),
        commutator=frob(c @ (cp @ frame) - cp @ (c @ frame)),
    )
