"""The quasi-Hermiticity (metric) operator and its certification.

The metric is assembled as eta = sum_u u u^dagger over the T-conjugated
path states u = conj(|path, m>), the sum running over restricted paths at a
root of unity (integer r >= 3) or over all paths when r > N is not an
integer.  It is Hermitian positive semi-definite by construction; positivity
holds on the span of the un-conjugated family because the two families pair
bilinearly to a delta.

check_intertwining certifies eta A = A^* eta on that span for every
Temperley-Lieb generator, the quantum group generators against their
opposite-coproduct partners, S^z exactly, and hence the Hamiltonian.

A subtlety governs every "on the span" statement at a root of unity: the
span of the restricted path states is not invariant under the E_k as
spin-space matrices.  An E_k can push a restricted path against the wall
2j+1 = r, where the in-family coefficient vanishes like sqrt([r]) while the
target state diverges like 1/sqrt([r]); the product survives as a finite
leftover OUTSIDE the span.  That leftover is bilinearly orthogonal to the
family (so eta kills it), and the restricted representation of the paper is
the quotient by it.  Concretely the exact statements are

    Q^dagger (eta A - A^* eta) Q = 0     (form compression, Q = span frame),
    V^T A V  = quotient action of A      (V = path-state columns, V^T V = 1),
    V^dagger eta V = 1                   (path states are eta-orthonormal),

and the reduced Hamiltonian with real spectrum is V^T H V, which is real
symmetric.  hermitize builds the Hermitian similarity transform from these.
detect_jordan_blocks is the contrast diagnostic: at roots of unity the
full-space Hamiltonian is defective and a bi-orthonormal eigensystem cannot
exist, which is exactly why the reduction is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bratteli import PathFamily, enumerate_paths
from .chain import (
    ChainSpec,
    build_discrete_ops,
    build_hamiltonian,
    build_qgroup_generators,
    build_tl_generator,
    sz_values,
)
from .linops import dagger, frob, numeric_rank, positive_sqrt
from .pathbasis import StateLabel, family_states
from .qnum import QPhase


class MetricModeError(ValueError):
    """The deformation index supports neither construction mode."""


def metric_mode(spec: ChainSpec) -> bool:
    """True for the restricted (root-of-unity) mode, False for real r > N."""
    phase = spec.phase
    if phase.is_root_of_unity:
        return True
    if phase.r > spec.N:
        return False
    raise MetricModeError(
        f"r = {phase.r}: need an integer r >= 3 or a real r > N = {spec.N} "
        "(q-integer positivity fails along unrestricted paths otherwise)"
    )


@dataclass
class MetricData:
    """The metric with the frames needed to test identities on its span."""

    spec: ChainSpec
    restricted: bool
    family: PathFamily
    labels: list[StateLabel]
    states: np.ndarray  # columns |path, m>
    states_t: np.ndarray  # columns conj(|path, m>)
    eta: np.ndarray
    span: np.ndarray  # orthonormal frame of column span of `states`

    @property
    def span_rank(self) -> int:
        return self.span.shape[1]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.states_t @ (dagger(self.states_t) @ v)


def build_metric(spec: ChainSpec) -> MetricData:
    restricted = metric_mode(spec)
    family = enumerate_paths(spec.N, r=spec.phase.r_int if restricted else None)
    states, labels = family_states(spec.phase, family)
    states_t = np.conj(states)
    eta = states_t @ dagger(states_t)
    q, _ = np.linalg.qr(states, mode="reduced")
    return MetricData(
        spec=spec,
        restricted=restricted,
        family=family,
        labels=labels,
        states=states,
        states_t=states_t,
        eta=eta,
        span=q,
    )


def build_eta(spec: ChainSpec) -> np.ndarray:
    return build_metric(spec).eta


@dataclass
class MetricReport:
    N: int
    r: float
    restricted: bool
    span_rank: int
    min_span_eigenvalue: float
    max_imag_span_spectrum: float
    residuals: dict[str, float] = field(default_factory=dict)
    full_space_residuals: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "restricted": self.restricted,
            "span_rank": self.span_rank,
            "min_eig": self.min_span_eigenvalue,
            "max_imag_spectrum": self.max_imag_span_spectrum,
            "residuals": self.residuals,
            "full_space_residuals": self.full_space_residuals,
        }


def check_intertwining(spec: ChainSpec, data: MetricData | None = None) -> MetricReport:
    """Residuals of the intertwining identities on the restricted span.

    On-span residuals are the form compressions ||Q^dag (eta A - A^* eta) Q||
    (the exact statement at roots of unity, see the module docstring); keys
    are Ek (worst generator), Splus/Sminus against the opposite coproduct,
    Sz (full-space commutator, exact by sector structure) and H.  The
    full-space residuals of the same relations are reported alongside but
    never asserted: at a root of unity they are genuinely nonzero whenever a
    path family touches the wall 2j+1 = r-1.
    """
    data = data or build_metric(spec)
    eta, frame = data.eta, data.span
    gens = build_qgroup_generators(spec)
    h = build_hamiltonian(spec)

    def compress(gap: np.ndarray) -> float:
        return frob(dagger(frame) @ gap @ frame)

    residuals: dict[str, float] = {}
    full: dict[str, float] = {}

    worst_ek_span = 0.0
    worst_ek_full = 0.0
    for k in range(1, spec.N):
        ek = build_tl_generator(spec, k)
        gap = eta @ ek - dagger(ek) @ eta
        worst_ek_span = max(worst_ek_span, compress(gap))
        worst_ek_full = max(worst_ek_full, frob(gap))
    residuals["Ek"] = worst_ek_span
    full["Ek"] = worst_ek_full

    for name, a, a_op in (
        ("Splus", gens.splus, gens.splus_op),
        ("Sminus", gens.sminus, gens.sminus_op),
    ):
        gap = eta @ a - a_op @ eta
        residuals[name] = compress(gap)
        full[name] = frob(gap)

    sz = np.diag(sz_values(spec.N).astype(complex))
    gap = eta @ sz - sz @ eta
    residuals["Sz"] = frob(gap)
    full["Sz"] = residuals["Sz"]

    gap = eta @ h - dagger(h) @ eta
    residuals["H"] = compress(gap)
    full["H"] = frob(gap)

    gram = dagger(frame) @ eta @ frame
    eigs = np.linalg.eigvalsh((gram + dagger(gram)) / 2.0)
    h_red = reduced_hamiltonian(spec, data)
    spec_imag = float(np.abs(np.linalg.eigvals(h_red).imag).max()) if h_red.size else 0.0

    return MetricReport(
        N=spec.N,
        r=spec.phase.r,
        restricted=data.restricted,
        span_rank=data.span_rank,
        min_span_eigenvalue=float(eigs[0]) if eigs.size else float("nan"),
        max_imag_span_spectrum=spec_imag,
        residuals=residuals,
        full_space_residuals=full,
    )


def reduced_hamiltonian(spec: ChainSpec, data: MetricData | None = None) -> np.ndarray:
    """Quotient action of H on the span: V^T H V, real symmetric."""
    data = data or build_metric(spec)
    h = build_hamiltonian(spec)
    return data.states.T @ h @ data.states


def hermitize(
    spec: ChainSpec, data: MetricData | None = None, reduced: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """(H_tilde, metric^{1/2}) with H_tilde Hermitian.

    reduced=True works in an orthonormal frame Q of the span: the metric form
    there is g = Q^dag eta Q > 0, the quotient Hamiltonian is R (V^T H V)
    R^{-1} with V = Q R, and H_tilde = g^{1/2} H_red g^{-1/2} is Hermitian
    with the (real) reduced spectrum.  reduced=False insists on the full
    2^N space and propagates the positivity failure the construction
    predicts at roots of unity.
    """
    data = data or build_metric(spec)
    h = build_hamiltonian(spec)
    if reduced:
        frame = data.span
        r_fac = dagger(frame) @ data.states  # V = Q R
        g = dagger(frame) @ data.eta @ frame
        h_red = r_fac @ (data.states.T @ h @ data.states) @ np.linalg.inv(r_fac)
    else:
        g = data.eta
        h_red = h
    g = (g + dagger(g)) / 2.0
    root = positive_sqrt(g, tol=1e-10)
    htilde = root @ h_red @ np.linalg.inv(root)
    return htilde, root


@dataclass
class JordanBlockInfo:
    eigenvalue: complex
    algebraic: int
    geometric: int
    blocks_of_size_ge2: int
    min_pair_overlap: float

    def to_json(self) -> dict:
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "algebraic": self.algebraic,
            "geometric": self.geometric,
            "blocks_ge2": self.blocks_of_size_ge2,
            "min_pair_overlap": self.min_pair_overlap,
        }


@dataclass
class JordanReport:
    N: int
    r: float
    clusters: list[JordanBlockInfo]
    ambiguous_clustering: bool

    @property
    def defective(self) -> bool:
        return any(c.blocks_of_size_ge2 > 0 for c in self.clusters)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "defective": self.defective,
            "ambiguous_clustering": self.ambiguous_clustering,
            "clusters": [c.to_json() for c in self.clusters if c.blocks_of_size_ge2 > 0],
        }


def _cluster(values: np.ndarray, radius: float) -> list[list[int]]:
    order = np.lexsort((values.imag, values.real))
    groups: list[list[int]] = []
    for idx in order:
        for g in groups:
            if abs(values[idx] - values[g[0]]) <= radius:
                g.append(int(idx))
                break
        else:
            groups.append([int(idx)])
    return groups


def detect_jordan_blocks(
    a: np.ndarray | ChainSpec,
    cluster_radius: float = 1e-7,
    rank_tol: float = 1e-5,
    overlap_tol: float = 1e-6,
) -> JordanReport:
    """Rank-based Jordan structure of a matrix (or of the chain Hamiltonian).

    For each eigenvalue cluster, compares the numeric ranks of (A - lambda)
    and its square: the difference counts Jordan blocks of size >= 2.  For
    defective eigenvalues a right eigenvector phi and a left eigenvector psi
    with |<phi, psi>| ~ 0 are exhibited through the singular structure of the
    left/right eigenvector Gram matrix.
    """
    if isinstance(a, ChainSpec):
        N, r = a.N, a.phase.r
        a = build_hamiltonian(a)
    else:
        N, r = -1, float("nan")
        a = np.asarray(a, dtype=complex)
    dim = a.shape[0]
    eigs = np.linalg.eigvals(a)
    groups = _cluster(eigs, cluster_radius)
    centers = [np.mean(eigs[g]) for g in groups]
    ambiguous = any(
        abs(c1 - c2) < 10 * cluster_radius
        for i, c1 in enumerate(centers)
        for c2 in centers[i + 1 :]
    )

    infos: list[JordanBlockInfo] = []
    for g, center in zip(groups, centers):
        shifted = a - center * np.eye(dim)
        r1 = numeric_rank(shifted, rank_tol)
        r2 = numeric_rank(shifted @ shifted, rank_tol)
        geometric = dim - r1
        blocks_ge2 = r1 - r2
        overlap = float("nan")
        if blocks_ge2 > 0:
            overlap = _min_pair_overlap(shifted, geometric)
        infos.append(
            JordanBlockInfo(
                eigenvalue=complex(center),
                algebraic=len(g),
                geometric=geometric,
                blocks_of_size_ge2=blocks_ge2,
                min_pair_overlap=overlap,
            )
        )
    return JordanReport(N=N, r=r, clusters=infos, ambiguous_clustering=ambiguous)


def _min_pair_overlap(shifted: np.ndarray, geometric: int) -> float:
    _, _, vh = np.linalg.svd(shifted)
    right = vh[-geometric:].conj().T  # null space of (A - lambda)
    _, _, vh_l = np.linalg.svd(dagger(shifted))
    left = vh_l[-geometric:].conj().T  # null space of (A - lambda)^dagger
    gram = dagger(left) @ right
    s = np.linalg.svd(gram, compute_uv=False)
    return float(s[-1]) if s.size else float("nan")
