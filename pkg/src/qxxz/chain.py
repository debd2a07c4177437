"""Operators on the open spin-1/2 chain of length N.

Builds, as dense matrices on (C^2)^(tensor N): the non-Hermitian XXZ
Hamiltonian with its quantum-group boundary term, the Temperley-Lieb
generators E_i it decomposes into, the Hecke/braid generators B_i = q^{-1}+E_i,
the quantum group raising/lowering action and its opposite-coproduct twin,
and the discrete parity/spin-reversal operators.  Time reversal is antilinear
and therefore never a matrix here: its adjoint action is entrywise complex
conjugation in the distinguished spin basis (t_conjugate).

Basis convention: site 1 is the most significant bit, bit 0 is spin up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagrams import parity_braid_word
from .linops import check_dim, kron
from .qnum import QPhase, q_int

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |down> -> |up>
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ChainSpec:
    N: int
    phase: QPhase

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("chain needs at least one site")
        check_dim(2**self.N)

    @property
    def dim(self) -> int:
        return 2**self.N


def local_tl_block(phase: QPhase) -> np.ndarray:
    """The two-site Temperley-Lieb generator in the basis (uu, ud, du, dd)."""
    q = phase.q
    e = np.zeros((4, 4), dtype=complex)
    e[1, 1] = -1.0 / q
    e[2, 2] = -q
    e[1, 2] = e[2, 1] = 1.0
    return e


def _embed_two_site(block: np.ndarray, N: int, i: int) -> np.ndarray:
    left = np.eye(2 ** (i - 1), dtype=complex)
    right = np.eye(2 ** (N - i - 1), dtype=complex)
    return kron(kron(left, block), right)


def build_tl_generator(spec: ChainSpec, i: int) -> np.ndarray:
    """E_i acting on sites (i, i+1), identity elsewhere; 1 <= i <= N-1."""
    if not 1 <= i <= spec.N - 1:
        raise IndexError(f"generator index {i} outside 1..{spec.N - 1}")
    return _embed_two_site(local_tl_block(spec.phase), spec.N, i)


def build_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """H = sum_i E_i (nearest-neighbour decomposition)."""
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    for i in range(1, spec.N):
        h += build_tl_generator(spec, i)
    return h


def build_hamiltonian_pauli(spec: ChainSpec) -> np.ndarray:
    """Cross-check path: H from the explicit Pauli sum with anisotropies
    Delta_pm = (q +- q^{-1})/2 and the boundary field Delta_-(sz_1 - sz_N)/2."""
    q = spec.phase.q
    dplus = (q + 1.0 / q) / 2.0
    dminus = (q - 1.0 / q) / 2.0
    N, dim = spec.N, spec.dim
    h = np.zeros((dim, dim), dtype=complex)

    def site_op(op, i):
        left = np.eye(2 ** (i - 1), dtype=complex)
        right = np.eye(2 ** (N - i), dtype=complex)
        return kron(kron(left, op), right)

    for i in range(1, N):
        for pauli in (SIGMA_X, SIGMA_Y):
            h += 0.5 * _embed_two_site(kron(pauli, pauli), N, i)
        h += 0.5 * dplus * (_embed_two_site(kron(SIGMA_Z, SIGMA_Z), N, i) - np.eye(dim))
    h += 0.5 * dminus * (site_op(SIGMA_Z, 1) - site_op(SIGMA_Z, N))
    return h


def build_hecke_generator(spec: ChainSpec, i: int, inverse: bool = False) -> np.ndarray:
    """B_i = q^{-1} + E_i, or its inverse q + E_i."""
    q = spec.phase.q
    scalar = q if inverse else 1.0 / q
    return scalar * np.eye(spec.dim, dtype=complex) + build_tl_generator(spec, i)


def apply_two_site(v: np.ndarray, block: np.ndarray, N: int, i: int) -> np.ndarray:
    """block acting on sites (i, i+1) of the state vector v, no matrix build."""
    d_left = 2 ** (i - 1)
    d_right = 2 ** (N - i - 1)
    v3 = v.reshape(d_left, 4, d_right)
    return np.einsum("ab,xbz->xaz", block, v3).reshape(-1)


def apply_braid(spec: ChainSpec, v: np.ndarray, inverse: bool = False, power: int = 1) -> np.ndarray:
    """Image of the parity braid acting on v (matrix-free application).

    The braid word is beta = beta_1 ... beta_{N-1}, beta_n = b_n ... b_1; its
    inverse reverses the word with inverted generators.
    """
    q = spec.phase.q
    scalar = q if inverse else 1.0 / q
    block = scalar * np.eye(4, dtype=complex) + local_tl_block(spec.phase)
    word = parity_braid_word(spec.N)
    order = word if inverse else list(reversed(word))
    out = np.asarray(v, dtype=complex)
    for _ in range(power):
        for i in order:
            out = apply_two_site(out, block, spec.N, i)
    return out


def build_braid_matrix(spec: ChainSpec, inverse: bool = False) -> np.ndarray:
    """Dense matrix of the parity braid image (small N convenience)."""
    out = np.eye(spec.dim, dtype=complex)
    for col in range(spec.dim):
        e = np.zeros(spec.dim, dtype=complex)
        e[col] = 1.0
        out[:, col] = apply_braid(spec, e, inverse=inverse)
    return out


@dataclass(frozen=True)
class QGroupGenerators:
    splus: np.ndarray
    sminus: np.ndarray
    qsz: np.ndarray
    splus_op: np.ndarray
    sminus_op: np.ndarray
    sz_diag: np.ndarray  # real S^z eigenvalues along the diagonal


def sz_values(N: int) -> np.ndarray:
    idx = np.arange(2**N, dtype=np.int64)
    pop = np.zeros(2**N, dtype=np.int64)
    for bit in range(N):
        pop += (idx >> bit) & 1
    return (N - 2 * pop) / 2.0


def build_qgroup_generators(spec: ChainSpec) -> QGroupGenerators:
    """Coproduct action of the raising/lowering generators and q^{S^z}.

    S^pm carries q^{sigma^z/2} on every site left of the flipped one and
    q^{-sigma^z/2} on every site right of it; the opposite coproduct swaps
    the two dressings.  (S^pm)^dagger equals the opposite-coproduct S^mp.
    """
    q12 = np.diag([spec.phase.q_power(Fraction(1, 2)), spec.phase.q_power(Fraction(-1, 2))])
    q12inv = np.diag([spec.phase.q_power(Fraction(-1, 2)), spec.phase.q_power(Fraction(1, 2))])
    dim = spec.dim

    def coproduct_sum(flip: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        total = np.zeros((dim, dim), dtype=complex)
        for i in range(1, spec.N + 1):
            term = np.ones((1, 1), dtype=complex)
            for site in range(1, spec.N + 1):
                factor = flip if site == i else (left if site < i else right)
                term = kron(term, factor)
            total += term
        return total

    splus = coproduct_sum(SIGMA_PLUS, q12, q12inv)
    sminus = coproduct_sum(SIGMA_MINUS, q12, q12inv)
    splus_op = coproduct_sum(SIGMA_PLUS, q12inv, q12)
    sminus_op = coproduct_sum(SIGMA_MINUS, q12inv, q12)
    qsz = np.ones((1, 1), dtype=complex)
    for _ in range(spec.N):
        qsz = kron(qsz, q12)
    return QGroupGenerators(
        splus=splus,
        sminus=sminus,
        qsz=qsz,
        splus_op=splus_op,
        sminus_op=sminus_op,
        sz_diag=sz_values(spec.N),
    )


def q_int_of_2sz(spec: ChainSpec) -> np.ndarray:
    """Diagonal matrix [2 S^z]_q, the commutator [S^+, S^-]."""
    vals = [q_int(spec.phase, 2 * m) for m in sz_values(spec.N)]
    return np.diag(np.array(vals, dtype=complex))


def parity_permutation(N: int) -> np.ndarray:
    """Index map of the site-order reversal: basis index -> reversed bits."""
    idx = np.arange(2**N, dtype=np.int64)
    out = np.zeros_like(idx)
    for bit in range(N):
        out |= ((idx >> bit) & 1) << (N - 1 - bit)
    return out


def spin_reversal_permutation(N: int) -> np.ndarray:
    """Index map of the global spin flip: complement all bits."""
    return (2**N - 1) - np.arange(2**N, dtype=np.int64)


def build_discrete_ops(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Parity matrix P (site reversal) and spin-reversal matrix R."""
    dim = spec.dim
    p = np.zeros((dim, dim), dtype=complex)
    p[parity_permutation(spec.N), np.arange(dim)] = 1.0
    r = np.zeros((dim, dim), dtype=complex)
    r[spin_reversal_permutation(spec.N), np.arange(dim)] = 1.0
    return p, r


def t_conjugate(a: np.ndarray) -> np.ndarray:
    """Adjoint action of the antilinear time reversal: entrywise conjugation."""
    return np.conj(a)
