"""Catalog of concrete sparse-SYK Hamiltonians and the left/right doubling.

The published model coefficients are hard-coded with their exact printed
decimals.  The doubled system places both Majorana families on the shared
system qubits of a :class:`~wormlab.pauli.RegisterLayout` and pins the
remaining sign freedom by construction: the beta=0 thermofield state is the
joint vacuum of the modes (psi_L^j - i psi_R^j)/2, which makes
(H_L - H_R)|TFD_0> = 0 exact for quartic terms and makes mu < 0 the
coupling sign whose ground state approaches the TFD.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial

import numpy as np

from .hilbert import HermitianOperator, QuantumState, hamiltonian_matrix, pauli_matrix
from .pauli import (
    CommutativityReport,
    MajoranaMonomial,
    RegisterLayout,
    commutativity_report,
)


@dataclass(frozen=True)
class MajoranaHamiltonian:
    """Weighted sum of Majorana monomials of uniform interaction order q."""

    n_majorana: int
    q: int
    terms: tuple[tuple[MajoranaMonomial, float], ...]

    def __post_init__(self):
        seen = set()
        for mono, coeff in self.terms:
            if mono.size != self.q:
                raise ValueError(f"term {mono.indices} does not have q={self.q} indices")
            if max(mono.indices) > self.n_majorana:
                raise ValueError(f"index {max(mono.indices)} exceeds N={self.n_majorana}")
            if mono.indices in seen:
                raise ValueError(f"duplicate monomial {mono.indices}")
            if not np.isfinite(coeff):
                raise ValueError("coefficients must be finite")
            seen.add(mono.indices)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def coefficient(self, indices) -> float:
        target = tuple(indices)
        for mono, coeff in self.terms:
            if mono.indices == target:
                return coeff
        raise KeyError(f"no term {target}")

    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms])

    def to_dict(self) -> dict:
        return {
            "n_majorana": self.n_majorana,
            "q": self.q,
            "terms": [
                {"indices": list(m.indices), "coeff": c} for m, c in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MajoranaHamiltonian":
        terms = tuple(
            (MajoranaMonomial(tuple(t["indices"])), float(t["coeff"]))
            for t in data["terms"]
        )
        return cls(int(data["n_majorana"]), int(data["q"]), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "MajoranaHamiltonian":
        return cls.from_dict(json.loads(text))


def _build(n: int, entries, q: int = 4) -> MajoranaHamiltonian:
    terms = tuple((MajoranaMonomial(tuple(idx)), float(c)) for idx, c in entries)
    return MajoranaHamiltonian(n, q, terms)


def learned_h0() -> MajoranaHamiltonian:
    """The published five-term fully commuting N=7 model."""
    return _build(7, [
        ((1, 2, 4, 5), -0.36),
        ((1, 3, 4, 7), +0.19),
        ((1, 3, 5, 6), -0.71),
        ((2, 3, 4, 6), +0.22),
        ((2, 3, 5, 7), +0.49),
    ])


def learned_h6() -> MajoranaHamiltonian:
    """The six-term model with non-commuting terms.

    Index 8 appears in the second term, so the model is treated as N=8 even
    though it is usually discussed alongside the N=7 one.
    """
    return _build(8, [
        ((1, 2, 3, 6), -0.35),
        ((1, 2, 3, 8), +0.11),
        ((1, 2, 4, 7), -0.17),
        ((1, 3, 5, 7), -0.67),
        ((2, 3, 6, 7), +0.38),
        ((2, 5, 6, 7), -0.05),
    ])


def learned_n10_8term() -> MajoranaHamiltonian:
    """The eight-term N=10 model trained to maximize the mu sign asymmetry."""
    return _build(10, [
        ((1, 3, 4, 5), +0.60),
        ((1, 3, 5, 6), +0.72),
        ((1, 5, 6, 9), +0.49),
        ((1, 5, 7, 8), +0.49),
        ((2, 4, 8, 10), +0.64),
        ((2, 5, 7, 8), -0.75),
        ((2, 5, 7, 10), +0.58),
        ((2, 7, 8, 10), -0.53),
    ])


def perturbation_h1() -> MajoranaHamiltonian:
    """The single strongly non-commuting term 0.3 psi1 psi2 psi3 psi5."""
    return _build(7, [((1, 2, 3, 5), +0.3)])


def add(a: MajoranaHamiltonian, b: MajoranaHamiltonian) -> MajoranaHamiltonian:
    """Sum of two Hamiltonians; coefficients of shared monomials add."""
    if a.q != b.q:
        raise ValueError("interaction orders differ")
    coeffs: dict[tuple[int, ...], float] = {}
    for mono, c in a.terms + b.terms:
        coeffs[mono.indices] = coeffs.get(mono.indices, 0.0) + c
    n = max(a.n_majorana, b.n_majorana)
    terms = tuple(
        (MajoranaMonomial(idx), c) for idx, c in sorted(coeffs.items()) if c != 0.0
    )
    return MajoranaHamiltonian(n, a.q, terms)


def h0_plus_h1() -> MajoranaHamiltonian:
    return add(learned_h0(), perturbation_h1())


def syk_sigma(n: int, q: int, j_scale: float) -> float:
    """Standard SYK coupling width: sigma^2 = (q-1)! J^2 / N^(q-1)."""
    return float(np.sqrt(factorial(q - 1) * j_scale**2 / n ** (q - 1)))


def dense_syk(n: int, q: int = 4, j_scale: float = 1.0, seed: int = 0) -> MajoranaHamiltonian:
    """All-to-all q-body SYK draw with i.i.d. Gaussian couplings."""
    if q % 2 or q > n:
        raise ValueError("q must be even and at most N")
    rng = np.random.default_rng(seed)
    sigma = syk_sigma(n, q, j_scale)
    terms = tuple(
        (MajoranaMonomial(idx), float(rng.normal(0.0, sigma)))
        for idx in combinations(range(1, n + 1), q)
    )
    assert len(terms) == comb(n, q)
    return MajoranaHamiltonian(n, q, terms)


def random_commuting_variant(h: MajoranaHamiltonian, seed: int = 0) -> MajoranaHamiltonian:
    """Same monomials, coefficients resampled at the input's empirical scale."""
    report = commutativity_report(h)
    if not report.fully_commuting:
        raise ValueError("input Hamiltonian is not fully commuting")
    rng = np.random.default_rng(seed)
    scale = float(np.std(h.coefficients()))
    terms = tuple(
        (mono, float(rng.normal(0.0, scale))) for mono, _ in h.terms
    )
    return MajoranaHamiltonian(h.n_majorana, h.q, terms)


CATALOG = {
    "learned_h0": learned_h0,
    "learned_h6": learned_h6,
    "learned_n10_8term": learned_n10_8term,
    "perturbation_h1": perturbation_h1,
    "h0_plus_h1": h0_plus_h1,
}


@dataclass
class DoubledSystem:
    """Left/right doubled Hamiltonians, coupling operator and beta=0 TFD.

    All matrices act on the system block (n_side qubits); register qubits are
    tensor identities and are attached at the protocol level.  v is the
    Hermitian coupling i * sum_j psi_L^j psi_R^j.
    """

    layout: RegisterLayout
    h_l: HermitianOperator
    h_r: HermitianOperator
    v: HermitianOperator
    tfd0: QuantumState
    norm: str = "pauli"

    @property
    def n_side(self) -> int:
        return self.layout.n_side

    def promote(self, matrix: np.ndarray) -> np.ndarray:
        """Embed a system-block matrix into the full register space."""
        regs = self.layout.n_qubits - self.layout.n_system_qubits
        return np.kron(matrix, np.eye(1 << regs))


def maximally_entangled_state(layout: RegisterLayout) -> QuantumState:
    """Joint vacuum of the modes (psi_L^j - i psi_R^j)/2 on the system block.

    This is the canonical beta=0 thermofield state: the unique ground state
    of the mode number operator, phase-fixed deterministically.
    """
    n_q = layout.n_system_qubits
    dim = 1 << n_q
    number_op = np.zeros((dim, dim), dtype=complex)
    for j in range(1, layout.n_side + 1):
        l_mat = pauli_matrix(layout.left_string(j))
        r_mat = pauli_matrix(layout.right_string(j))
        d = 0.5 * (l_mat - 1j * r_mat)
        number_op += d.conj().T @ d
    evals, evecs = np.linalg.eigh(number_op)
    if evals[0] > 1e-9:
        raise RuntimeError("vacuum construction failed: no zero mode")
    if evals[1] < 0.5:
        raise RuntimeError("vacuum construction failed: degenerate zero mode")
    vec = evecs[:, 0]
    pivot = vec[np.flatnonzero(np.abs(vec) > 1e-9 * np.abs(vec).max())[0]]
    vec = vec * (abs(pivot) / pivot)
    return QuantumState(vec, n_q)


def double(h: MajoranaHamiltonian, layout: RegisterLayout | None = None,
           norm: str = "pauli") -> DoubledSystem:
    """Build H_L, H_R, the Hermitian coupling V and the beta=0 TFD."""
    if layout is None:
        layout = RegisterLayout(h.n_majorana)
    if layout.n_side < h.n_majorana:
        raise ValueError(
            f"layout capacity n_side={layout.n_side} below N={h.n_majorana}"
        )
    n_q = layout.n_system_qubits
    h_l = hamiltonian_matrix(h, n_qubits=n_q, flat_map=layout.left_flat, norm=norm)
    h_r = hamiltonian_matrix(h, n_qubits=n_q, flat_map=layout.right_flat, norm=norm)
    scale = {"pauli": 1.0, "syk": 0.5}[norm]
    dim = 1 << n_q
    v = np.zeros((dim, dim), dtype=complex)
    for j in range(1, layout.n_side + 1):
        prod = layout.left_string(j).multiply(layout.right_string(j))
        v += 1j * scale * pauli_matrix(prod)
    system = DoubledSystem(
        layout=layout,
        h_l=HermitianOperator(h_l),
        h_r=HermitianOperator(h_r),
        v=HermitianOperator(v),
        tfd0=maximally_entangled_state(layout),
        norm=norm,
    )
    residual = np.linalg.norm((h_l - h_r) @ system.tfd0.vector)
    if residual > 1e-9:
        raise RuntimeError(f"(H_L - H_R)|TFD_0> residual {residual:.2e}")
    return system
