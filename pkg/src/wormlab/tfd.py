"""Thermofield-double states, the coupled Hamiltonian and fidelity scans.

Two weight conventions are supported.  `half` weights eigenstates by
exp(-beta E / 2) so the one-sided reduction is exactly exp(-beta H)/Z; this
is the default because that reduction is the property the protocol needs.
`paper_literal` applies exp(-beta E) as printed in the source equation,
which reduces to a thermal state at twice the inverse temperature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HermitianOperator, QuantumState, ground_state
from .models import DoubledSystem

CONVENTIONS = ("half", "paper_literal")


@dataclass(frozen=True)
class TfdSpec:
    beta: float
    convention: str = "half"

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError("beta must be finite and nonnegative")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")

    @property
    def weight_scale(self) -> float:
        return 0.5 if self.convention == "half" else 1.0


def tfd_state(system: DoubledSystem, spec: TfdSpec) -> QuantumState:
    """Normalized exp(-s beta H_L)|TFD_0> with s fixed by the convention."""
    weights = system.h_l.expm_factor(-spec.weight_scale * spec.beta)
    vec = weights @ system.tfd0.vector
    vec /= np.linalg.norm(vec)
    return QuantumState(vec, system.tfd0.n_qubits)


def paired_tfd(h: HermitianOperator, beta: float, convention: str = "half") -> QuantumState:
    """Generic two-register TFD of an arbitrary qubit Hamiltonian.

    Returns sum_n w(E_n) |n> (x) |conj n> over doubled registers, so that the
    reduction onto the first register is thermal under the half convention.
    """
    spec = TfdSpec(beta, convention)
    evals, evecs = h.eig
    w = np.exp(-spec.weight_scale * beta * evals)
    w /= np.linalg.norm(w)
    dim = h.dim
    vec = np.zeros(dim * dim, dtype=complex)
    for n in range(dim):
        vec += w[n] * np.kron(evecs[:, n], evecs[:, n].conj())
    return QuantumState(vec, 2 * h.n_qubits)


def h_tfd(system: DoubledSystem, mu: float) -> HermitianOperator:
    """H_L + H_R + mu V with the Hermitian coupling V (the i already absorbed)."""
    return HermitianOperator(system.h_l.matrix + system.h_r.matrix + mu * system.v.matrix)


@dataclass
class FidelityScan:
    betas: np.ndarray
    fidelities: np.ndarray
    beta_star: float
    fidelity_max: float
    convention: str
    mu: float

    def rows(self):
        return list(zip(self.betas.tolist(), self.fidelities.tolist()))


def tfd_fidelity_scan(system: DoubledSystem, mu: float, beta_grid,
                      convention: str = "half") -> FidelityScan:
    """|<TFD_beta|gs(H_TFD)>|^2 over a beta grid; ties go to the smallest beta."""
    betas = np.asarray(list(beta_grid), dtype=float)
    if betas.size == 0:
        raise ValueError("beta grid must be nonempty")
    _, gs = ground_state(h_tfd(system, mu))
    fids = np.array([
        tfd_state(system, TfdSpec(b, convention)).fidelity(gs) for b in betas
    ])
    best = int(np.argmax(fids))
    return FidelityScan(
        betas=betas,
        fidelities=fids,
        beta_star=float(betas[best]),
        fidelity_max=float(fids[best]),
        convention=convention,
        mu=mu,
    )


def log_beta_grid(lo: float = 0.25, hi: float = 32.0, points: int = 29) -> np.ndarray:
    return np.geomspace(lo, hi, points)
