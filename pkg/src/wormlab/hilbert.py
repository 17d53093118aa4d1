"""Dense Hilbert-space engine: matrices, exact evolution, traces and entropies.

Everything is exact dense linear algebra over 2^n dimensional spaces, with a
hard cap at 14 qubits so layout bugs cannot silently allocate huge arrays.
Qubit 0 is the most significant tensor factor throughout, matching the
convention in :mod:`wormlab.pauli`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .pauli import MajoranaMonomial, PauliString

MAX_QUBITS = 14
NORM_FACTORS = {"pauli": 1.0, "syk": 1.0 / np.sqrt(2.0)}


def _check_dim(n_qubits: int):
    if n_qubits > MAX_QUBITS:
        raise ValueError(f"{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")


def _rev_mask(mask: int, n: int) -> int:
    """Map qubit-indexed mask bits to arithmetic bit positions of basis indices."""
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


from functools import lru_cache


@lru_cache(maxsize=4096)
def pauli_action(n_qubits: int, x_mask: int, z_mask: int,
                 phase_pow: int) -> tuple[np.ndarray, np.ndarray]:
    """(targets, phases) with P|col> = phases[col] |targets[col]>; cached."""
    _check_dim(n_qubits)
    dim = 1 << n_qubits
    x = _rev_mask(x_mask, n_qubits)
    z = _rev_mask(z_mask, n_qubits)
    cols = np.arange(dim)
    zpar = np.zeros(dim)
    for b in range(n_qubits):
        if (z >> b) & 1:
            zpar += (cols >> b) & 1
    phases = (1j ** ((phase_pow + bin(x_mask & z_mask).count("1")) % 4)) * (
        (-1.0) ** zpar
    )
    targets = cols ^ x
    targets.setflags(write=False)
    phases.setflags(write=False)
    return targets, phases


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string via its signed-permutation action."""
    targets, phases = pauli_action(p.n_qubits, p.x_mask, p.z_mask, p.phase_pow)
    dim = 1 << p.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    m[targets, np.arange(dim)] = phases
    return m


def apply_pauli(p: PauliString, vec: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a state vector without forming the matrix."""
    targets, phases = pauli_action(p.n_qubits, p.x_mask, p.z_mask, p.phase_pow)
    out = np.empty_like(vec, dtype=complex)
    out[targets] = phases * vec
    return out


@dataclass
class QuantumState:
    """Normalized pure state over 2^n amplitudes."""

    vector: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=complex).reshape(-1)
        if self.vector.size != 1 << self.n_qubits:
            raise ValueError("amplitude count does not match qubit count")
        norm = np.linalg.norm(self.vector)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {norm} deviates from 1")

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = False) -> "QuantumState":
        v = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(np.log2(v.size))
        if 1 << n != v.size:
            raise ValueError("amplitude count is not a power of two")
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(v, n)

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "QuantumState":
        v = np.zeros(1 << n_qubits, dtype=complex)
        v[index] = 1.0
        return cls(v, n_qubits)

    def fidelity(self, other: "QuantumState") -> float:
        return float(abs(np.vdot(self.vector, other.vector)) ** 2)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix over 2^n dimensions."""

    matrix: np.ndarray
    n_qubits: int

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 1 << self.n_qubits
        if self.matrix.shape != (dim, dim):
            raise ValueError("matrix shape does not match qubit count")
        if np.linalg.norm(self.matrix - self.matrix.conj().T) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(self.matrix).real - 1.0) > 1e-10:
            raise ValueError("density matrix trace deviates from 1")

    @classmethod
    def from_state(cls, state: QuantumState) -> "DensityMatrix":
        return cls(np.outer(state.vector, state.vector.conj()), state.n_qubits)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass
class HermitianOperator:
    """Dense Hermitian matrix with a cached eigendecomposition.

    The cache is not locked; concurrent users must touch .eig once before
    fanning out (the sweep drivers do), which gives the computed-eagerly
    variant of the single-initialization contract.
    """

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError("operator matrix must be square")
        if np.linalg.norm(self.matrix - self.matrix.conj().T) > 1e-10:
            raise ValueError("operator is not Hermitian")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(np.log2(self.dim))

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        evals, evecs = np.linalg.eigh(self.matrix)
        return evals, evecs

    def expm_factor(self, scale: complex) -> np.ndarray:
        """exp(scale * M) through the cached eigendecomposition."""
        evals, evecs = self.eig
        return (evecs * np.exp(scale * evals)) @ evecs.conj().T

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix)


def to_matrix(op, n_qubits: int | None = None, norm: str = "pauli") -> HermitianOperator:
    """Dense Hermitian matrix of a Pauli string or Majorana Hamiltonian.

    For a Hamiltonian the single-side JW chain over ceil(N/2) qubits is used
    unless n_qubits widens it.  norm selects the Majorana normalization:
    each Majorana contributes a factor 1 (pauli, psi^2 = 1) or 1/sqrt(2)
    (syk, psi^2 = 1/2).
    """
    if isinstance(op, PauliString):
        m = pauli_matrix(op if n_qubits is None else op.pad(n_qubits))
        return HermitianOperator(m)
    return HermitianOperator(hamiltonian_matrix(op, n_qubits=n_qubits, norm=norm))


def hamiltonian_matrix(hamiltonian, n_qubits: int | None = None, flat_map=None,
                       norm: str = "pauli") -> np.ndarray:
    """Sum of coefficient-weighted monomial matrices; not wrapped or checked."""
    from .pauli import single_side_qubits

    if n_qubits is None:
        n_qubits = single_side_qubits(hamiltonian.n_majorana)
    _check_dim(n_qubits)
    scale = NORM_FACTORS[norm]
    dim = 1 << n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for mono, coeff in hamiltonian.terms:
        string = mono.to_string(n_qubits, flat_map=flat_map)
        total += (coeff * scale ** mono.size) * pauli_matrix(string)
    return total


def evolve(state: QuantumState, h: HermitianOperator, t: float) -> QuantumState:
    """exp(-i H t)|psi> via the cached eigendecomposition of H."""
    if h.dim != state.vector.size:
        raise ValueError("operator and state dimensions differ")
    evals, evecs = h.eig
    phases = np.exp(-1j * evals * t)
    out = evecs @ (phases * (evecs.conj().T @ state.vector))
    return QuantumState(out, state.n_qubits)


def partial_trace(obj, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (ascending qubit order)."""
    keep = sorted(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    if isinstance(obj, QuantumState):
        n = obj.n_qubits
        _validate_qubits(keep, n)
        drop = [q for q in range(n) if q not in keep]
        psi = obj.vector.reshape([2] * n).transpose(keep + drop)
        psi = psi.reshape(1 << len(keep), -1)
        return DensityMatrix(psi @ psi.conj().T, len(keep))
    if isinstance(obj, DensityMatrix):
        n = obj.n_qubits
        _validate_qubits(keep, n)
        drop = [q for q in range(n) if q not in keep]
        perm = keep + drop
        rho = obj.matrix.reshape([2] * (2 * n))
        rho = rho.transpose(perm + [n + p for p in perm])
        k, d = 1 << len(keep), 1 << len(drop)
        rho = rho.reshape(k, d, k, d)
        return DensityMatrix(np.einsum("iaja->ij", rho), len(keep))
    raise TypeError("expected QuantumState or DensityMatrix")


def _validate_qubits(qubits, n):
    if any(q < 0 or q >= n for q in qubits):
        raise ValueError("qubit index out of range")
    if len(set(qubits)) != len(qubits):
        raise ValueError("duplicate qubit index")


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in nats, with eigenvalues clipped at zero."""
    evals = np.clip(rho.eigenvalues(), 0.0, None)
    nz = evals[evals > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def entropy_bits(rho: DensityMatrix) -> float:
    return entropy(rho) / np.log(2.0)


def mutual_information(state, region_a, region_b) -> float:
    """S_A + S_B - S_AB in nats for disjoint qubit regions."""
    region_a, region_b = list(region_a), list(region_b)
    if set(region_a) & set(region_b):
        raise ValueError("regions overlap")
    s_a = entropy(partial_trace(state, region_a))
    s_b = entropy(partial_trace(state, region_b))
    s_ab = entropy(partial_trace(state, region_a + region_b))
    return s_a + s_b - s_ab


def ground_state(h: HermitianOperator) -> tuple[float, QuantumState]:
    """Lowest eigenpair with deterministic phase fixing.

    On (near-)degeneracy the eigensolver's first vector at the sorted minimum
    is taken, then the first amplitude above threshold is made real positive.
    """
    evals, evecs = h.eig
    vec = evecs[:, 0].copy()
    vec = _fix_phase(vec)
    return float(evals[0]), QuantumState(vec, int(np.log2(h.dim)))


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(vec) > 1e-9 * np.abs(vec).max())
    pivot = vec[idx[0]]
    return vec * (abs(pivot) / pivot)


def thermal_sqrt(h: HermitianOperator, beta: float) -> np.ndarray:
    """exp(-beta H / 2), the positive square root of the unnormalized thermal matrix."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    return h.expm_factor(-0.5 * beta)


def thermal_state(h: HermitianOperator, beta: float) -> DensityMatrix:
    """exp(-beta H)/Z as a DensityMatrix."""
    m = h.expm_factor(-beta)
    m /= np.trace(m).real
    return DensityMatrix(m, int(np.log2(h.dim)))
