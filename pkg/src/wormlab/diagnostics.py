"""Debate diagnostics: two-point revivals, OTOCs and operator-size winding.

Two-point and four-point functions run on the single-side chain (N Majoranas
on ceil(N/2) qubits).  Winding runs on the doubled system: the thermal
operator state psi_L^j(t) exp(-beta H_L / 2)|TFD_0> is expanded over the
orthonormal basis {Gamma_A |TFD_0>} of left Majorana monomials, which for
left-supported operators coincides with the normalized Hilbert-Schmidt
expansion of the operator itself and stays well-defined when the evolution
is generated by the coupled Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hilbert import (
    HermitianOperator,
    NORM_FACTORS,
    apply_pauli,
    hamiltonian_matrix,
    pauli_matrix,
    thermal_sqrt,
)
from .models import DoubledSystem, MajoranaHamiltonian
from .pauli import MajoranaMonomial, jw_majorana, single_side_qubits


@dataclass
class CorrelatorSeries:
    """<psi^j(t) psi^j(0)> at inverse temperature beta over a time grid."""

    fermion: int
    beta: float
    times: np.ndarray
    values: np.ndarray

    def revival_metric(self) -> float:
        """Late-window max |C| over |C(0+)|; window is the grid's final third."""
        cut = len(self.times) - max(1, len(self.times) // 3)
        late = np.max(np.abs(self.values[cut:]))
        return float(late / np.abs(self.values[0]))

    def thermalization_time(self, level: float = 1.0 / np.e, patience: int = 3) -> float | None:
        """First time |C|/|C(0)| stays below the level for `patience` grid points."""
        ratio = np.abs(self.values) / np.abs(self.values[0])
        below = ratio < level
        run = 0
        for k, flag in enumerate(below):
            run = run + 1 if flag else 0
            if run >= patience:
                return float(self.times[k - patience + 1])
        return None


def _fermion_matrices(h: MajoranaHamiltonian, norm: str):
    n_q = single_side_qubits(h.n_majorana)
    scale = NORM_FACTORS[norm]
    mats = [scale * pauli_matrix(jw_majorana(j, n_q)) for j in range(1, h.n_majorana + 1)]
    return n_q, mats


def two_point(h: MajoranaHamiltonian, j: int, beta: float, t_grid,
              norm: str = "pauli",
              h_op: HermitianOperator | None = None) -> CorrelatorSeries:
    """Tr[rho_beta psi^j(t) psi^j(0)] on the single-side chain."""
    if not 1 <= j <= h.n_majorana:
        raise ValueError(f"fermion index {j} out of range")
    n_q, mats = _fermion_matrices(h, norm)
    if h_op is None:
        h_op = HermitianOperator(hamiltonian_matrix(h, norm=norm))
    evals, evecs = h_op.eig
    rho = h_op.expm_factor(-beta)
    rho /= np.trace(rho).real
    psi = mats[j - 1]
    psi_eig = evecs.conj().T @ psi @ evecs
    psi_rho_eig = evecs.conj().T @ (psi @ rho) @ evecs
    times = np.asarray(list(t_grid), dtype=float)
    values = np.empty(times.size, dtype=complex)
    for k, t in enumerate(times):
        phase = np.exp(1j * evals * t)
        heis = (phase[:, None] * psi_eig) * phase.conj()[None, :]
        # Tr[rho psi(t) psi] = Tr[(psi rho) psi(t)]
        values[k] = np.sum(psi_rho_eig * heis.T)
    return CorrelatorSeries(fermion=j, beta=beta, times=times, values=values)


@dataclass
class OtocSeries:
    """Regularized out-of-time-order correlator for a fermion pair."""

    fermions: tuple[int, int]
    beta: float
    times: np.ndarray
    values: np.ndarray

    def normalized(self) -> np.ndarray:
        return self.values / self.values[0]

    def scrambling_time(self, level: float = 0.5) -> float | None:
        """First time the normalized OTOC falls below the level."""
        ratio = self.normalized()
        hits = np.flatnonzero(ratio < level)
        return float(self.times[hits[0]]) if hits.size else None


def otoc(h: MajoranaHamiltonian, i: int, j: int, beta: float, t_grid,
         norm: str = "pauli",
         h_op: HermitianOperator | None = None) -> OtocSeries:
    """Re Tr[y psi^i(t) y psi^j y psi^i(t) y psi^j] with y = rho^(1/4)."""
    if i == j:
        raise ValueError("OTOC needs two distinct fermions")
    n_q, mats = _fermion_matrices(h, norm)
    if h_op is None:
        h_op = HermitianOperator(hamiltonian_matrix(h, norm=norm))
    evals, evecs = h_op.eig
    quarter = h_op.expm_factor(-beta / 4.0)
    quarter /= np.trace(h_op.expm_factor(-beta)).real ** 0.25
    psi_i, psi_j = mats[i - 1], mats[j - 1]
    times = np.asarray(list(t_grid), dtype=float)
    values = np.empty(times.size, dtype=float)
    right = quarter @ psi_j
    for k, t in enumerate(times):
        u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
        psi_i_t = u.conj().T @ psi_i @ u
        block = quarter @ psi_i_t
        m = block @ right
        values[k] = np.trace(m @ m).real
    return OtocSeries(fermions=(i, j), beta=beta, times=times, values=values)


@dataclass
class WindingReport:
    """Size distribution and winding quality of a thermal fermion operator."""

    fermion: int
    time: float
    beta: float
    sizes: np.ndarray
    p_n: np.ndarray
    q_n: np.ndarray
    winding_quality: float
    alpha: float
    evolution: str = "left"


class MonomialBasis:
    """Orthonormal states Gamma_A |TFD_0> grouped by monomial size."""

    def __init__(self, system: DoubledSystem):
        layout = system.layout
        n = layout.n_side
        dim = 1 << layout.n_system_qubits
        vectors = np.empty((dim, 1 << n), dtype=complex)
        sizes = np.empty(1 << n, dtype=int)
        col = 0
        base = system.tfd0.vector
        scale = NORM_FACTORS[system.norm]
        for size in range(n + 1):
            for idx in combinations(range(1, n + 1), size):
                mono = MajoranaMonomial(idx)
                string = layout.monomial_string(mono, side="L")
                vec = (scale ** size) * apply_pauli(string, base)
                vectors[:, col] = vec
                sizes[col] = size
                col += 1
        norms = np.linalg.norm(vectors, axis=0)
        self.vectors = vectors / norms
        self.sizes = sizes
        self.n_side = n


def _winding_alpha_scan(sizes: np.ndarray, q_terms: np.ndarray,
                        grid_points: int = 4096) -> tuple[float, float]:
    """Maximize |sum_n q_n e^{-2 i alpha n}| over alpha in [0, pi)."""
    alphas = np.linspace(0.0, np.pi, grid_points, endpoint=False)
    phases = np.exp(-2j * np.outer(alphas, sizes))
    mags = np.abs(phases @ q_terms)
    k = int(np.argmax(mags))
    # quadratic refinement on the periodic grid
    lo, mid, hi = mags[(k - 1) % grid_points], mags[k], mags[(k + 1) % grid_points]
    denom = lo - 2 * mid + hi
    shift = 0.0 if abs(denom) < 1e-30 else 0.5 * (lo - hi) / denom
    alpha = (alphas[k] + shift * (np.pi / grid_points)) % np.pi
    best = float(np.abs(np.exp(-2j * alpha * sizes) @ q_terms))
    return max(best, float(mid)), float(alpha)


def size_distribution(system: DoubledSystem, j: int, t: float, beta: float,
                      evolution: str = "left", mu: float | None = None,
                      basis: MonomialBasis | None = None) -> WindingReport:
    """Expand psi_L^j(t) rho^(1/2) over the size-graded monomial basis.

    evolution selects the Heisenberg generator: "left" uses H_L alone,
    "tot" uses H_L + H_R + mu V.
    """
    layout = system.layout
    if not 1 <= j <= layout.n_side:
        raise ValueError("fermion index out of range")
    if basis is None:
        basis = MonomialBasis(system)
    if evolution == "left":
        gen = system.h_l
    elif evolution == "tot":
        if mu is None:
            raise ValueError("evolution='tot' needs mu")
        from .tfd import h_tfd

        gen = h_tfd(system, mu)
    else:
        raise ValueError("evolution must be 'left' or 'tot'")

    scale = NORM_FACTORS[system.norm]
    root = thermal_sqrt(system.h_l, beta)
    vec = root @ system.tfd0.vector
    evals, evecs = gen.eig
    inner = evecs.conj().T @ vec
    fwd = evecs @ (np.exp(-1j * evals * t) * inner)
    psi_f = scale * apply_pauli(layout.left_string(j).pad(layout.n_system_qubits), fwd)
    phi = evecs @ (np.exp(1j * evals * t) * (evecs.conj().T @ psi_f))

    coeffs = basis.vectors.conj().T @ phi
    coeffs = coeffs / np.linalg.norm(coeffs)
    sizes = np.arange(layout.n_side + 1)
    p_n = np.array([np.sum(np.abs(coeffs[basis.sizes == n]) ** 2) for n in sizes])
    q_n = np.array([np.sum(coeffs[basis.sizes == n] ** 2) for n in sizes])
    quality, alpha = _winding_alpha_scan(basis.sizes.astype(float), coeffs**2)
    return WindingReport(
        fermion=j,
        time=float(t),
        beta=float(beta),
        sizes=sizes,
        p_n=p_n,
        q_n=q_n,
        winding_quality=quality,
        alpha=alpha,
        evolution=evolution,
    )


def winding_sweep(system: DoubledSystem, fermions, t_grid, beta: float,
                  evolution: str = "left", mu: float | None = None) -> list[WindingReport]:
    """Cross product of fermions and times, sharing one basis build."""
    basis = MonomialBasis(system)
    return [
        size_distribution(system, j, t, beta, evolution=evolution, mu=mu, basis=basis)
        for j in fermions
        for t in t_grid
    ]


@dataclass
class EigenphaseCheck:
    is_eigenvector: bool
    eigenvalue: float


def eigenphase_action_check(system: DoubledSystem, mono: MajoranaMonomial,
                            tol: float = 1e-9) -> EigenphaseCheck:
    """Whether (Gamma_P x I)|TFD_0> is an eigenvector of the coupling V."""
    layout = system.layout
    scale = NORM_FACTORS[system.norm]
    string = layout.monomial_string(mono, side="L")
    vec = (scale ** mono.size) * apply_pauli(string, system.tfd0.vector)
    vec = vec / np.linalg.norm(vec)
    image = system.v.matrix @ vec
    lam = float(np.real(np.vdot(vec, image)))
    residual = np.linalg.norm(image - lam * vec)
    return EigenphaseCheck(is_eigenvector=bool(residual < tol), eigenvalue=lam)


@dataclass
class SizeLaw:
    intercept: float
    slope: float
    residual: float
    eigenvalues: dict


def coupling_size_law(system: DoubledSystem) -> SizeLaw:
    """Affine law of V eigenvalues across all monomial sizes."""
    n = system.layout.n_side
    points = []
    eigenvalues = {}
    for size in range(n + 1):
        for idx in combinations(range(1, n + 1), size):
            check = eigenphase_action_check(system, MajoranaMonomial(idx))
            if not check.is_eigenvector:
                raise RuntimeError(f"monomial {idx} is not a V eigenvector")
            points.append((size, check.eigenvalue))
            eigenvalues.setdefault(size, check.eigenvalue)
    ns = np.array([p[0] for p in points], dtype=float)
    lams = np.array([p[1] for p in points])
    design = np.stack([np.ones_like(ns), ns], axis=1)
    coef, *_ = np.linalg.lstsq(design, lams, rcond=None)
    residual = float(np.max(np.abs(design @ coef - lams)))
    return SizeLaw(intercept=float(coef[0]), slope=float(coef[1]),
                   residual=residual, eigenvalues=eigenvalues)
