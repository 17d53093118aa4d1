"""Density-matrix protocol runs under depolarizing or coherent gate noise.

The trotterized pipeline is replayed on a density matrix; after every gate
layer (one per-term exponential or one SWAP) the noise channel acts on the
qubits that layer touched.  Depolarizing noise mixes each touched qubit
toward the maximally mixed state with probability p; coherent noise applies
a fixed Z over-rotation by epsilon radians instead.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .hilbert import DensityMatrix, mutual_information, pauli_action
from .models import DoubledSystem, MajoranaHamiltonian, double
from .pauli import PauliString, RegisterLayout
from .protocol import (
    ProtocolConfig,
    TeleportationCurve,
    _coupling_terms,
    _hermitian_terms,
    _initial_state,
)

MAX_NOISE_QUBITS = 11


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"
    p: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "depolarizing", "coherent"):
            raise ValueError("kind must be none, depolarizing or coherent")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if not np.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")


def depolarize(rho: DensityMatrix, p: float, qubits) -> DensityMatrix:
    """Per listed qubit: rho -> (1-p) rho + p (I_q/2 x Tr_q rho)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    m = rho.matrix.copy()
    for q in qubits:
        m = _depolarize_raw(m, rho.n_qubits, q, p)
    return DensityMatrix(m, rho.n_qubits)


def _depolarize_raw(m: np.ndarray, n: int, qubit: int, p: float) -> np.ndarray:
    pre, post = 1 << qubit, 1 << (n - qubit - 1)
    r = m.reshape(pre, 2, post, pre, 2, post)
    traced = r[:, 0, :, :, 0, :] + r[:, 1, :, :, 1, :]
    out = (1.0 - p) * r
    out[:, 0, :, :, 0, :] += 0.5 * p * traced
    out[:, 1, :, :, 1, :] += 0.5 * p * traced
    return out.reshape(m.shape)


def _overrotate_raw(m: np.ndarray, n: int, qubit: int, epsilon: float) -> np.ndarray:
    _, signs = pauli_action(n, 0, 1 << qubit, 0)
    d = np.exp(-0.5j * epsilon * signs.real)
    return (d[:, None] * m) * d.conj()[None, :]


class _DensityPipeline:
    """Trotter pipeline replayed on a density matrix with per-layer noise."""

    def __init__(self, vector: np.ndarray, layout: RegisterLayout, noise: NoiseSpec):
        self.rho = np.outer(vector, vector.conj())
        self.n = layout.n_qubits
        self.layout = layout
        self.noise = noise

    def _apply_noise(self, qubits):
        if self.noise.kind == "none":
            return
        for q in qubits:
            if self.noise.kind == "depolarizing":
                self.rho = _depolarize_raw(self.rho, self.n, q, self.noise.p)
            else:
                self.rho = _overrotate_raw(self.rho, self.n, q, self.noise.epsilon)

    def _support(self, string: PauliString):
        mask = string.x_mask | string.z_mask
        return [q for q in range(string.n_qubits) if (mask >> q) & 1]

    def pauli_rotation(self, string: PauliString, angle: float):
        """exp(-i angle S) rho exp(+i angle S) for involutory Hermitian S, then noise."""
        padded = string.pad(self.n)
        idx, phase = pauli_action(self.n, padded.x_mask, padded.z_mask, padded.phase_pow)
        # S rho and rho S via the signed permutation of S
        s_rho = np.empty_like(self.rho)
        s_rho[idx, :] = phase[:, None] * self.rho
        rho_s = self.rho[:, idx] * phase[None, :]
        s_rho_s = s_rho[:, idx] * phase[None, :]
        c, s = np.cos(angle), np.sin(angle)
        self.rho = (
            c * c * self.rho + s * s * s_rho_s + 1j * c * s * (rho_s - s_rho)
        )
        self._apply_noise(self._support(padded))

    def swap(self, q1: int, q2: int):
        if q1 != q2:
            dim = self.rho.shape[0]
            b1, b2 = self.n - 1 - q1, self.n - 1 - q2
            cols = np.arange(dim)
            bit1, bit2 = (cols >> b1) & 1, (cols >> b2) & 1
            perm = cols ^ ((bit1 ^ bit2) * ((1 << b1) | (1 << b2)))
            self.rho = self.rho[np.ix_(perm, perm)]
        self._apply_noise([q1, q2])

    def density_matrix(self) -> DensityMatrix:
        tr = np.trace(self.rho).real
        return DensityMatrix(self.rho / tr, self.n)


def noisy_protocol(hamiltonian: MajoranaHamiltonian, config: ProtocolConfig,
                   noise: NoiseSpec,
                   system: DoubledSystem | None = None) -> TeleportationCurve:
    """Density-matrix teleportation curve under the given gate noise."""
    if config.mode != "trotter":
        raise ValueError("noise attaches to gates: config.mode must be 'trotter'")
    if system is None:
        layout = RegisterLayout(hamiltonian.n_majorana, reuse_q_as_t=config.reuse_q_as_t)
        system = double(hamiltonian, layout, norm=config.majorana_norm)
    layout = system.layout
    if layout.n_qubits > MAX_NOISE_QUBITS:
        raise ValueError("density-matrix pipeline is capped at 2^11 rows")
    carrier_l = layout.carrier_qubit(config.inject_fermions, side="L")
    carrier_r = layout.carrier_qubit(config.inject_fermions, side="R")
    left_terms = _hermitian_terms(hamiltonian, layout, "L", config.majorana_norm)
    right_terms = _hermitian_terms(hamiltonian, layout, "R", config.majorana_norm)
    v_terms = _coupling_terms(system)
    steps = config.trotter_steps

    values = []
    for t1 in config.t1_grid:
        reg = _initial_state(system, config)
        pipe = _DensityPipeline(reg.vector, layout, noise)
        _leg(pipe, left_terms, config.t0, steps, inverse=True)
        pipe.swap(layout.q_qubit, carrier_l)
        _leg(pipe, left_terms, config.t0, steps)
        _leg(pipe, v_terms, -config.mu, 1)
        _leg(pipe, right_terms, t1, steps)
        pipe.swap(carrier_r, layout.t_qubit)
        rho = pipe.density_matrix()
        values.append(mutual_information(rho, [layout.p_qubit], [layout.t_qubit]))

    return TeleportationCurve(
        t1=np.array(config.t1_grid), i_pt_nats=np.array(values), config=config
    )


def _leg(pipe: _DensityPipeline, terms, t: float, steps: int, inverse: bool = False):
    dt = t / steps
    order = list(reversed(terms)) if inverse else list(terms)
    sign = -1.0 if inverse else 1.0
    for _ in range(steps):
        for string, coeff in order:
            pipe.pauli_rotation(string, sign * coeff * dt)


@dataclass
class NoisePoint:
    kind: str
    magnitude: float
    peak_height: float
    peak_t1: float


@dataclass
class RobustnessReport:
    points: list[NoisePoint]
    depolarizing_monotone: bool
    peak_spread_depolarizing: float
    peak_spread_coherent: float
    coherent_shifts_exceed_incoherent: bool


def coherent_vs_incoherent_report(hamiltonian: MajoranaHamiltonian,
                                  config: ProtocolConfig,
                                  p_grid, eps_grid,
                                  system: DoubledSystem | None = None) -> RobustnessReport:
    """Peak height/location versus noise magnitude for both noise kinds."""
    if system is None:
        layout = RegisterLayout(hamiltonian.n_majorana, reuse_q_as_t=config.reuse_q_as_t)
        system = double(hamiltonian, layout, norm=config.majorana_norm)

    points = [_point(hamiltonian, config, NoiseSpec("none"), system, "none", 0.0)]
    for p in p_grid:
        points.append(_point(hamiltonian, config, NoiseSpec("depolarizing", p=float(p)),
                             system, "depolarizing", float(p)))
    for eps in eps_grid:
        points.append(_point(hamiltonian, config, NoiseSpec("coherent", epsilon=float(eps)),
                             system, "coherent", float(eps)))

    dep = [pt for pt in points if pt.kind == "depolarizing"]
    coh = [pt for pt in points if pt.kind == "coherent"]
    heights = [pt.peak_height for pt in dep]
    monotone = all(a >= b - 1e-6 for a, b in zip(heights, heights[1:]))
    spread_dep = _spread([pt.peak_t1 for pt in dep])
    spread_coh = _spread([pt.peak_t1 for pt in coh])
    return RobustnessReport(
        points=points,
        depolarizing_monotone=monotone,
        peak_spread_depolarizing=spread_dep,
        peak_spread_coherent=spread_coh,
        coherent_shifts_exceed_incoherent=spread_coh > spread_dep,
    )


def _point(hamiltonian, config, noise, system, kind, magnitude) -> NoisePoint:
    curve = noisy_protocol(hamiltonian, config, noise, system=system)
    peak = curve.peak_summary()
    return NoisePoint(kind=kind, magnitude=magnitude,
                      peak_height=peak.i_pt_peak, peak_t1=peak.t1_peak)


def _spread(values) -> float:
    return float(max(values) - min(values)) if values else 0.0
