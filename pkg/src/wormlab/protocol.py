"""The four-step teleportation protocol producing mutual-information curves.

Pipeline per readout time t1 (exact mode):

1. prepare |TFD_beta> on the system block, a Bell pair on (P, Q) and |0> on T
2. evolve the left side backward: exp(+i H_L t0)
3. swap Q into the left carrier qubit, evolve forward: exp(-i H_L t0)
4. couple the sides with exp(+i mu V), evolve the right side by t1,
   swap the right carrier into T and report I_PT = S_P + S_T - S_PT.

Trotter mode replaces each exponential by an ordered product of per-term
exponentials (the backward leg is the exact inverse circuit of the forward
leg) and tallies a standard gate-count estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .hilbert import (
    HermitianOperator,
    QuantumState,
    apply_pauli,
    mutual_information,
    partial_trace,
)
from .models import DoubledSystem, MajoranaHamiltonian, double
from .pauli import PauliString, RegisterLayout
from .tfd import TfdSpec, tfd_state

BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class ProtocolConfig:
    """All knobs of a teleportation run."""

    mu: float
    t0: float
    t1_grid: tuple[float, ...]
    beta: float
    inject_fermions: tuple[int, int] = (1, 2)
    mode: str = "exact"
    trotter_steps: int = 1
    reuse_q_as_t: bool = False
    majorana_norm: str = "pauli"
    convention: str = "half"
    seed: int | None = None

    def __post_init__(self):
        if self.t0 < 0:
            raise ValueError("t0 must be nonnegative")
        grid = tuple(float(t) for t in self.t1_grid)
        object.__setattr__(self, "t1_grid", grid)
        if not grid:
            raise ValueError("t1 grid must be nonempty")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("t1 grid must be strictly increasing")
        if self.mode not in ("exact", "trotter"):
            raise ValueError("mode must be 'exact' or 'trotter'")
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be at least 1")


@dataclass(frozen=True)
class GateTally:
    single_qubit: int = 0
    two_qubit: int = 0

    def plus(self, single: int, two: int) -> "GateTally":
        return GateTally(self.single_qubit + single, self.two_qubit + two)


@dataclass
class PeakSummary:
    t1_peak: float
    i_pt_peak: float
    late_baseline: float


@dataclass
class TeleportationCurve:
    """I_PT(t1) rows plus the configuration that produced them."""

    t1: np.ndarray
    i_pt_nats: np.ndarray
    config: ProtocolConfig
    gate_tally: GateTally | None = None

    @property
    def i_pt_bits(self) -> np.ndarray:
        return self.i_pt_nats / np.log(2.0)

    def rows(self):
        return list(zip(self.t1.tolist(), self.i_pt_nats.tolist(), self.i_pt_bits.tolist()))

    def peak_summary(self) -> PeakSummary:
        """Grid argmax plus the mean over the final quartile as a baseline."""
        idx = int(np.argmax(self.i_pt_nats))
        tail = max(1, len(self.t1) // 4)
        return PeakSummary(
            t1_peak=float(self.t1[idx]),
            i_pt_peak=float(self.i_pt_nats[idx]),
            late_baseline=float(np.mean(self.i_pt_nats[-tail:])),
        )


class _RegisterState:
    """State vector over system block + P, Q, T with block-wise operator action."""

    def __init__(self, vector: np.ndarray, layout: RegisterLayout):
        self.vector = vector
        self.layout = layout
        self.n_qubits = layout.n_qubits

    def apply_system_matrix(self, matrix: np.ndarray):
        block = self.vector.reshape(matrix.shape[0], -1)
        self.vector = (matrix @ block).reshape(-1)

    def apply_system_expm(self, op: HermitianOperator, scale: complex):
        """Apply exp(scale * op) on the system block via its eigenbasis."""
        evals, evecs = op.eig
        block = self.vector.reshape(op.dim, -1)
        block = evecs @ (np.exp(scale * evals)[:, None] * (evecs.conj().T @ block))
        self.vector = block.reshape(-1)

    def apply_pauli_exponential(self, string: PauliString, angle: float):
        """exp(-i angle S) for an involutory Hermitian Pauli string S."""
        padded = string.pad(self.n_qubits)
        rotated = apply_pauli(padded, self.vector)
        self.vector = np.cos(angle) * self.vector - 1j * np.sin(angle) * rotated

    def swap(self, q1: int, q2: int):
        if q1 == q2:
            return
        psi = self.vector.reshape([2] * self.n_qubits)
        self.vector = np.swapaxes(psi, q1, q2).reshape(-1)

    def state(self) -> QuantumState:
        # QuantumState validates the norm: the pipeline must stay unitary.
        return QuantumState(self.vector, self.n_qubits)


def _initial_state(system: DoubledSystem, config: ProtocolConfig) -> _RegisterState:
    tfd = tfd_state(system, TfdSpec(config.beta, config.convention))
    vec = np.kron(tfd.vector, BELL)
    if not config.reuse_q_as_t:
        vec = np.kron(vec, np.array([1.0, 0.0], dtype=complex))
    return _RegisterState(vec, system.layout)


def _hermitian_terms(hamiltonian: MajoranaHamiltonian, layout: RegisterLayout,
                     side: str, norm: str) -> list[tuple[PauliString, float]]:
    """(string, coefficient) pairs with phases folded so each string is Hermitian."""
    from .hilbert import NORM_FACTORS

    scale = NORM_FACTORS[norm]
    out = []
    for mono, coeff in hamiltonian.terms:
        string = layout.monomial_string(mono, side=side)
        # quartic monomials are Hermitian: the i-power is 0 or 2
        sign = {0: 1.0, 2: -1.0}[string.phase_pow]
        bare = PauliString(string.n_qubits, string.x_mask, string.z_mask, 0)
        out.append((bare, sign * coeff * scale ** mono.size))
    return out


def _coupling_terms(system: DoubledSystem) -> list[tuple[PauliString, float]]:
    """Hermitian strings of V = i sum_j psi_L^j psi_R^j; all mutually commuting."""
    layout = system.layout
    scale = {"pauli": 1.0, "syk": 0.5}[system.norm]
    out = []
    for j in range(1, layout.n_side + 1):
        prod = layout.left_string(j).multiply(layout.right_string(j))
        phase = (prod.phase_pow + 1) % 4  # the explicit i of the coupling
        sign = {0: 1.0, 2: -1.0}[phase]
        out.append((PauliString(prod.n_qubits, prod.x_mask, prod.z_mask, 0), sign * scale))
    return out


def _trotter_evolve(reg: _RegisterState, terms, t: float, steps: int,
                    inverse: bool = False) -> GateTally:
    """Ordered product of per-term exponentials approximating exp(-i H t)."""
    tally = GateTally()
    dt = t / steps
    order = list(reversed(terms)) if inverse else list(terms)
    sign = -1.0 if inverse else 1.0
    for _ in range(steps):
        for string, coeff in order:
            reg.apply_pauli_exponential(string, sign * coeff * dt)
            w = string.weight
            tally = tally.plus(2 * w + 1, 2 * (w - 1))
    return tally


def run_teleportation(hamiltonian: MajoranaHamiltonian, config: ProtocolConfig,
                      system: DoubledSystem | None = None) -> TeleportationCurve:
    """I_PT(t1) for one coupling sign; dispatches on config.mode."""
    if system is None:
        layout = RegisterLayout(hamiltonian.n_majorana, reuse_q_as_t=config.reuse_q_as_t)
        system = double(hamiltonian, layout, norm=config.majorana_norm)
    layout = system.layout
    carrier_l = layout.carrier_qubit(config.inject_fermions, side="L")
    carrier_r = layout.carrier_qubit(config.inject_fermions, side="R")

    trotter = config.mode == "trotter"
    if trotter:
        left_terms = _hermitian_terms(hamiltonian, layout, "L", config.majorana_norm)
        right_terms = _hermitian_terms(hamiltonian, layout, "R", config.majorana_norm)
        v_terms = _coupling_terms(system)

    values = []
    tally = GateTally()
    for t1 in config.t1_grid:
        reg = _initial_state(system, config)
        if trotter:
            tally = GateTally()
            tally = _merge(tally, _trotter_evolve(reg, left_terms, config.t0,
                                                  config.trotter_steps, inverse=True))
            reg.swap(layout.q_qubit, carrier_l)
            tally = tally.plus(0, 3)
            tally = _merge(tally, _trotter_evolve(reg, left_terms, config.t0,
                                                  config.trotter_steps))
            tally = _merge(tally, _trotter_evolve(reg, v_terms, -config.mu, 1))
            tally = _merge(tally, _trotter_evolve(reg, right_terms, t1,
                                                  config.trotter_steps))
            reg.swap(carrier_r, layout.t_qubit)
            tally = tally.plus(0, 3)
        else:
            reg.apply_system_expm(system.h_l, 1j * config.t0)
            reg.swap(layout.q_qubit, carrier_l)
            reg.apply_system_expm(system.h_l, -1j * config.t0)
            reg.apply_system_expm(system.v, 1j * config.mu)
            reg.apply_system_expm(system.h_r, -1j * t1)
            reg.swap(carrier_r, layout.t_qubit)
        state = reg.state()
        values.append(mutual_information(state, [layout.p_qubit], [layout.t_qubit]))

    return TeleportationCurve(
        t1=np.array(config.t1_grid),
        i_pt_nats=np.array(values),
        config=config,
        gate_tally=tally if trotter else None,
    )


def _merge(a: GateTally, b: GateTally) -> GateTally:
    return a.plus(b.single_qubit, b.two_qubit)


def run_trotterized(hamiltonian: MajoranaHamiltonian, config: ProtocolConfig,
                    system: DoubledSystem | None = None) -> TeleportationCurve:
    """Trotterized pipeline; one step per leg mimics the hardware circuit."""
    if config.mode != "trotter":
        config = replace(config, mode="trotter")
    return run_teleportation(hamiltonian, config, system=system)


@dataclass
class MuSweep:
    curves: list[TeleportationCurve]

    def asymmetry(self, mu_neg: float = -12.0, mu_pos: float = 12.0) -> dict:
        """Peak comparison between the two coupling signs."""
        by_mu = {c.config.mu: c for c in self.curves}
        neg, pos = by_mu[mu_neg], by_mu[mu_pos]
        p_neg, p_pos = neg.peak_summary(), pos.peak_summary()
        delta = p_neg.i_pt_peak - p_pos.i_pt_peak
        return {
            "mu_neg": mu_neg,
            "mu_pos": mu_pos,
            "peak_neg": p_neg.i_pt_peak,
            "peak_pos": p_pos.i_pt_peak,
            "t1_peak_neg": p_neg.t1_peak,
            "delta_peak": delta,
            "sign_delta_peak": int(np.sign(delta)),
        }


def mu_sweep(hamiltonian: MajoranaHamiltonian, config: ProtocolConfig,
             mu_list, threads: int = 1) -> MuSweep:
    """One curve per coupling value, sharing the doubled system.

    With threads > 1 the curves are computed concurrently; each curve is an
    independent deterministic computation, so results are order-stable and
    identical to the serial run.
    """
    layout = RegisterLayout(hamiltonian.n_majorana, reuse_q_as_t=config.reuse_q_as_t)
    system = double(hamiltonian, layout, norm=config.majorana_norm)
    # prime the shared eigendecompositions before any fan-out
    system.h_l.eig, system.h_r.eig, system.v.eig
    configs = [replace(config, mu=float(mu)) for mu in mu_list]
    if threads > 1 and len(configs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            curves = list(pool.map(
                lambda cfg: run_teleportation(hamiltonian, cfg, system=system), configs
            ))
    else:
        curves = [run_teleportation(hamiltonian, cfg, system=system) for cfg in configs]
    return MuSweep(curves=curves)
