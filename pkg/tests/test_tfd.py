"""TFD construction, the coupled Hamiltonian and fidelity scans."""

import numpy as np
import pytest
from scipy.linalg import expm

import oracles
from wormlab import models
from wormlab.hilbert import HermitianOperator, apply_pauli, ground_state, partial_trace
from wormlab.pauli import MajoranaMonomial
from wormlab.tfd import (
    FidelityScan,
    TfdSpec,
    h_tfd,
    log_beta_grid,
    paired_tfd,
    tfd_fidelity_scan,
    tfd_state,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        TfdSpec(-1.0)
    with pytest.raises(ValueError):
        TfdSpec(1.0, convention="exp")
    assert TfdSpec(2.0).weight_scale == 0.5
    assert TfdSpec(2.0, "paper_literal").weight_scale == 1.0


def test_beta_zero_left_reduction_is_maximally_mixed():
    system = models.double(models.learned_h0())
    state = tfd_state(system, TfdSpec(0.0))
    assert np.max(np.abs(state.vector - system.tfd0.vector)) < 1e-12
    expectations = oracles.thermal_monomial_expectations(models.learned_h0(), 0.0)
    got = _left_monomial_expectations(system, state)
    for idx, want in expectations.items():
        assert abs(got[idx] - want) < 1e-9


def _left_monomial_expectations(system, state):
    from itertools import combinations

    layout = system.layout
    out = {}
    for size in range(layout.n_side + 1):
        for idx in combinations(range(1, layout.n_side + 1), size):
            string = layout.monomial_string(MajoranaMonomial(idx), side="L")
            vec = apply_pauli(string.pad(layout.n_system_qubits), state.vector)
            out[idx] = complex(np.vdot(state.vector, vec))
    return out


def test_half_convention_reduction_is_thermal():
    h0 = models.learned_h0()
    system = models.double(h0)
    for beta in (0.5, 4.0):
        state = tfd_state(system, TfdSpec(beta, "half"))
        got = _left_monomial_expectations(system, state)
        want = oracles.thermal_monomial_expectations(h0, beta)
        worst = max(abs(got[idx] - want[idx]) for idx in want)
        assert worst < 1e-9


def test_paper_literal_equals_half_at_double_beta():
    system = models.double(models.learned_h0())
    lit = tfd_state(system, TfdSpec(2.0, "paper_literal"))
    half = tfd_state(system, TfdSpec(4.0, "half"))
    assert abs(abs(np.vdot(lit.vector, half.vector)) - 1.0) < 1e-12


def test_low_temperature_limit_paired_tfd():
    rng = np.random.default_rng(21)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = HermitianOperator(m + m.conj().T)
    state = paired_tfd(h, 50.0)
    _, gs = ground_state(h)
    product = np.kron(gs.vector, gs.vector.conj())
    fidelity = abs(np.vdot(product, state.vector)) ** 2
    assert fidelity > 1 - 1e-6


def test_low_temperature_limit_doubled_system():
    # beta -> infinity projects TFD_0 onto the ground sector of H_L
    system = models.double(models.dense_syk(6, seed=8))
    state = tfd_state(system, TfdSpec(60.0))
    evals, evecs = system.h_l.eig
    ground = evals < evals[0] + 1e-9
    proj = evecs[:, ground] @ (evecs[:, ground].conj().T @ system.tfd0.vector)
    proj /= np.linalg.norm(proj)
    assert abs(abs(np.vdot(proj, state.vector)) - 1.0) < 1e-6


def test_tfd_independent_construction_agrees():
    h0 = models.learned_h0()
    system = models.double(h0)
    state = tfd_state(system, TfdSpec(3.0))
    h_l, _, _ = oracles.doubled_hamiltonians(h0)
    want = expm(-1.5 * h_l) @ oracles.vacuum_state(7)
    want /= np.linalg.norm(want)
    assert abs(abs(np.vdot(want, state.vector)) - 1.0) < 1e-9


def test_paired_tfd_reduction():
    rng = np.random.default_rng(22)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = HermitianOperator(m + m.conj().T)
    state = paired_tfd(h, 1.0)
    rho = partial_trace(state, [0, 1]).matrix
    want = expm(-h.matrix)
    want /= np.trace(want)
    assert np.max(np.abs(rho - want)) < 1e-10


def test_h_tfd():
    system = models.double(models.learned_h0())
    decoupled = h_tfd(system, 0.0)
    want = system.h_l.matrix + system.h_r.matrix
    assert np.array_equal(decoupled.matrix, want)
    coupled = h_tfd(system, -12.0)
    assert np.linalg.norm(coupled.matrix - coupled.matrix.conj().T) < 1e-12
    h_l, h_r, v = oracles.doubled_hamiltonians(models.learned_h0())
    oracle_spec = np.linalg.eigvalsh(h_l + h_r - 12.0 * v)
    got_spec, _ = coupled.eig
    assert np.max(np.abs(got_spec - oracle_spec)) < 1e-10


def test_fidelity_scan_learned_h0():
    system = models.double(models.learned_h0())
    scan = tfd_fidelity_scan(system, -12.0, log_beta_grid())
    assert np.all(scan.fidelities >= 0.0) and np.all(scan.fidelities <= 1.0 + 1e-12)
    assert scan.fidelity_max > 0.9
    assert scan.beta_star == scan.betas[np.argmax(scan.fidelities)]


def test_fidelity_scan_decoupled_matches_direct():
    system = models.double(models.learned_h0())
    betas = [0.5, 2.0, 8.0]
    scan = tfd_fidelity_scan(system, 0.0, betas)
    h_l, h_r, _ = oracles.doubled_hamiltonians(models.learned_h0())
    evals, evecs = np.linalg.eigh(h_l + h_r)
    gs = evecs[:, 0]
    for beta, fid in zip(scan.betas, scan.fidelities):
        want_state = expm(-beta / 2 * h_l) @ oracles.vacuum_state(7)
        want_state /= np.linalg.norm(want_state)
        assert abs(fid - abs(np.vdot(want_state, gs)) ** 2) < 1e-9


def test_fidelity_scan_tie_break_and_validation():
    system = models.double(models.learned_h0())
    with pytest.raises(ValueError):
        tfd_fidelity_scan(system, -12.0, [])
    scan = tfd_fidelity_scan(system, -12.0, [1.0, 1.0])
    assert scan.beta_star == 1.0
