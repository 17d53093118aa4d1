"""Hamiltonian sparsification by L1-regularized finite-difference descent.

The candidate space is every q-body monomial over N Majoranas.  The loss is
the squared deviation of fermion-averaged two-point values (optionally plus
teleportation-signal samples) from the target's, plus an L1 penalty.
Gradients come from central finite differences; steps use a backtracking
line search and small coefficients are pruned to exactly zero each
iteration.  Everything is deterministic under the configured seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .diagnostics import two_point
from .hilbert import HermitianOperator, hamiltonian_matrix
from .models import MajoranaHamiltonian
from .pauli import MajoranaMonomial


@dataclass(frozen=True)
class SparsifyConfig:
    lambda_l1: float = 0.05
    step_size: float = 0.5
    max_iters: int = 60
    prune_threshold: float = 0.02
    fd_epsilon: float = 1e-5
    grad_tol: float = 1e-6
    max_halvings: int = 20
    reactivate: bool = True
    two_point_grid: tuple[float, ...] = tuple(0.5 * k for k in range(1, 11))
    ipt_samples: tuple[tuple[float, float], ...] = ()
    ipt_beta: float = 4.0
    ipt_t0: float = 2.8
    norm: str = "pauli"
    seed: int = 0
    init_scale: float = 0.2

    def __post_init__(self):
        if self.lambda_l1 < 0 or self.step_size <= 0 or self.max_iters < 1:
            raise ValueError("hyperparameters out of range")
        if self.prune_threshold < 0 or self.fd_epsilon <= 0:
            raise ValueError("hyperparameters out of range")
        if not self.two_point_grid and not self.ipt_samples:
            raise ValueError("at least one observable family is required")


@dataclass
class TargetData:
    n_majorana: int
    q: int
    two_point_grid: tuple[float, ...]
    two_point_values: np.ndarray
    ipt_samples: tuple[tuple[float, float], ...]
    ipt_values: np.ndarray


def candidate_monomials(n: int, q: int) -> list[MajoranaMonomial]:
    return [MajoranaMonomial(idx) for idx in combinations(range(1, n + 1), q)]


def _averaged_two_point(h: MajoranaHamiltonian, grid, norm: str) -> np.ndarray:
    """Fermion-averaged <psi^j(t) psi^j> at beta=0 over the time grid."""
    h_op = HermitianOperator(hamiltonian_matrix(h, norm=norm))
    total = np.zeros(len(grid), dtype=complex)
    for j in range(1, h.n_majorana + 1):
        series = two_point(h, j, 0.0, grid, norm=norm, h_op=h_op)
        total += series.values
    return total / h.n_majorana


def _ipt_values(h: MajoranaHamiltonian, samples, beta, t0, norm) -> np.ndarray:
    from .protocol import ProtocolConfig, run_teleportation

    out = []
    for mu, t1 in samples:
        cfg = ProtocolConfig(mu=mu, t0=t0, t1_grid=(t1,), beta=beta,
                             majorana_norm=norm)
        out.append(run_teleportation(h, cfg).i_pt_nats[0])
    return np.array(out)


def build_target_data(target: MajoranaHamiltonian, config: SparsifyConfig) -> TargetData:
    two = _averaged_two_point(target, config.two_point_grid, config.norm) \
        if config.two_point_grid else np.zeros(0, dtype=complex)
    ipt = _ipt_values(target, config.ipt_samples, config.ipt_beta,
                      config.ipt_t0, config.norm) \
        if config.ipt_samples else np.zeros(0)
    return TargetData(
        n_majorana=target.n_majorana,
        q=target.q,
        two_point_grid=config.two_point_grid,
        two_point_values=two,
        ipt_samples=config.ipt_samples,
        ipt_values=ipt,
    )


def coefficients_to_hamiltonian(coeffs: np.ndarray, n: int, q: int,
                                drop_zeros: bool = True) -> MajoranaHamiltonian:
    monos = candidate_monomials(n, q)
    terms = tuple(
        (mono, float(c)) for mono, c in zip(monos, coeffs)
        if not (drop_zeros and c == 0.0)
    )
    return MajoranaHamiltonian(n, q, terms)


def observable_loss(coeffs: np.ndarray, target: TargetData, config: SparsifyConfig) -> float:
    """Squared observable deviation, without the L1 penalty."""
    cand = coefficients_to_hamiltonian(coeffs, target.n_majorana, target.q,
                                       drop_zeros=False)
    total = 0.0
    if len(target.two_point_grid):
        values = _averaged_two_point(cand, target.two_point_grid, config.norm)
        total += float(np.sum(np.abs(values - target.two_point_values) ** 2))
    if target.ipt_samples:
        values = _ipt_values(cand, target.ipt_samples, config.ipt_beta,
                             config.ipt_t0, config.norm)
        total += float(np.sum((values - target.ipt_values) ** 2))
    return total


def loss(candidate: MajoranaHamiltonian, target: TargetData,
         config: SparsifyConfig) -> float:
    """Observable deviation plus lambda * sum |J| for a candidate Hamiltonian."""
    if candidate.n_majorana != target.n_majorana:
        raise ValueError("candidate and target must share N")
    coeffs = np.zeros(len(candidate_monomials(target.n_majorana, target.q)))
    monos = {m.indices: k for k, m in
             enumerate(candidate_monomials(target.n_majorana, target.q))}
    for mono, c in candidate.terms:
        coeffs[monos[mono.indices]] = c
    value = observable_loss(coeffs, target, config)
    return value + config.lambda_l1 * float(np.sum(np.abs(coeffs)))


def _full_loss(coeffs, target, config) -> float:
    return observable_loss(coeffs, target, config) \
        + config.lambda_l1 * float(np.sum(np.abs(coeffs)))


def fd_gradient(fun, x: np.ndarray, eps: float, mask=None) -> np.ndarray:
    """Central finite differences, coordinate by coordinate."""
    grad = np.zeros_like(x)
    for k in range(x.size):
        if mask is not None and not mask[k]:
            continue
        step = np.zeros_like(x)
        step[k] = eps
        grad[k] = (fun(x + step) - fun(x - step)) / (2.0 * eps)
    return grad


@dataclass
class SparsifyTrace:
    iterations: list[dict]
    status: str
    final: MajoranaHamiltonian
    initial_observable_loss: float
    final_observable_loss: float

    @property
    def losses(self) -> np.ndarray:
        return np.array([row["loss"] for row in self.iterations])


def _descend(fun, x, current, config, trace, start_iter, budget, frozen: bool):
    """Line-searched descent with hard pruning; frozen keeps pruned terms dead."""
    alive = x != 0.0 if frozen else np.ones(x.size, dtype=bool)
    status = "max_iters"
    it = start_iter
    for _ in range(budget):
        grad = fd_gradient(fun, x, config.fd_epsilon, mask=alive if frozen else None)
        if np.max(np.abs(grad)) < config.grad_tol:
            status = "zero-gradient"
            break
        step = config.step_size
        accepted = False
        for _ in range(config.max_halvings):
            cand = x - step * grad
            cand[np.abs(cand) < config.prune_threshold] = 0.0
            if frozen:
                cand[~alive] = 0.0
            value = fun(cand)
            if np.isfinite(value) and value < current:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            status = "stalled"
            break
        x, current = cand, value
        if frozen:
            alive &= x != 0.0
        trace.append({
            "iter": it,
            "loss": current,
            "l1": float(np.sum(np.abs(x))),
            "active_terms": int(np.count_nonzero(x)),
        })
        it += 1
    return x, current, status, it


def sparsify(target: MajoranaHamiltonian, config: SparsifyConfig,
             init_coeffs: np.ndarray | None = None) -> SparsifyTrace:
    """Projected gradient descent over all candidate monomial coefficients.

    The first phase keeps pruned coefficients at zero.  With reactivation
    enabled a second phase continues from the pruned-support optimum with
    the mask lifted, so an enabled run never ends above the frozen run.
    """
    if target.n_majorana > 10:
        raise ValueError("sparsification is desk-scale: N <= 10")
    data = build_target_data(target, config)
    monos = candidate_monomials(target.n_majorana, target.q)
    rng = np.random.default_rng(config.seed)
    if init_coeffs is None:
        x = rng.normal(0.0, config.init_scale, size=len(monos))
    else:
        x = np.asarray(init_coeffs, dtype=float).copy()
        if x.size != len(monos):
            raise ValueError("init_coeffs length mismatch")

    fun = lambda v: _full_loss(v, data, config)
    current = fun(x)
    if not np.isfinite(current):
        raise ValueError("non-finite loss at the initial point; check fd_epsilon/scales")
    initial_obs = observable_loss(x, data, config)
    trace: list[dict] = []

    x, current, status, used = _descend(
        fun, x, current, config, trace, 0, config.max_iters, frozen=True)
    if config.reactivate and used < config.max_iters:
        x, current, status, _ = _descend(
            fun, x, current, config, trace, used, config.max_iters - used,
            frozen=False)

    final = coefficients_to_hamiltonian(x, target.n_majorana, target.q)
    return SparsifyTrace(
        iterations=trace,
        status=status,
        final=final,
        initial_observable_loss=initial_obs,
        final_observable_loss=observable_loss(x, data, config),
    )
