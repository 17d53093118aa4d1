"""Independent brute-force implementations used as test oracles.

Everything here is built from explicit Kronecker products, matrix
exponentials and dense partial traces, on purpose sharing no code with the
package internals it checks.
"""

import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def label_matrix(label, phase_pow=0):
    return (1j ** phase_pow) * kron_all([PAULIS[ch] for ch in label])


def chain_majoranas(n_qubits):
    """All 2*n_qubits Jordan-Wigner Majoranas as dense matrices."""
    out = []
    for k in range(n_qubits):
        tail = ["Z"] * k
        pad = ["I"] * (n_qubits - k - 1)
        out.append(kron_all([PAULIS[c] for c in tail] + [X] + [PAULIS[c] for c in pad]))
        out.append(kron_all([PAULIS[c] for c in tail] + [Y] + [PAULIS[c] for c in pad]))
    return out


def left_slot(j, n_side):
    """Chain position of psi_L^j in the pairwise-interleaved doubled layout."""
    if j == n_side and n_side % 2:
        return 2 * n_side - 1
    k = (j + 1) // 2
    return 4 * k - 3 if j % 2 else 4 * k - 2


def right_slot(j, n_side):
    if j == n_side and n_side % 2:
        return 2 * n_side
    k = (j + 1) // 2
    return 4 * k - 1 if j % 2 else 4 * k


def doubled_majoranas(n_side, scale=1.0):
    """(left[j], right[j]) matrices for j = 1..n_side on n_side qubits."""
    chain = chain_majoranas(n_side)
    left = {j: scale * chain[left_slot(j, n_side) - 1] for j in range(1, n_side + 1)}
    right = {j: scale * chain[right_slot(j, n_side) - 1] for j in range(1, n_side + 1)}
    return left, right


def hamiltonian_from_majoranas(terms, majoranas):
    dim = next(iter(majoranas.values())).shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    for indices, coeff in terms:
        m = np.eye(dim, dtype=complex)
        for i in indices:
            m = m @ majoranas[i]
        total += coeff * m
    return total


def single_side_hamiltonian(hamiltonian, norm="pauli"):
    """Dense matrix on the plain chain over ceil(N/2) qubits."""
    n_q = (hamiltonian.n_majorana + 1) // 2
    scale = 1.0 if norm == "pauli" else 1.0 / np.sqrt(2.0)
    chain = chain_majoranas(n_q)
    majoranas = {j: scale * chain[j - 1] for j in range(1, 2 * n_q + 1)}
    terms = [(m.indices, c) for m, c in hamiltonian.terms]
    return hamiltonian_from_majoranas(terms, majoranas)


def doubled_hamiltonians(hamiltonian, norm="pauli"):
    """(H_L, H_R, V_hermitian) on the shared system block."""
    n = hamiltonian.n_majorana
    scale = 1.0 if norm == "pauli" else 1.0 / np.sqrt(2.0)
    left, right = doubled_majoranas(n, scale)
    terms = [(m.indices, c) for m, c in hamiltonian.terms]
    h_l = hamiltonian_from_majoranas(terms, left)
    h_r = hamiltonian_from_majoranas(terms, right)
    v = sum(1j * left[j] @ right[j] for j in range(1, n + 1))
    return h_l, h_r, v


def vacuum_state(n_side, scale=1.0):
    """Ground state of the pair-mode number operator, phase fixed."""
    left, right = doubled_majoranas(n_side, scale)
    dim = 1 << n_side
    num = np.zeros((dim, dim), dtype=complex)
    for j in range(1, n_side + 1):
        d = 0.5 * (left[j] - 1j * right[j])
        num += d.conj().T @ d
    evals, evecs = np.linalg.eigh(num)
    vec = evecs[:, 0]
    pivot = vec[np.flatnonzero(np.abs(vec) > 1e-9 * np.abs(vec).max())[0]]
    return vec * abs(pivot) / pivot


def dm_partial_trace(rho, keep, n):
    """Reduced density matrix via explicit einsum on the density matrix."""
    keep = sorted(keep)
    drop = [q for q in range(n) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    for q in reversed(drop):
        t = np.trace(t, axis1=q, axis2=q + (t.ndim // 2))
    k = 1 << len(keep)
    return t.reshape(k, k)


def vn_entropy(rho):
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 1e-14]
    return float(-np.sum(evals * np.log(evals)))


def mutual_information_dm(rho, region_a, region_b, n):
    s_a = vn_entropy(dm_partial_trace(rho, region_a, n))
    s_b = vn_entropy(dm_partial_trace(rho, region_b, n))
    s_ab = vn_entropy(dm_partial_trace(rho, sorted(region_a + region_b), n))
    return s_a + s_b - s_ab


def series_evolve(h, vec, t, steps=20, order=4):
    """Fixed-step truncated-series propagator, independent of eigensolvers."""
    dt = t / steps
    out = vec.astype(complex)
    for _ in range(steps):
        term = out
        acc = out.copy()
        for k in range(1, order + 1):
            term = (-1j * dt / k) * (h @ term)
            acc = acc + term
        out = acc
    return out


def swap_matrix(n, q1, q2):
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    b1, b2 = n - 1 - q1, n - 1 - q2
    for col in range(dim):
        x1, x2 = (col >> b1) & 1, (col >> b2) & 1
        row = col ^ (((x1 ^ x2) << b1) | ((x1 ^ x2) << b2))
        m[row, col] = 1.0
    return m


def protocol_oracle(hamiltonian, mu, t0, t1_list, beta, norm="syk",
                    convention="half"):
    """Full density-matrix pipeline built from expm and explicit matrices.

    Registers: system block, then P, Q, T (all distinct).  Returns the
    I_PT(t1) values in nats.
    """
    n = hamiltonian.n_majorana
    h_l, h_r, v = doubled_hamiltonians(hamiltonian, norm)
    vac = vacuum_state(n)
    scale = 0.5 if convention == "half" else 1.0
    tfd = expm(-scale * beta * h_l) @ vac
    tfd = tfd / np.linalg.norm(tfd)

    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    zero = np.array([1, 0], dtype=complex)
    psi0 = np.kron(np.kron(tfd, bell), zero)
    n_tot = n + 3
    dim_regs = 8

    def lift(m):
        return np.kron(m, np.eye(dim_regs, dtype=complex))

    carrier_l, carrier_r = 0, 1  # qubits hosting (psi_L^1, psi_L^2), (psi_R^1, psi_R^2)
    swap_in = swap_matrix(n_tot, n + 1, carrier_l)
    swap_out = swap_matrix(n_tot, carrier_r, n + 2)
    u_back = lift(expm(1j * t0 * h_l))
    u_fwd = lift(expm(-1j * t0 * h_l))
    u_coup = lift(expm(1j * mu * v))
    base = u_coup @ u_fwd @ swap_in @ u_back @ psi0

    values = []
    for t1 in t1_list:
        final = swap_out @ (lift(expm(-1j * t1 * h_r)) @ base)
        rho = np.outer(final, final.conj())
        values.append(mutual_information_dm(rho, [n], [n + 2], n_tot))
    return np.array(values)


def thermal_monomial_expectations(hamiltonian, beta, norm="pauli"):
    """Single-side thermal <Gamma_A> for every left monomial index set."""
    from itertools import combinations

    h = single_side_hamiltonian(hamiltonian, norm)
    rho = expm(-beta * h)
    rho /= np.trace(rho).real
    n_q = (hamiltonian.n_majorana + 1) // 2
    scale = 1.0 if norm == "pauli" else 1.0 / np.sqrt(2.0)
    chain = chain_majoranas(n_q)
    out = {}
    for size in range(hamiltonian.n_majorana + 1):
        for idx in combinations(range(1, hamiltonian.n_majorana + 1), size):
            m = np.eye(1 << n_q, dtype=complex)
            for i in idx:
                m = m @ (scale * chain[i - 1])
            out[idx] = complex(np.trace(rho @ m))
    return out
