"""Exact Pauli-string algebra, Majorana monomials and the Jordan-Wigner encoding.

A Pauli string is stored as a pair of qubit-indexed bit masks plus a power of i.
The canonical operator is

    i^phase_pow * sigma_0 x sigma_1 x ... x sigma_{n-1}

where sigma_q is I, X, Y or Z according to the (x, z) bit pair of qubit q:
(0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.  Qubit 0 is the leftmost (most
significant) tensor factor.  Equal operators compare equal.

Majorana fermions enter through the standard chain

    psi^(2k-1) = Z_1 ... Z_{k-1} X_k,    psi^(2k) = Z_1 ... Z_{k-1} Y_k

so that psi^a psi^b + psi^b psi^a = 2 delta_ab (strings used as-is; the
`syk` normalization divides every Majorana by sqrt(2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

_LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LABEL = {v: k for k, v in _LABEL_BITS.items()}


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator in canonical (Y-primitive) form."""

    n_qubits: int
    x_mask: int
    z_mask: int
    phase_pow: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask exceeds qubit count")
        if not 0 <= self.phase_pow <= 3:
            object.__setattr__(self, "phase_pow", self.phase_pow % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str, phase_pow: int = 0) -> "PauliString":
        """Build from a string like "ZXI" (qubit 0 first)."""
        x = z = 0
        for q, ch in enumerate(label):
            xb, zb = _LABEL_BITS[ch.upper()]
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z, phase_pow % 4)

    def label(self) -> str:
        bits = [
            _BITS_LABEL[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]
            for q in range(self.n_qubits)
        ]
        return "".join(bits)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return _popcount(self.x_mask | self.z_mask)

    def phase(self) -> complex:
        return 1j ** self.phase_pow

    def multiply(self, other: "PauliString") -> "PauliString":
        """Exact product self * other with the full i-power bookkeeping."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        # Work in the X^x Z^z gauge where Y carries an explicit i:
        # i^p * prod(sigma) = i^(p + |x & z|) * prod(X^x Z^z).
        pa = self.phase_pow + _popcount(self.x_mask & self.z_mask)
        pb = other.phase_pow + _popcount(other.x_mask & other.z_mask)
        # Z^za past X^xb picks up (-1) per overlapping qubit.
        swap = 2 * _popcount(self.z_mask & other.x_mask)
        x = self.x_mask ^ other.x_mask
        z = self.z_mask ^ other.z_mask
        phase = (pa + pb + swap - _popcount(x & z)) % 4
        return PauliString(self.n_qubits, x, z, phase)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return self.multiply(other)

    def dagger(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_mask, self.z_mask, (-self.phase_pow) % 4)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch")
        sym = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return sym % 2 == 0

    def pad(self, n_qubits: int) -> "PauliString":
        """Extend with identities on trailing qubits."""
        if n_qubits < self.n_qubits:
            raise ValueError("cannot shrink a Pauli string")
        return PauliString(n_qubits, self.x_mask, self.z_mask, self.phase_pow)

    def __repr__(self):
        pre = {0: "", 1: "i*", 2: "-", 3: "-i*"}[self.phase_pow]
        return f"{pre}{self.label()}"


def multiply(a: PauliString, b: PauliString) -> PauliString:
    return a.multiply(b)


def commutes(a: PauliString, b: PauliString) -> bool:
    return a.commutes_with(b)


def jw_majorana(flat_index: int, n_qubits: int) -> PauliString:
    """Jordan-Wigner Pauli string of the Majorana at 1-based chain position.

    Odd positions are X-type, even positions Y-type, with a Z tail over all
    earlier qubits.  flat_index runs over 1..2*n_qubits.
    """
    if not 1 <= flat_index <= 2 * n_qubits:
        raise ValueError(f"Majorana index {flat_index} out of range for {n_qubits} qubits")
    qubit = (flat_index - 1) // 2
    tail = (1 << qubit) - 1
    if flat_index % 2:  # X-type
        return PauliString(n_qubits, 1 << qubit, tail, 0)
    return PauliString(n_qubits, 1 << qubit, tail | (1 << qubit), 0)


@dataclass(frozen=True)
class MajoranaMonomial:
    """Ordered product of distinct Majorana operators, identified by index set."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if any(i < 1 for i in idx):
            raise ValueError("Majorana indices are 1-based")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError("indices must be strictly increasing")

    @property
    def size(self) -> int:
        return len(self.indices)

    def shares_even(self, other: "MajoranaMonomial") -> bool:
        """Even shared-index count; equals commutation for even-size monomials."""
        return len(set(self.indices) & set(other.indices)) % 2 == 0

    def to_string(self, n_qubits: int, flat_map=None) -> PauliString:
        """JW product of the constituent Majoranas, in ascending index order.

        flat_map translates a 1-based Majorana index to a chain position;
        identity when omitted (single-side layout).
        """
        out = PauliString.identity(n_qubits)
        for i in self.indices:
            flat = flat_map(i) if flat_map is not None else i
            out = out.multiply(jw_majorana(flat, n_qubits))
        return out


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit geometry of the doubled system plus the P/Q/T protocol registers.

    The 2*n_side Majoranas live on n_side shared system qubits, two per qubit,
    interleaved by pairs: qubit 0 hosts (psi_L^1, psi_L^2), qubit 1 hosts
    (psi_R^1, psi_R^2), qubit 2 hosts (psi_L^3, psi_L^4), and so on.  For odd
    n_side the last qubit hosts (psi_L^n, psi_R^n).  This pairing co-locates
    the trained fermion pair (1,2) on a single carrier qubit on each side.
    Registers sit after the system block; with reuse_q_as_t the readout
    register T is the Q register, reproducing the nine-qubit accounting.
    """

    n_side: int
    reuse_q_as_t: bool = False

    def __post_init__(self):
        if self.n_side < 1:
            raise ValueError("n_side must be positive")

    @property
    def n_system_qubits(self) -> int:
        return self.n_side

    @property
    def p_qubit(self) -> int:
        return self.n_side

    @property
    def q_qubit(self) -> int:
        return self.n_side + 1

    @property
    def t_qubit(self) -> int:
        return self.q_qubit if self.reuse_q_as_t else self.n_side + 2

    @property
    def n_qubits(self) -> int:
        return self.n_side + (2 if self.reuse_q_as_t else 3)

    def left_flat(self, j: int) -> int:
        """Chain position of psi_L^j."""
        self._check_index(j)
        if j == self.n_side and self.n_side % 2:
            return 2 * self.n_side - 1
        k = (j + 1) // 2
        return (4 * k - 3) if j % 2 else (4 * k - 2)

    def right_flat(self, j: int) -> int:
        """Chain position of psi_R^j."""
        self._check_index(j)
        if j == self.n_side and self.n_side % 2:
            return 2 * self.n_side
        k = (j + 1) // 2
        return (4 * k - 1) if j % 2 else (4 * k)

    def _check_index(self, j: int):
        if not 1 <= j <= self.n_side:
            raise ValueError(f"fermion index {j} out of range (n_side={self.n_side})")

    def left_string(self, j: int) -> PauliString:
        """psi_L^j as a Pauli string on the system block."""
        return jw_majorana(self.left_flat(j), self.n_system_qubits)

    def right_string(self, j: int) -> PauliString:
        return jw_majorana(self.right_flat(j), self.n_system_qubits)

    def monomial_string(self, mono: MajoranaMonomial, side: str = "L") -> PauliString:
        flat = self.left_flat if side == "L" else self.right_flat
        return mono.to_string(self.n_system_qubits, flat_map=flat)

    def carrier_qubit(self, pair: tuple[int, int], side: str = "L") -> int:
        """System qubit hosting both Majoranas of the pair on the given side.

        Raises ValueError when the pair is not co-located under this layout.
        """
        a, b = pair
        flat = self.left_flat if side == "L" else self.right_flat
        qa, qb = (flat(a) - 1) // 2, (flat(b) - 1) // 2
        if qa != qb:
            raise ValueError(
                f"fermion pair {pair} ({side}) is not co-located on one qubit: "
                f"qubits {qa} and {qb}"
            )
        return qa


def single_side_qubits(n_majorana: int) -> int:
    """Qubits needed to host one side's Majoranas under the plain chain."""
    return (n_majorana + 1) // 2


@dataclass(frozen=True)
class CommutativityReport:
    fully_commuting: bool
    anticommuting_pairs: tuple[tuple[MajoranaMonomial, MajoranaMonomial], ...]


def commutativity_report(hamiltonian) -> CommutativityReport:
    """Exhaustive pairwise commutation check over a Hamiltonian's terms.

    Each pair is decided on the exact JW Pauli strings of the monomials.
    """
    n_q = single_side_qubits(hamiltonian.n_majorana)
    monos = [mono for mono, _ in hamiltonian.terms]
    strings = [m.to_string(n_q) for m in monos]
    bad = tuple(
        (monos[i], monos[j])
        for i, j in combinations(range(len(monos)), 2)
        if not strings[i].commutes_with(strings[j])
    )
    return CommutativityReport(fully_commuting=not bad, anticommuting_pairs=bad)
