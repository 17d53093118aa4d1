"""wormlab: exact desk-scale simulations of sparse-SYK wormhole teleportation.

The package covers the full debate toolkit: the published sparse models and
random dense SYK draws, thermofield-double construction, the four-step
teleportation protocol with exact and trotterized evolution, correlator and
operator-size-winding diagnostics, gate-noise robustness runs, and an
L1-regularized Hamiltonian sparsifier.
"""

__version__ = "0.1.0"

from .pauli import (
    CommutativityReport,
    MajoranaMonomial,
    PauliString,
    RegisterLayout,
    commutativity_report,
    commutes,
    jw_majorana,
    multiply,
)
from .hilbert import (
    DensityMatrix,
    HermitianOperator,
    QuantumState,
    entropy,
    entropy_bits,
    evolve,
    ground_state,
    mutual_information,
    partial_trace,
    thermal_sqrt,
    to_matrix,
)
from .models import (
    DoubledSystem,
    MajoranaHamiltonian,
    dense_syk,
    double,
    h0_plus_h1,
    learned_h0,
    learned_h6,
    learned_n10_8term,
    perturbation_h1,
    random_commuting_variant,
)
from .tfd import FidelityScan, TfdSpec, h_tfd, paired_tfd, tfd_fidelity_scan, tfd_state
from .protocol import (
    ProtocolConfig,
    TeleportationCurve,
    mu_sweep,
    run_teleportation,
    run_trotterized,
)
from .diagnostics import (
    CorrelatorSeries,
    OtocSeries,
    WindingReport,
    coupling_size_law,
    eigenphase_action_check,
    otoc,
    size_distribution,
    two_point,
    winding_sweep,
)
from .noise import NoiseSpec, coherent_vs_incoherent_report, depolarize, noisy_protocol
from .sparsifier import SparsifyConfig, SparsifyTrace, loss, sparsify
