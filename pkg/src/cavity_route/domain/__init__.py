"""领域层 - 物理模型与数值核心，不依赖任何外部框架"""

from .analytic import AmplitudeSet, AnalyticConstants, analytic_u4, analytic_u6, validate_analytic
from .models import (
    Edge,
    ExcitationState,
    HamiltonianMatrix,
    HexLatticeDescriptor,
    HexLink,
    ModeKind,
    ModeRef,
    NetworkSpec,
    Site,
    SiteRole,
    SystemParams,
)
from .network import (
    build_diamond_chain,
    build_hex_lattice,
    build_single_excitation_hamiltonian,
    build_switch,
)
from .propagator import (
    Spectrum,
    TransferTime,
    block_populations,
    eigendecompose,
    find_transfer_time,
    photon_population,
    propagate,
    site_population,
)
from .protocol import (
    BellTransfer,
    Evolve,
    PhaseFlip,
    PhaseShift,
    Schedule,
    TraceResult,
    chain_routing_schedule,
    entanglement_transfer,
    hex_routing_schedule,
    local_phase_flip,
    run_schedule,
    run_schedule_blockwise,
    switch_port_flip,
    switch_schedule,
    total_evolution_time,
)
from .subspaces import (
    BlockHamiltonian,
    OrthogonalTransform,
    block_decompose,
    chain_collective_basis,
    collective_basis,
    extract_block,
    identity_transform,
    switch_collective_basis,
)

__all__ = [
    "SystemParams",
    "SiteRole",
    "Site",
    "Edge",
    "NetworkSpec",
    "HexLink",
    "HexLatticeDescriptor",
    "HamiltonianMatrix",
    "ModeKind",
    "ModeRef",
    "ExcitationState",
    "build_diamond_chain",
    "build_switch",
    "build_hex_lattice",
    "build_single_excitation_hamiltonian",
    "OrthogonalTransform",
    "BlockHamiltonian",
    "chain_collective_basis",
    "switch_collective_basis",
    "identity_transform",
    "collective_basis",
    "block_decompose",
    "extract_block",
    "Spectrum",
    "TransferTime",
    "eigendecompose",
    "propagate",
    "photon_population",
    "site_population",
    "block_populations",
    "find_transfer_time",
    "AnalyticConstants",
    "AmplitudeSet",
    "analytic_u4",
    "analytic_u6",
    "validate_analytic",
    "Evolve",
    "PhaseFlip",
    "PhaseShift",
    "Schedule",
    "TraceResult",
    "BellTransfer",
    "local_phase_flip",
    "chain_routing_schedule",
    "switch_port_flip",
    "switch_schedule",
    "hex_routing_schedule",
    "run_schedule",
    "run_schedule_blockwise",
    "total_evolution_time",
    "entanglement_transfer",
]
