"""Quantum sorters for D-level systems incident on many input ports."""
from .multiparticle_sim import (
    ClickHistogram,
    Particle,
    SortOutcomeRecord,
    get_sorter,
    infer_input_histogram,
    sample_clicks,
    sort_deterministic,
)
from .photonic_oam import (
    DovePrism,
    PhotonicLayout,
    assemble_dove_prisms,
    build_photonic_sorter,
    build_polarization_sorter,
    dove_phase,
)
from .qudit_gates import (
    GateKind,
    GateSpec,
    controlled,
    fourier,
    pauli_x,
    pauli_z,
    port_controlled_x_dagger,
)
from .sorters import (
    CandidateMapping,
    Classification,
    SorterReport,
    attempt_perfect_sorter,
    build_mqs,
    build_mqs_via_theorem,
    build_sqs,
    classify,
)
from .tensor_core import (
    JointState,
    apply,
    assert_unitary,
    equal_up_to_global_phase,
    tensor_product,
)

__version__ = "0.1.0"
