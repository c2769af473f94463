"""Exact factorial-base arithmetic and digit-power orbit dynamics."""

from .factoradic import (
    FactoradicRep,
    MalformedRepresentationError,
    add,
    digit_count,
    format,
    parse,
    shift,
    to_factoradic,
    to_natural,
)
from .dynamics import (
    Attractor,
    AttractorAtlas,
    CertificationError,
    DescentBound,
    OrbitCapError,
    OrbitReport,
    classify,
    descent_bound,
    enumerate_attractors,
    happy_step,
    happy_step_nat,
    iterate,
    smallest_j,
)
from .towers import (
    ChainNumber,
    NiceWitness,
    PaddingTooSmallError,
    ReplayError,
    SequenceCertificate,
    SizeCapError,
    WitnessError,
    additivity_check,
    build_sequence,
    certificate_to_json,
    materialize,
    nice_check,
    preimage_ones,
    replay_run,
    verify_concrete,
)
from .analysis import (
    DensityReport,
    RunRecord,
    RunSearch,
    density,
    emit_report,
    is_p_happy,
    smallest_runs,
)

__version__ = "1.0.0"
