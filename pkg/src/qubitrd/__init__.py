"""Rate-distortion toolkit for biased qubit sources.

Computes entanglement-fidelity distortion, entropy exchange, and the
entropy-distortion and rate-distortion curves of a two-level i.i.d. source,
verifies the underlying trace inequalities and block-coding bounds by
seeded Monte Carlo, and simulates the ancilla-circuit realization of the
optimal operation pair.
"""

from .errors import (
    AnnihilationError,
    CapacityError,
    ContractViolationError,
    DimensionMismatchError,
    DomainError,
    EndpointSingularityError,
    FeasibilityError,
    InternalNumericError,
    RootNotFoundError,
    ShapeError,
    ToolkitError,
)
from .quantum import (
    ChoiMatrix,
    DensityMatrix,
    KrausChannel,
    apply,
    average_entropy,
    average_pure_state_fidelity,
    binary_entropy,
    block_distortion,
    choi_entanglement_fidelity,
    coherent_information,
    distortion,
    entanglement_fidelity,
    entropy_exchange,
    marginal_channel,
    random_channel,
    random_density,
    von_neumann_entropy,
)
from .ratedistortion import (
    CurvePoint,
    KrausPair,
    SourceSpec,
    classical_hamming_baseline,
    isotropic_s1,
    r1_curve_point,
    s1_curve_point,
    solve_alpha,
    stationarity_residual,
    sweep_curve,
)
from .realization import (
    RealizationCircuit,
    StreamResult,
    build_circuit,
    measure_ancilla,
    simulate_stream,
)
from .verify import (
    VerificationReport,
    check_lemma1,
    check_lemma2,
    check_perturbation,
    check_theorem1,
    check_theorem2_blocks,
    check_theorem3_isotropic,
    random_channel_search,
    rate_curve_interpolator,
)

__version__ = "0.1.0"
