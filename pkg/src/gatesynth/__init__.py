"""gatesynth: decompose unitary matrices into low-cost quantum gate
sequences with a group-leaders search over integer-string genotypes."""

from .circuit import (
    AngleGrid,
    DecodedGate,
    GateSet,
    GateSetEntry,
    Gene,
    MalformedGenotypeError,
    SearchSpace,
    TableParseError,
    circuit_cost,
    circuit_unitary,
    decode,
    gate_cost,
    parse_table,
    render_table,
)
from .gates import (
    ELEMENTARY_GATES,
    ElementaryGate,
    LocalPlacement,
    build_multi_control,
    build_single_control,
    embed_in_register,
    single_gate_matrix,
)
from .gloa import IterationStats, OptimizerParams, RunResult, run
from .linalg import dagger, identity, is_unitary, kron, mat_mul, trace
from .objective import (
    EvaluationResult,
    Evaluator,
    ObjectiveWeights,
    correctness,
    evaluate,
    objective,
)
from .targets import (
    MatrixFileError,
    TargetSpec,
    grover_diffusion,
    load_matrix_file,
    qft,
    save_matrix_file,
    teleport_sender,
    toffoli,
)

__version__ = "0.1.0"
