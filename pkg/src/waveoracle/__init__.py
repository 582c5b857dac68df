"""waveoracle: deterministic simulation of phase-encoded wave-superposition
oracles, the search algorithms they enable, and wave-phase period finding."""

from .phasor import (
    DEFAULT_TOLERANCE,
    Phasor,
    canonical_phase,
    detect,
    power,
    superpose,
    superposition_state,
    wave_from_bit,
)
from .oracle import (
    Measurement,
    OracleSpec,
    PhaseAlphabet,
    QueryCounter,
    build_binary_oracle,
    build_multivalued_oracle,
    evaluate,
    example1_oracle,
    example2_oracle,
    oracle_from_json,
    oracle_to_json,
    query,
    random_oracle,
    target_of,
)
from .search import (
    SearchResult,
    SegmentBox,
    StepRecord,
    binary_superposition_search,
    brute_force,
    margin_sweep,
    segment_search,
    step_margin,
    worst_case_margin,
)
from .periodfind import (
    ModularSequence,
    PeriodResult,
    auto_sequence,
    factor_step,
    factorize,
    find_period,
    mod_sequence,
    phase_map,
    running_phase,
)
from .dataset import (
    DatasetSearchReport,
    TabulatedOracle,
    example3_leaf_table,
    example3_segment_table,
    load_table,
    segment_search_tabulated,
    synthesize_device_table,
    tabulated_query,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCE", "Phasor", "canonical_phase", "detect", "power",
    "superpose", "superposition_state", "wave_from_bit",
    "Measurement", "OracleSpec", "PhaseAlphabet", "QueryCounter",
    "build_binary_oracle", "build_multivalued_oracle", "evaluate",
    "example1_oracle", "example2_oracle", "oracle_from_json",
    "oracle_to_json", "query", "random_oracle", "target_of",
    "SearchResult", "SegmentBox", "StepRecord",
    "binary_superposition_search", "brute_force", "margin_sweep",
    "segment_search", "step_margin", "worst_case_margin",
    "ModularSequence", "PeriodResult", "auto_sequence", "factor_step",
    "factorize", "find_period", "mod_sequence", "phase_map", "running_phase",
    "DatasetSearchReport", "TabulatedOracle", "example3_leaf_table",
    "example3_segment_table", "load_table", "segment_search_tabulated",
    "synthesize_device_table", "tabulated_query",
    "__version__",
]
