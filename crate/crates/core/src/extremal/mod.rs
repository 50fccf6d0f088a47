//! Lipschitz-ratio objectives for functions of noncommuting operators:
//! subdivision and path constructions, direct-sum witnesses, support masks,
//! seeded families and the search/sweep harness.

mod family;
mod instance;
pub mod io;
mod mask;
mod search;
mod witness;

pub use family::{
    family_function, family_instance, family_operators, hermitian_degree, seeded_family, seeded_kinds, support_indices,
    triple_degree, unitary_degree, FamilyKind,
};
pub use instance::{
    increment_norm, lipschitz_ratio, subdivide_select, unitary_path, InstanceFunction, Mode, NormMode, Operators,
    RatioInstance, SubdivisionStep,
};
pub use mask::{kappa_lambda, Kappa, SupportMask};
pub use search::{
    assemble, cell_seed, fit_line, growth_sweep, reference_exponent, search_cells, search_extremal, BestRow,
    CellOutcome, ExperimentRecord, MonitorVerdict, SearchConfig, SeededRatio, SlopeFit, TrialRecord, MONITOR_THRESHOLD,
};
pub use witness::{block_witness, synthetic_blocks, witness_blocks, BlockSummary, WitnessReport};
