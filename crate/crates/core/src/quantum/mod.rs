//! Small-dimension density-operator calculus and probability couplings.

mod coupling;
mod gap;
mod matrix;
mod state;
mod usd;

pub use coupling::{
    independent_coupling, independent_mismatch, maximal_coupling, JointDistribution,
    MAX_COUPLING_BITS,
};
pub use gap::{interpretation_gap_report, InterpretationGapReport, SubsetGapEntry};
pub use matrix::{HermitianEigen, Matrix};
pub use state::{
    cq_distance, measure, trace_distance, CqEnsemble, DensityOperator, OutcomeDistribution, Povm,
    MAX_DIM, QUANTUM_TOL,
};
pub use usd::{
    signal_density_operators, signal_states, usd_povm, UsdMeasurement, IDENTIFY_0, IDENTIFY_1,
    INCONCLUSIVE,
};
