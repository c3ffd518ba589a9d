//! Reference implementations used only by test suites: a dense statevector
//! simulator, exhaustive logical-error-rate calculators, a brute-force
//! perfect matcher and a breakpoint-scan L1 minimizer. Everything here is
//! deliberately slow and structurally independent of the fast paths it
//! certifies.

pub mod dense;
pub mod exact;
pub mod lp;
pub mod matching;

pub use dense::DenseState;
pub use exact::{
    build_tables, classical_exhaustive_pl, classical_mc_pl, exact_code_capacity_pl,
    CodeCapacityTables,
};
pub use lp::min_l1;
pub use matching::brute_force_matching;
