mod checks;
mod engine;
mod opposite;
mod params;
mod scan;
mod suite;

pub use engine::{vertex_generator, Intertwiner};
pub use opposite::{opposite_coeff, opposite_op, pairing_from_intertwiner};
pub use params::{intertwiner, vertex_descendant, IntertwinerSpec};
pub use checks::{
    check_commform, check_commutator, check_derivative, check_iterate, check_skew_and_contragredient,
    check_weak_commutativity, minimal_commutativity_order, CheckReport, Discrepancy, Mismatch, SymmetryReport,
};
pub use scan::{integrality_scan, integrality_scan_with, threads_from_env, ScanOptions, ScanReport, ScanWitness};
pub use suite::{axiom_suite, symmetry_suite, SuiteCase, SuiteOptions, SymmetryCase};
