//! Executable checks of the structural theorems: Minkowski inequalities,
//! the Rees identity, invariance under integral closure, and a witness that
//! multigraded limit functions can fail to be polynomial.

mod minkowski;
mod random;
mod rees;
mod suite;
mod witness;

pub use minkowski::{minkowski_report, root_sum_dominates, InequalityRecord, InequalityReport};
pub use random::{instance_rng, random_primary_ideal};
pub use rees::{converse_demo, integrality_check, rees_identity_check, ConverseDemo, DropCheck, IntegralityReport, ReesReport};
pub use suite::{cross_oracle_suite, integrality_suite, minkowski_suite, rees_suite, to_json_lines, SuiteRecord, SuiteSummary};
pub use witness::{
    non_polynomial_witness, standard_points, ClosedForms, FitCoefficient, HomogeneityCheck, WitnessPoint, WitnessReport,
    DEFAULT_HOMOGENEITY_TOLERANCE, DEFAULT_THRESHOLD,
};
