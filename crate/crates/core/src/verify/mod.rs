//! The verification engine: the registry of displayed identities, the
//! symbolic prover, the point-evaluation oracle, fiber-degree estimation and
//! partition-based field-equality checking.
//!
//! Symbolic reduction and point evaluation are two independent paths; a
//! claim is accepted only when both agree.

mod degrees;
mod equality;
mod points;
mod prover;
mod registry;
mod remarks;

pub use degrees::{
    degree_report, fiber_histogram, DegVerdict, DegreeReport, Stability, TowerLetter,
};
pub use equality::{
    partition_compare, witness_suite, Counterexample, EqVerdict, EqualityReport, GenSel,
    WitnessReport,
};
pub use points::{
    serialize_point, test_identity_points, BezoutMargin, IdentityOutcome, PointTestReport,
    SerializedPoint,
};
pub use prover::{
    prove_identity, rewrite_to_base, ElimApplication, ElimStep, ProofOutcome, ProofTrace,
    RewriteStep, Verdict,
};
pub use registry::{
    builtin_identities, catalog, identities_within_level, instantiate, CatalogEntry, IdentityId,
    IdentitySpec, ALL_IDENTITIES,
};
pub use remarks::{remark_suite, HStepRow, RefutationVerdict, RemarkReport};
