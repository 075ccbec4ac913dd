//! Exact-computation workbench for the recursive function-field towers over
//! cubic finite fields: constructs the coupled relation systems behind the
//! towers, enumerates their rational points, proves the defining identities
//! symbolically, and measures extension degrees and field equalities on
//! enumerated points.

pub mod algebra;
pub mod error;
pub mod report;
pub mod towers;
pub mod verify;

pub use algebra::{Element, FieldCtx, RatExpr, SparsePoly, Var, VarClass};
pub use error::{Error, Result};
pub use towers::{CountReport, Model, TowerPoint, TowerSpec};
pub use verify::{
    DegreeReport, EqualityReport, IdentityId, IdentitySpec, ProofTrace, Verdict, WitnessReport,
};
