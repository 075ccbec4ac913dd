//! Exact arithmetic kernel: the field tower F_p ⊂ F_ell ⊂ F_{ell^k}, the
//! Kummer and additive-affine solvers, and sparse polynomial / formal
//! fraction algebra with fraction-free Euclidean reduction.

mod densepoly;
mod field;
mod poly;
mod ratexpr;

pub use field::{Element, FieldCtx, SIZE_CAP};
pub use poly::{
    euclid_reduce, EuclidReduction, Monomial, SerializedPoly, SparsePoly, Var, VarClass,
};
pub use ratexpr::{clear_denominators, DenomFactor, RatExpr};
