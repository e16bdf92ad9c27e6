//! Which square matrices of positive integers are the hom-set size tables
//! of finite categories?
//!
//! This crate answers the question three ways, and the ways check each
//! other:
//!
//! - [`decide`](decide::decide) settles realizability from the matrix alone
//!   and names either a construction route or the violated condition;
//! - [`construct`](construct::construct_witness) builds an explicit witness
//!   category (a full composition table) for every realizable matrix;
//! - [`oracle`](oracle::search) exhaustively enumerates composition tables,
//!   independently confirming witnesses and refutations at small sizes.
//!
//! Matrices index hom-sets as `entry(i, j) = |hom(x_i, x_j)|`, composition
//! is `g∘f` ("f then g"), and all indices are 1-based.

pub mod category;
pub mod construct;
pub mod decide;
pub mod matrix;
pub mod oracle;
pub mod witness;

pub use category::{
    add_identities, verify, verify_semi, FinCategory, MorphId, SemiCategory, VerificationReport,
    Violation,
};
pub use construct::{
    augment_unit, construct_leinster, construct_one_unit, construct_witness, expand_reduced,
    ExtraCounts,
};
pub use decide::{check_by_submatrices, decide, Reason, Route, Verdict};
pub use matrix::{PosMatrix, Reduction};
pub use oracle::{cross_validate, search, Agreement, CrossReport, SearchConfig, SearchOutcome};
pub use witness::{parse_witness, write_witness};
