//! Exact verification of q-analogues of Wilson's theorem and of the Mordell
//! and Chowla congruences in the residue ring `Z[q]/([p]_q)`.

pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod polymod;
pub mod qnumber;
pub mod quadratic;
mod serde_bigint;

pub use error::{Error, Result};
pub use polymod::{reduce, RawPoly, ResiduePoly};
pub mod report;
pub mod theorems;

pub use qnumber::{half_product, q_integer, wilson_product, ProductStrategy};
pub use report::{CheckRecord, CheckStatus, OutputFormat, VerificationReport};
pub use theorems::{run_range, run_range_with, verify_prime, RunOptions, Target};
