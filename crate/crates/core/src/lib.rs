// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic for positive definite binary quadratic forms: reduction,
//! class groups of imaginary quadratic orders, ideal arithmetic across
//! orders, and a class-group test for whether a form represents an integer.
//!
//! ```
//! use num_bigint::BigInt;
//! use quadrep::{decide, QuadForm};
//!
//! let d = decide(&QuadForm::new(4, 2, 7), &BigInt::from(63)).unwrap();
//! assert!(d.verdict);
//! assert_eq!(d.witness, Some((BigInt::from(0), BigInt::from(3))));
//! ```

pub mod classgroup;
pub mod decide;
pub mod decompose;
pub mod error;
pub mod forms;
pub mod intmath;
pub mod lattice;
pub mod orders;

pub use classgroup::{class_number, ClassElem, ClassGroup};
pub use decide::{
    closed_form_predicate, decide, oracle_decide, verify_example, Decider, Decision, ExampleId,
    ExampleReport, Failure, WitnessFactor,
};
pub use decompose::{decompose_order_ideal, IdealDecomposition};
pub use error::{Error, Result};
pub use forms::{QuadForm, UnimodularMap};
pub use orders::{DiscContext, OrderIdeal};
