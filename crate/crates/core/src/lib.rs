//! Counting and computing the automorphisms `σ` of P¹ for which two subspaces
//! `V_a`, `V_b` of binary forms of degree `d` satisfy
//! `dim(V_a + V_b^σ) ≤ c + 1`.
//!
//! Three independent routes are provided: exact enumeration on structured
//! instances ([`structured`]), homotopy continuation on general instances
//! ([`numeric`]), and torus localization of the Porteous class ([`bott`]).

pub mod bott;
pub mod error;
pub mod forms;
pub mod instance;
pub mod linalg;
pub mod mpoly;
pub mod numeric;
pub mod pairing;
pub mod scalar;
pub mod structured;
mod upoly;
pub mod wronskian;

pub use error::{Error, Result};
pub use forms::{
    act, act_subspace, sum_dim, sym_power_matrix, BinaryForm, Mat2, P1Point, ProjTransform,
    Subspace,
};
pub use instance::{generate_instance, CaseTag, Instance};
pub use scalar::Rational;
