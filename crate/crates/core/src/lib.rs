//! Probability that "the other child is a boy" in the name variant of the
//! two-children problem.
//!
//! A family with two children is known to have a girl named `n1`. Under the
//! traditional model ([`Model::A`]) both genders are equally likely for the
//! other child. Under the name-popularity model ([`Model::B`]), where a
//! second daughter cannot receive her sister's name and is named from the
//! renormalised remaining popularities, the answer
//!
//! ```text
//! p(r) = 2 / (3 + sum_{k>=2} r_k / (1 - r_k))
//! ```
//!
//! can take any value in `(0, 2/3)`.
//!
//! The crate is split into:
//!
//! - [`prob_core`]: validated popularity vectors, the 3×3 joint tables and
//!   the closed-form answers.
//! - [`extremal`]: majorization, fixed-`r1` bounds, the set of `r1` values
//!   admitting an equal-genders configuration, and the `K = 3` solution
//!   curve.
//! - [`montecarlo`]: a generative sampler for both models, seeded
//!   conditional estimation, and an exhaustive enumeration oracle.
//!
//! ```
//! use two_children::prob_core::{make_popularity, prob_other_boy_model_b};
//!
//! let r = make_popularity(&[0.4, 0.1, 0.5], false).unwrap();
//! let p = prob_other_boy_model_b(&r);
//! assert!((p - 18.0 / 37.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod extremal;
pub mod interval;
pub mod montecarlo;
pub mod prob_core;

pub use error::{Error, Result};
pub use interval::Interval;
pub use prob_core::{JointTable, Model, PopularityVector};

/// Absolute tolerance for simplex sums and majorization prefix sums.
pub const SUM_TOLERANCE: f64 = 1e-12;
