//! Photon-number statistics and higher-order antibunching (HOA) criteria
//! for intermediate quantum states of light.
//!
//! The crate builds the photon-number distributions of seven intermediate
//! states (binomial, generalized binomial, reciprocal binomial, negative
//! binomial, geometric, photon-added coherent and hypergeometric), computes
//! their factorial moments, evaluates the HOA criteria
//! `d(l) = ⟨N^(l+1)⟩ − ⟨N⟩^(l+1)`, `A_l` and `R(l, m)`, and checks the
//! analytic `d(l)` expressions against direct summation.
//!
//! ```
//! use hoa::{closedform, criteria, states};
//!
//! let pnd = states::build_binomial(0.5, 10).unwrap();
//! let d = criteria::d_criterion(&pnd, 1);
//! assert!((d + 2.5).abs() < 1e-12);
//! assert!((closedform::d_bs_closed(0.5, 10, 1).unwrap() - d).abs() < 1e-12);
//! ```

pub mod cli;
pub mod closedform;
pub mod criteria;
pub mod error;
pub mod format;
pub mod moments;
pub mod montecarlo;
pub mod numerics;
pub mod states;

pub use error::{Error, Result};
pub use states::{Pnd, StateSpec};
