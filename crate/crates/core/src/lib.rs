//! Continuous-variable quantum key distribution with an 8-dimensional
//! spherical modulation.
//!
//! The crate covers the whole prepare / measure / reconcile / distill chain:
//!
//! * [`modulation`] samples Alice's constellation (quadruples of coherent
//!   states drawn uniformly on a 7-sphere) and computes the correlation
//!   quantities that define the Gaussian-equivalent channel.
//! * [`channel`] simulates a linear quantum channel followed by heterodyne
//!   detection, with Gaussian or non-Gaussian added noise.
//! * [`estimation`] recovers the channel parameters from disclosed samples and
//!   derives worst-case bounds.
//! * [`reconciliation`] implements reverse reconciliation with octonion
//!   rotations, syndrome-constrained LDPC decoding and Toeplitz privacy
//!   amplification.
//! * [`gaussian`] holds the covariance-matrix algebra and the Holevo bound.
//! * [`keyrate`] assembles asymptotic and finite-size secret key rates.
//! * [`pipeline`] and [`figures`] drive end-to-end runs and figure data.
//!
//! # Conventions
//!
//! All variances are in shot-noise units (SNU). A coherent state with
//! amplitude `α` has quadrature displacement `2·Re(α)`, so Alice's
//! per-quadrature modulation variance is `V_A = 2α²`. Heterodyne detection of
//! a mode with variance `b` yields per-quadrature outcomes of variance
//! `(b + 1) / 2`; a transmitted displacement `q` appears with mean
//! `sqrt(η·T/2)·q`. Key rates are reported in bits per quadrature sample
//! unless a field name says otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod error;
pub mod estimation;
pub mod figures;
pub mod gaussian;
pub mod keyrate;
pub mod modulation;
pub mod par;
pub mod pipeline;
pub mod reconciliation;
pub mod rng;

pub use error::{Error, Result};
pub use par::Execution;
