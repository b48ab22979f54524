//! Simulation and verification toolkit for exchangeable coalescents with
//! multiple collisions.
//!
//! A coalescent starts from n particles; while m are present, every
//! k-subset merges at rate λ_{m,k} = ∫ x^k (1−x)^{m−k} ν(dx) for a
//! probability measure ν on (0, 1). The crate provides:
//!
//! * [`measure`] — the characteristic measure ν: sampling, tails,
//!   logarithmic moments, standing-assumption checks;
//! * [`rates`] — collision and death-chain rates with cached jump
//!   distributions, in log space;
//! * [`simulate`] — exact samplers for the collision count and absorption
//!   time, the coupled annihilator process, tagged-particle functionals,
//!   and a reproducible parallel Monte Carlo driver;
//! * [`oracle`] — exact small-n laws used as ground truth;
//! * [`limits`] — limit-regime classification, normalizing sequences, and
//!   the reference laws (normal, α-stable, Mittag-Leffler) with the
//!   statistical distances used to verify them;
//! * [`verify`] — the twelve-criterion verification suite;
//! * [`cli`] — the `lcoal` command-line front end.
//!
//! The runnable examples under `examples/` walk through each capability;
//! `lcoal verify` runs the full statistical acceptance suite.

pub mod cli;
pub mod error;
pub mod limits;
pub mod measure;
pub mod oracle;
mod quad;
pub mod rates;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use measure::CharacteristicMeasure;
pub use rates::RateTable;
