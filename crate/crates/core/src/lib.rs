//! Overlap functions between generalized cat states and their displaced copies.
//!
//! A generalized cat state superposes `n` coherent states placed uniformly on a
//! circle of radius `|α|` in phase space. This crate evaluates
//!
//! * the exact overlap `⟨cat|D(δ)|cat⟩` as a compensated double sum, its
//!   diagonal approximation, the two-component closed forms and the large-`n`
//!   Bessel limit `J₀(2|α||δ|)` ([`overlap`]);
//! * Husimi-Q and Wigner fields on phase-space grids, and the Wigner-product
//!   overlap identity ([`phasespace`]);
//! * the distinguishability frontier: the minimum `|α|` that keeps `n`
//!   components resolvable ([`distinguish`]);
//! * an independent truncated number-basis oracle used to check every analytic
//!   identity at small scale ([`fockcheck`]).
//!
//! Grid and scan workloads run on rayon when the `parallel` feature is enabled
//! (the default); results are identical, element for element, to the
//! sequential path.

pub mod distinguish;
pub mod error;
pub mod fockcheck;
pub mod overlap;
pub mod par;
pub mod phasespace;
pub mod specfun;
pub mod state;
pub mod sum;

pub use error::{Error, Result};
pub use par::Execution;
pub use state::{CatState, ComplexValue, Displacement, Normalization};
