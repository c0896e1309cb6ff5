//! Exact bounded-precision p-adic computation on rings of continuous
//! `Q_p`-valued functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: elements of `Q_p` at relative precision, rationals, the
//!   valuation, the absolute value and the Kochen operator.
//! * [`divrel`]: divisibility relations as values, sampled axiom checking,
//!   `ord` and the induced semi-norm.
//! * [`funcring`]: locally constant functions on finite spaces and on `Z_p`
//!   cut at level `k`, with the sup norm, the canonical divisibility and the
//!   point-evaluation spectrum.
//! * [`hensel`]: q-th roots of 1-units and the root criterion for the
//!   canonical divisibility.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod divrel;
pub mod error;
pub mod funcring;
pub mod hensel;
pub mod logic;
pub mod padic;
pub mod ring;
pub mod sampling;

pub use error::{Error, Result};
pub use logic::{Decision, Valuation};
pub use padic::{PAdic, Rational};
