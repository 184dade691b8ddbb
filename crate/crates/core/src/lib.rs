//! Exact computations with divided powers of level `m`.
//!
//! The modules build on one another:
//!
//! * [`arith`]: prime levels, coefficient rings and the universal lift;
//! * [`series`] and [`mpd`]: truncated power series and the divided-power
//!   algebras `P_{(m)}` with their substitutions;
//! * [`linalg`]: canonical spans, kernels and presented modules over `Z/p^N`,
//!   `F_q` and `F_p(λ)`;
//! * [`formal_group`]: the additive, multiplicative and Legendre laws;
//! * [`complex`]: the cosimplicial complexes, their relations, differentials
//!   and filtrations;
//! * [`invariant`]: closed invariant forms, their Hodge filtration and the
//!   Legendre rank scan;
//! * [`poincare`]: filtered exactness of the linearized complex.
//!
//! ```
//! use pdcalc::arith::{Assignment, BaseRing, PrimeLevel};
//! use pdcalc::invariant::{closed_invariant_forms, GroupSpec, InvariantSetup};
//!
//! # fn main() -> pdcalc::Result<()> {
//! let z4 = BaseRing::zmod(2, 2)?;
//! let setup = InvariantSetup::new(GroupSpec::Multiplicative, PrimeLevel::new(2, 1)?, z4, Assignment::new(), 4)?;
//! let forms = closed_invariant_forms(&setup)?;
//! assert_eq!(forms.fil_step(2).unwrap().generators[0].text, "2 * s^{2}");
//! # Ok(())
//! # }
//! ```

pub mod arith;
pub mod complex;
pub mod error;
pub mod formal_group;
pub mod invariant;
pub mod linalg;
pub mod mpd;
pub mod poincare;
pub mod series;

pub use error::{Error, Result};
