//! Exact-arithmetic machinery for the Casson–Walker obstruction to
//! orientation-reversing distance-one surgeries.
//!
//! * [`numerics`]: arbitrary-precision [`Rational`] and [`Mod3Residue`].
//! * [`dedekind`]: Dedekind sums, direct and via reciprocity.
//! * [`casson_walker`]: knot and two-component link surgery formulas under
//!   an explicit [`Normalization`].
//! * [`obstruction`]: admissible surgery scenarios and their mod-3 verdicts
//!   under both normalizations.
//! * [`banding`]: chirally cosmetic banding verdicts for knots.
//! * [`selftest`]: property sweeps across all of the above.
//!
//! Nothing in this crate uses floating point.

pub mod banding;
pub mod casson_walker;
pub mod dedekind;
pub mod error;
pub mod numerics;
pub mod obstruction;
pub mod selftest;

pub use banding::{BandingVerdict, KnotDescriptor, PostErratum, PreErratum, TorusRow};
pub use casson_walker::{FramedLink2, LinkFraming, Normalization, SurgeryOnKnot};
pub use dedekind::{DedekindPair, Method};
pub use error::{Error, Result};
pub use numerics::{mod3_residue, Mod3Residue, Rational};
pub use obstruction::{Candidate, Classification, CongruenceVerdict, SurgeryScenario};
