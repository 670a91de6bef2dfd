//! Exact, exhaustive checks of the degree calculus of elliptic-curve
//! endomorphisms over small prime fields.
//!
//! * [`field`]: 𝔽_p and 𝔽_{p²} arithmetic, Legendre symbols, primality.
//! * [`poly`]: dense polynomials over 𝔽_p and the height H(Q₁, …, Q_k).
//! * [`curve`]: the point group of y² = x³ + ax + b and the Frobenius action.
//! * [`isogeny`]: x-maps, the sum/product triple and the parallelogram law.
//! * [`hasse`]: point counts, traces, the degree form and the Hasse bound.
//! * [`zagier`]: the character sum of x³ − 35x + 98.
//! * [`cli`]: the `isogeny-lab` command-line front end.

pub mod cli;
pub mod curve;
pub mod error;
pub mod field;
pub mod hasse;
pub mod isogeny;
pub mod poly;
pub mod zagier;

pub use curve::{Curve, Point};
pub use error::{Error, Result};
pub use field::{Extension, FieldElement, PrimeModulus};
pub use hasse::CountReport;
pub use isogeny::{TripleQ, XMap};
pub use poly::{Degree, Poly};
pub use zagier::ZagierRecord;
