//! Numerical Dirichlet-to-Robin evolution on the unit disk and on Jordan
//! domains, built around holomorphic semiflows.
//!
//! The boundary evolution is solved in weighted composition form: extend
//! the boundary data holomorphically, integrate the semiflow generated by
//! an inward-pointing analytic vector field from each boundary node while
//! accumulating a multiplicative cocycle weight, and read the result back
//! off as a boundary signal. On the disk the Dirichlet-to-Neumann
//! semigroup has the exact Fourier multiplier `e^{-|n| t}`, which serves
//! as the ground-truth oracle throughout. Jordan domains are handled by
//! conformal transplantation: a boundary correspondence table (polynomial
//! maps, or Theodorsen iteration for star-like domains) conjugates the
//! domain flow to a disk flow.
//!
//! The main entry points:
//!
//! - [`semiflow`]: Berkson-Porta generators, adaptive flow integration,
//!   transplantation between domains, Denjoy-Wolff estimation.
//! - [`cocycle`]: exponential, coboundary, and derivative cocycles along
//!   a flow and their algebraic identities.
//! - [`conformal`]: inverse-series conformal maps, boundary tables, the
//!   periodic conjugate function, and the Theodorsen solver.
//! - [`robin`]: the Lax semigroup, the spectral oracle, the weighted
//!   composition solver, generator application, and the subordination
//!   bound.
//! - [`boundary`]: compensated radial traces and distributional boundary
//!   pairings for Bergman-class data.
//! - [`verify`]: the named end-to-end check battery used by the CLI.

pub mod boundary;
pub mod cocycle;
pub mod conformal;
pub mod error;
pub mod function;
pub mod grid;
pub mod norms;
pub mod ode;
mod parallel;
pub mod robin;
pub mod semiflow;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use function::{AnalyticFunction, Domain};
pub use grid::{BoundaryGrid, BoundarySignal};
pub use series::PowerSeries;
