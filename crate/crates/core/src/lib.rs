//! Exact potentials and singular fields for two nearly touching circular
//! inclusions of arbitrary constant conductivity.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`geometry`] | two-disk geometry, bipolar coordinates, reflections, frame vectors |
//! | [`quadrature`] | adaptive Gauss–Kronrod integration of complex integrands |
//! | [`lerch`] | Lerch transcendent Φ(z,1,β), the derived functions L and P, asymptotics |
//! | [`series`] | bipolar series solution of the transmission problem and its perfect-conductor limit |
//! | [`singular`] | the singular function q, the decomposition residual and boundary profiles |
//! | [`cli`] | configuration parsing and the CSV/JSON writers behind the `gapfield` binary |
//!
//! ```
//! use gapfield::geometry::DiskPairGeometry;
//! use gapfield::series::{ConductivityPair, FieldSolver, HarmonicDrive};
//!
//! let g = DiskPairGeometry::new(3.0, 2.0, 0.01).unwrap();
//! let k = ConductivityPair::finite(7.0, 5.0).unwrap();
//! let solver = FieldSolver::new(&g, k, HarmonicDrive::new(1.0, 0.0), 1e-10).unwrap();
//! let sample = solver.evaluate(g.midpoint()).unwrap();
//! assert!(sample.grad.x > 1.0);
//! ```

pub mod cli;
pub mod error;
pub mod geometry;
pub mod lerch;
pub mod quadrature;
pub mod series;
pub mod singular;
pub mod stats;

pub use error::{Error, Result};
pub use num_complex::Complex64;
