//! Quantum-state fidelities and their hyperbolic-triangle geometry.
//!
//! The crate computes the Bures fidelity and the A-fidelity (quantum
//! affinity) of density matrices, the qubit forms of both in terms of
//! rapidities and the defect of a hyperbolic triangle, the six distances
//! derived from them, and runs seeded randomized experiments that check the
//! relations between these quantities.
//!
//! ```
//! use qfid::{fidelity, hyperbolic, states::{qubit_from_bloch, BlochVector}};
//!
//! let u = BlochVector::qubit(0.6, 0.0, 0.0).unwrap();
//! let v = BlochVector::qubit(0.0, 0.6, 0.0).unwrap();
//! let (a, b) = (qubit_from_bloch(&u).unwrap(), qubit_from_bloch(&v).unwrap());
//!
//! let fb = fidelity::bures_fidelity(&a, &b).unwrap();
//! let fa = fidelity::a_fidelity(&a, &b).unwrap();
//! let cos2 = hyperbolic::triangle_of(&u, &v).unwrap().cos2_half_defect();
//! assert!((fb - 0.82).abs() < 1e-12);
//! assert!((fa - fb * cos2).abs() < 1e-12);
//! ```

pub mod error;
pub mod experiments;
pub mod fidelity;
pub mod hyperbolic;
pub mod linalg;
pub mod metrics;
pub mod sampling;
pub mod states;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use metrics::MetricKind;
pub use sampling::{Measure, SamplerSpec};
pub use states::{BlochVector, DensityMatrix};
