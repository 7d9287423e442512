//! Randomized subspace iteration for low-rank SVD, with computable accuracy
//! bounds checked against an exact reference decomposition.
//!
//! ```
//! use rsvd_diag::{bounds, testmatrices::TestMatrixSpec, ReferenceSvd, SketchConfig};
//!
//! let spec = TestMatrixSpec::preset("DecayFast", 1).unwrap().with_size(60, 5);
//! let a = spec.generate().unwrap();
//! let reference = ReferenceSvd::new(&a, 5).unwrap();
//! let config = SketchConfig::new(5, 5, 1, 42);
//! let report = bounds::evaluate(&a, &reference, &config, &Default::default()).unwrap();
//! assert!(report.master_holds());
//! ```

pub mod angles;
pub mod bounds;
pub mod error;
pub mod linalg;
pub mod mtx;
pub mod norms;
pub mod sketch;
pub mod testmatrices;

pub use angles::{canonical_angles, sin_angle_norm, AngleSet};
pub use bounds::{BoundReport, OmegaSplit, ReferenceSvd};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, SvdFactors, SvdMode};
pub use norms::NormSpec;
pub use sketch::{rand_svd, ApproxSvd, SketchConfig, Variant};
pub use testmatrices::TestMatrixSpec;
