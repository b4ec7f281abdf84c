//! Numerical laboratory for a family of toric self-dual Einstein metrics.

pub mod boundary;
pub mod convergents;
pub mod curvature;
pub mod digits;
pub mod error;
pub mod field;
pub mod fit;
pub mod kernel;
pub mod linalg;
pub mod metric;
pub mod quad;
pub mod rat;
pub mod topology;
pub mod verify;

pub use boundary::BoundaryData;
pub use convergents::ConvergentTable;
pub use curvature::CurvatureReport;
pub use digits::{digits_of_rational, DigitSequence, DigitSpec};
pub use error::{Error, Result};
pub use field::{FieldSample, SyntheticMode};
pub use metric::{MetricField, MetricSample};
