//! Asymmetric convex intersection testing: does the hull of a point set meet
//! an intersection of halfspaces? Answers come with checkable certificates.

pub mod acit;
pub mod error;
pub mod geometry;
pub mod nets;
pub mod oracle;
pub mod polarity;
pub mod scalar;
pub mod smalllp;

pub use acit::{
    check_certificate, solve, AcitParams, CaseTag, Certificate, CheckReport, LoopRecord, SampleRule, Solution,
    SolveStats,
};
pub use error::{Error, Result};
pub use geometry::{HPolytope, Halfspace, Hyperplane, Inequality, Point, SetClass, Side, VPolytope};
pub use oracle::{oracle_closest, oracle_decide, Decision};
pub use polarity::Validity;
pub use scalar::{Float, Mode, Rational, Scalar};
pub use smalllp::ClosestPair;
