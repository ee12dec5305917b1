//! Exact-arithmetic toolkit for one-dimensional self-similar sets.
//!
//! The crate implements the machinery needed to experiment with separation
//! conditions and dimension bounds for attractors of contracting similarity
//! systems on the line:
//!
//! - [`ifs`]: similarities, word composition, scale cuts I_b
//! - [`attractor`]: interval covers of K and K - K, point coding, difference
//!   classes
//! - [`separation`]: weak-separation checkers and minimal-gap reports
//! - [`dimension`]: similarity/box/localized dimension estimation and the
//!   twice-the-dimension check for difference sets
//! - [`cantor`]: symmetric/asymmetric Cantor constructors, common-base
//!   reduction and sign-uniform rewriting certificates
//!
//! Everything runs in one of two arithmetic modes ([`scalar::Mode`]): exact
//! rationals, the default whenever parameters are rational, or binary64.

pub mod attractor;
pub mod cantor;
pub mod dimension;
pub mod error;
pub mod ifs;
pub mod interval;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod separation;

pub use attractor::{
    cover, diff_classes, diff_cover, local_class_count, local_class_counts, point_at, DiffClass,
    LocalCountMode, PointCode,
};
pub use cantor::{
    closed_form_golden_dim, common_base, make_asymmetric, make_symmetric, rewrite_sign_uniform,
    rewrite_two_level, theoretical_eps_bound, AsymmetricParams, BlockCoeffMatrix, CoeffVector,
    TheoremFamily,
};
pub use dimension::{
    assouad_estimate, box_count, box_counts, diff_bound_check, fit_exponent, similarity_dimension,
    DiffBoundParams, DiffBoundReport, DimensionFit, FitKind, FitSample,
};
pub use error::{Error, Result};
pub use ifs::{compose, scale_cut, scale_cut_with_budget, Sign, Similarity1D, Word, IFS1D};
pub use interval::{hausdorff, Interval, IntervalSet};
pub use scalar::{Mode, Scalar};
pub use separation::{
    scan_scales, wsd_hausdorff_report, wsd_report, wsp_min_separation, Budgets, Checker,
    ScanOutcome, SeparationReport, TestPoints, Verdict, Witness,
};
