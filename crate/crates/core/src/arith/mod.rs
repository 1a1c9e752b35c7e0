//! Integer sections over Spec Z: coefficient boxes and their reductions,
//! multi-fiber density experiments, and monic polynomials (heights,
//! discriminants, Dedekind's criterion, maximal-order densities).

pub mod bsw;
pub mod monic;
pub mod section;

pub use bsw::{
    bsw_exhaustive, bsw_experiment, bsw_experiment_with, dedekind_agreement, euler_product_reference, height_ball_sample,
    AgreementReport, BswConfig, BswReport, VerdictHistogram, DEFAULT_CROSS_CHECK_BOUND,
};
pub use monic::{
    bareiss_determinant, dedekind_p_maximal, maximality_scan, sylvester_resultant, MaximalityVerdict,
    MonicPoly, Verdict,
};
pub use section::{
    equidistribution_audit, multi_fiber_experiment, restrict_mod, BoxBound, EquidistributionAudit,
    IntegerSection, LocalFactor, MultiFiberReport,
};
