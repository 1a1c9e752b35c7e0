//! Sections mod p^2 on the fibers of an arithmetic scheme: classification of
//! points on their divisors, jet maps and their surjectivity, and exact or
//! sampled densities of sections with no singular point.

mod density;
mod jet;
mod section;

pub use density::{
    binary_form_squarefree, closed_point_profile, fiber_density_exhaustive, fiber_density_exhaustive_mod_p, fiber_density_mc, gap_log,
    medium_degree_tail_bound, serialize_rational, singular_at_point_proportion, small_degree_product,
    squarefree_form_density, DensityEstimate, EstimateMode, ProductMode, EXHAUSTIVE_BUDGET,
};
pub use jet::{
    certified_jet_degree, restriction_surjectivity, JetMode, JetTable, PointJet, SurjectivityCertificate,
};
pub use section::{
    classify_point, classify_point_at, classify_point_detailed, lift_point, ClassifiedPoint,
    PointClassification, SectionModP2,
};
