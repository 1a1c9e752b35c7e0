//! Forms on P^n, schemes cut out by forms, point enumeration and the
//! Jacobian smoothness test.

pub mod form;
pub mod monomial;
pub mod points;
pub mod scheme;
pub mod smooth;

pub use form::{parse_form, Coefficient, HomogeneousForm};
pub use monomial::{monomial_basis, monomial_count, monomial_index, Exponents};
pub use points::{closed_points_up_to, rational_points, ClosedPoint, RationalPoints};
pub use scheme::{ProjectiveScheme, SchemeFile};
pub use smooth::{divisor_smooth_at, divisor_smooth_at_chart, DivisorPoint};
