//! Evaluation toolkit: causal metrics, performance profiles and
//! nonparametric comparison statistics.

mod far;
mod metrics;
mod profiles;
mod special;
mod table;

pub use far::{far_test, finner_adjust, finner_posthoc, Comparison, FarReport, FinnerPosthoc};
pub use metrics::{abs_error_ate, pehe};
pub use profiles::{performance_profile, write_profile_csv, ProfileCurve, ProfilePoint, PROFILE_EPSILON};
pub use special::{chi2_sf, norm_sf};
pub use table::MetricsTable;
