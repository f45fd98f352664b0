//! Growth of subharmonic functions in the unit disc: Riesz measures, Carleson box masses,
//! kernel representations and integral means.

pub mod classical;
pub mod error;
pub mod evaluators;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod means;
pub mod measures;
mod par;
pub mod quadrature;
mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use evaluators::{
    boundary_term, canonical_integral, eval_representation, log_mod_blaschke, ClosedForm,
    PreparedSpec, SubharmonicSpec,
};
pub use classical::{
    boundary_lp_norm, i_mean, j_sum, linden_region_count, psi_r, stolz_count_phi,
    vm_smoothed_condition, BoundaryFunctionSample, JSum,
};
pub use fit::{fit_exponent, GrowthFit};
pub use means::{circle_mean_mp, max_on_circle, rho_estimate};
pub use geometry::{pseudo_distance, region_contains, DiscPoint, RegionSpec};
pub use kernels::{gamma, kernel_k, kernel_ks, kernel_pq_sq, log_primary_factor};
pub use measures::{
    box_mass, box_mass_integral, build_complete_measure, counting_n, counting_nu, lemma1_check,
    BoundaryAtom, BoxIntegralMode, CompleteMeasure, DensityPiece, DiscAtom, DiscMeasure,
    Lemma1Outcome, MassKind, MeasureDocument, PeriodicMeasure, Zero, ZeroSequence,
};
pub use verify::{
    example1_lower_bound_check, example2_logmod, gen_example1, verify_box_vs_means,
    verify_growth_sufficiency, verify_stolz, Direction, DyadicRange, VerificationReport,
};
