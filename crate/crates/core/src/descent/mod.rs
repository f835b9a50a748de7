//! Descent: adjoining ρ, the automorphism τ, and ρ-free extensions.

mod generic;
mod lift;
mod norm;
mod pipeline;
mod schoice;
mod tau_ring;

pub use generic::{
    build_descent_ext, build_generic_descent, default_specializations, descent_report, generic_ring, specialize,
    DescentExt, DescentReport, EpsilonReport, GenericDescentReport, SpecializationReport, TauFixedReport,
};
pub use lift::{lift_without_rho, DescentLift, RhoFreeLiftReport};
pub use norm::{norm_operator_n, norm_operator_n_prime, norm_report, NormReport};
pub use pipeline::{eigen_check, eigen_preimage, improve, EigenReport, PipelineReport, PipelineStep, Setting};
pub use schoice::{choose_s, SChoice};
pub use tau_ring::{
    adjoin_report, adjoin_rho, cyclotomic_fixed_part_is_z, in_principal_ideal, solve_multiple, AdjoinReport,
    TauEquippedRing,
};

#[cfg(test)]
mod tests;
