//! Weyl sums, Gauss sums, discrete and continuous multipliers, and the
//! rational approximation tools around them.

mod diophantine;
mod gauss;
mod multiplier;
mod phase;
mod weyl;

pub use diophantine::{dirichlet, dirichlet_exhaustive, rescale_rational, RescaleCase, RescaleParams, RescaleResult};
pub use gauss::{crt_split, gauss_decay_table, gauss_max_brute, gauss_max_moment_curve, gauss_sum, GaussDecayRow};
pub use multiplier::{
    approx_error, approx_error_piece, approx_preconditions, decay_check, decay_check_piece, multiplier_for_mapping,
    multiplier_m, multiplier_m_piece, offset_from, phi, phi_piece, psi, ApproxReport, ApproxWindow, DecayFit,
    DecayKind, PieceDecayFit, PHI_TOL,
};
pub use phase::{centered_frac, e, frac_mul, frac_mul_bigint, phase_dot, root_table, CompensatedSum, RationalPoint, TorusPoint};
pub use weyl::{
    beta_alpha, log_window, weyl_log_decay_experiment, weyl_sum, BuiltPhase, FixedQuadratic, MinorArcQuadratic,
    PhaseBuilder, PhaseCoefficients, Weight, WeylDecayRow, WeylPhase, ZeroPhase,
};
