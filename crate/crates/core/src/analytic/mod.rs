//! Closed-form and semi-analytic solutions.

pub mod cases;
pub mod diffusion;
pub mod pendulum;
pub mod special;

pub use cases::{
    case_a_pl, case_a_relaxation, case_b_minimum, case_b_pl, case_b_tail, case_c_pl, case_c_relaxation, Case,
    CaseAForm, CaseSpec, ShiftReading,
};
pub use diffusion::{
    equilibrium_pl, ground_population, halfline_distribution, halfline_population, halfline_populations, moments,
    moments_large, short_time_pl, walk_probability,
};
pub use pendulum::{pendulum_solve, pendulum_solve_rates};
pub use special::{bessel_i_scaled, bessel_i_scaled_seq, erfi, erfi_scaled};
