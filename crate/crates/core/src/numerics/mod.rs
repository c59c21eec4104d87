//! Special functions and quadrature shared by the other modules.

mod bspline;
mod quadrature;
mod special;
mod tails;

pub use bspline::{bspline_eval, bspline_knots};
pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_with, integrate_with_breaks, PowerEnvelope, QuadConfig,
    QuadResult, TailEstimate, TailModel,
};
pub use special::{
    ball_volume, ball_volume_lower_bound, double_factorial, gamma_half, li_offset, li_sandwich, li_sandwich_bounds,
    log_integral, log_integral_of_log, log_integral_quad, log_integral_standard, LiConvention, SandwichCheck,
};
pub use tails::SincPolyTail;
