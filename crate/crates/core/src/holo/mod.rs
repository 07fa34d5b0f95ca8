//! Function evaluators, Cauchy differentiation and quadrature on circles and
//! discs.

mod extrapolate;
mod func;
mod quad;

pub use extrapolate::{extrapolate_quotients, neville_at_zero, GeneratorEstimate};
pub use func::{Domain, FnKind, HoloFn};
pub use quad::{
    cauchy_derivative, circle_mean_p, default_cauchy_radius, derivative, disc_integral,
    disc_integrals, fd_derivative, GaussRule, QuadPolicy, R_CAP_SECOND,
};

use std::f64::consts::PI;

use crate::Complex;

/// Polar sample grid: `n_r` equispaced radii in `(0, radius]` plus the
/// origin, times `n_theta` equispaced angles.
pub fn polar_grid(radius: f64, n_r: usize, n_theta: usize) -> Vec<Complex> {
    let mut pts = vec![Complex::new(0.0, 0.0)];
    for i in 1..=n_r {
        let r = radius * i as f64 / n_r as f64;
        for k in 0..n_theta {
            pts.push(Complex::from_polar(r, 2.0 * PI * k as f64 / n_theta as f64));
        }
    }
    pts
}

/// Symmetric real grid with `n` points on `[-half_width, half_width]`.
pub fn real_grid(half_width: f64, n: usize) -> Vec<Complex> {
    let n = n.max(2);
    (0..n)
        .map(|i| Complex::new(-half_width + 2.0 * half_width * i as f64 / (n - 1) as f64, 0.0))
        .collect()
}

/// The standard sample set for a domain: a polar grid of radius 0.95 on
/// discs, `[-10, 10]` on the line.
pub fn standard_grid(domain: &Domain) -> Vec<Complex> {
    if domain.is_real() {
        real_grid(10.0, 41)
    } else {
        polar_grid(0.95, 5, 16)
    }
}
