use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::func::{Domain, HoloFn};
use crate::{Complex, Error, Result};

/// Quadrature settings shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadPolicy {
    /// Initial angular trapezoid nodes.
    pub n_theta: usize,
    /// Radial Gauss–Legendre budget, spread over the graded radial panels.
    pub n_radial: usize,
    /// Boundary truncation radius.
    pub r_cap: f64,
    /// Relative tolerance target.
    pub tol: f64,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        QuadPolicy {
            n_theta: 256,
            n_radial: 128,
            r_cap: 1.0 - 1e-6,
            tol: 1e-8,
        }
    }
}

/// Second truncation radius used to extrapolate boundary limits.
pub const R_CAP_SECOND: f64 = 1.0 - 1e-7;

const MAX_CIRCLE_NODES: usize = 1 << 17;
const MAX_CAUCHY_NODES: usize = 4096;
const MAX_DISC_DOUBLINGS: u32 = 3;

impl QuadPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 16 {
            return Err(Error::InvalidParam(format!("n_theta = {} < 16", self.n_theta)));
        }
        if self.n_radial < 8 {
            return Err(Error::InvalidParam(format!("n_radial = {} < 8", self.n_radial)));
        }
        if !(self.r_cap > 0.0 && self.r_cap < 1.0) {
            return Err(Error::InvalidParam(format!("r_cap = {} outside (0,1)", self.r_cap)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParam(format!("tol = {} outside (0,1)", self.tol)));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> GaussRule {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Cached rule with `n ≥ 1` nodes.
    pub fn get(n: usize) -> Arc<GaussRule> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("gauss rule cache poisoned");
        guard
            .entry(n.max(1))
            .or_insert_with(|| Arc::new(GaussRule::compute(n.max(1))))
            .clone()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn unit_root(k: usize, n: usize) -> Complex {
    Complex::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Default Cauchy circle radius at `z`: a quarter of the distance to the
/// boundary, capped at 1/4.
pub fn default_cauchy_radius(domain: &Domain, z: Complex) -> f64 {
    (0.25 * domain.boundary_distance(z)).min(0.25)
}

/// `f′(z)` by the trapezoid rule applied to Cauchy's integral formula on the
/// circle `|ζ − z| = radius`, doubling nodes until consecutive estimates
/// agree to `policy.tol`.
pub fn cauchy_derivative(f: &HoloFn, z: Complex, radius: f64, policy: &QuadPolicy) -> Result<Complex> {
    if !(radius > 0.0) || f.domain().boundary_distance(z) <= radius {
        return Err(Error::DomainExit {
            z: z + radius,
            t: None,
        });
    }
    // values[k] = f(z + ρ w_k) / (ρ w_k) on n equispaced nodes
    let term = |k: usize, n: usize| -> Result<(Complex, f64)> {
        let w = unit_root(k, n);
        let v = f.eval(z + radius * w)?;
        Ok((v / (radius * w), v.norm()))
    };
    let mut n = 16;
    let mut terms: Vec<Complex> = Vec::with_capacity(2 * n);
    let mut mag = 0.0;
    for k in 0..n {
        let (t, m) = term(k, n)?;
        terms.push(t);
        mag += m;
    }
    let mut est = terms.iter().sum::<Complex>() / n as f64;
    loop {
        // Interleave the odd nodes of the doubled rule.
        let mut doubled = Vec::with_capacity(2 * n);
        for (k, &term_k) in terms.iter().enumerate().take(n) {
            doubled.push(term_k);
            let (t, m) = term(2 * k + 1, 2 * n)?;
            doubled.push(t);
            mag += m;
        }
        n *= 2;
        terms = doubled;
        let next = terms.iter().sum::<Complex>() / n as f64;
        let scale = next.norm().max(mag / n as f64 / radius);
        let delta = (next - est).norm();
        est = next;
        if delta <= policy.tol * scale {
            // Below the rounding level of the node values the estimate is
            // indistinguishable from zero.
            let noise = 16.0 * f64::EPSILON * mag / n as f64 / radius;
            return Ok(if est.norm() <= noise { Complex::new(0.0, 0.0) } else { est });
        }
        if n >= MAX_CAUCHY_NODES {
            return if delta <= 100.0 * policy.tol * scale {
                Ok(est)
            } else {
                Err(Error::NonConvergent {
                    what: "cauchy derivative",
                    delta,
                })
            };
        }
    }
}

/// Central difference with one Richardson step, for functions on real
/// domains.
pub fn fd_derivative(f: &HoloFn, x: f64) -> Result<Complex> {
    let h = 1e-3 * x.abs().max(1.0);
    let d = |h: f64| -> Result<Complex> {
        Ok((f.eval(Complex::new(x + h, 0.0))? - f.eval(Complex::new(x - h, 0.0))?) / (2.0 * h))
    };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// `f′(z)`: Cauchy quadrature on complex domains, Richardson-corrected
/// central differences on real ones.
pub fn derivative(f: &HoloFn, z: Complex, policy: &QuadPolicy) -> Result<Complex> {
    if f.domain().is_real() {
        fd_derivative(f, z.re)
    } else {
        let radius = default_cauchy_radius(&f.domain(), z);
        cauchy_derivative(f, z, radius, policy)
    }
}

/// `(1/2π)∫|f(re^{iθ})|^p dθ` by the trapezoid rule with node doubling.
pub fn circle_mean_p(f: &HoloFn, r: f64, p: f64, policy: &QuadPolicy) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParam(format!("p = {p} < 1")));
    }
    if f.domain().is_real() {
        return Err(Error::InvalidParam("circle means need a complex domain".into()));
    }
    if r < 0.0 || !f.domain().contains(Complex::new(r, 0.0)) && r > 0.0 {
        return Err(Error::DomainExit {
            z: Complex::new(r, 0.0),
            t: None,
        });
    }
    if r == 0.0 {
        return Ok(f.eval(Complex::new(0.0, 0.0))?.norm().powf(p));
    }
    let sample = |k: usize, n: usize| -> Result<f64> {
        Ok(f.eval(r * unit_root(k, n))?.norm().powf(p))
    };
    let mut n = policy.n_theta;
    let mut sum: f64 = (0..n).map(|k| sample(k, n)).sum::<Result<f64>>()?;
    loop {
        let odd: f64 = (0..n).map(|k| sample(2 * k + 1, 2 * n)).sum::<Result<f64>>()?;
        let coarse = sum / n as f64;
        sum += odd;
        n *= 2;
        let fine = sum / n as f64;
        let delta = (fine - coarse).abs();
        if delta <= policy.tol * fine.abs() {
            return Ok(fine);
        }
        if n >= MAX_CIRCLE_NODES {
            return if delta <= 100.0 * policy.tol * fine.abs() {
                Ok(fine)
            } else {
                Err(Error::NonConvergent {
                    what: "circle mean",
                    delta,
                })
            };
        }
    }
}

/// Radial panel breakpoints on `[0, r]`, graded geometrically toward 1.
fn radial_breaks(r: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    if r > 0.5 {
        b.push(0.5);
        let mut k = 2;
        loop {
            let next = 1.0 - 0.5f64.powi(k);
            if next >= r * (1.0 - 1e-12) {
                break;
            }
            b.push(next);
            k += 1;
        }
    }
    b.push(r);
    b
}

/// Per-panel integrals of `g` on the annuli between consecutive breakpoints,
/// with the given angular and per-panel radial node counts.
fn panel_sums<G>(g: &G, breaks: &[f64], n_theta: usize, n_per: usize) -> Result<Vec<f64>>
where
    G: Fn(Complex) -> Result<f64>,
{
    let rule = GaussRule::get(n_per);
    let roots: Vec<Complex> = (0..n_theta).map(|k| unit_root(k, n_theta)).collect();
    let dtheta = 2.0 * PI / n_theta as f64;
    breaks
        .windows(2)
        .map(|w| {
            let mut panel = 0.0;
            for (rho, wr) in rule.on_interval(w[0], w[1]) {
                let mut ring = 0.0;
                for &e in &roots {
                    ring += g(rho * e)?;
                }
                panel += wr * rho * ring * dtheta;
            }
            Ok(panel)
        })
        .collect()
}

/// Area integrals of `g` over the discs of radii `radii` (ascending), sharing
/// all panels. Tensor rule: graded Gauss–Legendre in the radius times the
/// trapezoid rule in the angle, with joint node doubling.
pub fn disc_integrals<G>(g: &G, radii: &[f64], policy: &QuadPolicy) -> Result<Vec<f64>>
where
    G: Fn(Complex) -> Result<f64>,
{
    let r_max = *radii
        .last()
        .ok_or_else(|| Error::InvalidParam("no radii".into()))?;
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam("radii must be ascending in (0,1)".into()));
    }
    let mut breaks = radial_breaks(r_max);
    for &r in radii {
        if !breaks.iter().any(|&b| (b - r).abs() <= 1e-15) {
            breaks.push(r);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let n_panels = breaks.len() - 1;
    let mut n_per = (policy.n_radial.div_ceil(n_panels)).max(8);
    let mut n_theta = policy.n_theta;

    let cumulative = |panels: &[f64]| -> Vec<f64> {
        radii
            .iter()
            .map(|&r| {
                breaks
                    .windows(2)
                    .zip(panels)
                    .filter(|(w, _)| w[1] <= r + 1e-15)
                    .map(|(_, p)| p)
                    .sum()
            })
            .collect()
    };

    let mut current = cumulative(&panel_sums(g, &breaks, n_theta, n_per)?);
    for doubling in 1..=MAX_DISC_DOUBLINGS {
        n_theta *= 2;
        n_per *= 2;
        let next = cumulative(&panel_sums(g, &breaks, n_theta, n_per)?);
        let delta = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs() / a.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let abs_delta = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = next;
        if delta <= policy.tol || abs_delta == 0.0 {
            return Ok(current);
        }
        if doubling == MAX_DISC_DOUBLINGS {
            return if delta <= 100.0 * policy.tol {
                Ok(current)
            } else {
                Err(Error::NonConvergent {
                    what: "disc integral",
                    delta,
                })
            };
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// `∬_{|z|<r} g dA`.
pub fn disc_integral<G>(g: &G, r: f64, policy: &QuadPolicy) -> Result<f64>
where
    G: Fn(Complex) -> Result<f64>,
{
    Ok(disc_integrals(g, &[r], policy)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holo::FnKind;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 8, 16, 33] {
            let rule = GaussRule::get(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n = {n}");
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                assert!((got - exact).abs() < 1e-13, "n = {n}, deg = {deg}");
            }
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn cauchy_derivative_examples() {
        let p = QuadPolicy::default();
        let d = cauchy_derivative(&HoloFn::monomial(2), c(0.5, 0.0), 0.3, &p).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-13);
        let d = cauchy_derivative(&HoloFn::monomial(3), c(0.0, 0.0), 0.5, &p).unwrap();
        assert!(d.norm() < 1e-15);
        let z = c(0.2, 0.1);
        let d = cauchy_derivative(&HoloFn::exp_scaled(c(1.0, 0.0)), z, 0.4, &p).unwrap();
        assert!((d - z.exp()).norm() < 1e-12);
    }

    #[test]
    fn cauchy_derivative_rejects_circle_outside_domain() {
        let p = QuadPolicy::default();
        let f = HoloFn::singular_inner();
        assert!(matches!(
            cauchy_derivative(&f, c(0.8, 0.0), 0.3, &p),
            Err(Error::DomainExit { .. })
        ));
    }

    #[test]
    fn fd_derivative_on_real_line() {
        let f = HoloFn::new("x^3", Domain::real_line(), FnKind::ClosedForm, |z| z * z * z);
        let d = fd_derivative(&f, 2.0).unwrap();
        assert!((d.re - 12.0).abs() < 1e-9);
    }

    #[test]
    fn circle_means() {
        let p = QuadPolicy::default();
        assert_eq!(circle_mean_p(&HoloFn::one(), 0.5, 2.0, &p).unwrap(), 1.0);
        let v = circle_mean_p(&HoloFn::monomial(2), 0.5, 2.0, &p).unwrap();
        assert!((v - 0.0625).abs() < 1e-15);
        let one_plus_z = HoloFn::one().add(&HoloFn::identity());
        let v = circle_mean_p(&one_plus_z, 0.5, 2.0, &p).unwrap();
        assert!((v - 1.25).abs() < 1e-14);
        assert!(circle_mean_p(&HoloFn::singular_inner(), 1.0, 2.0, &p).is_err());
    }

    #[test]
    fn disc_integral_examples() {
        let p = QuadPolicy::default();
        let r = p.r_cap;
        let area = disc_integral(&|_| Ok(1.0), r, &p).unwrap();
        assert!((area - PI * r * r).abs() < 1e-12);
        let m2 = disc_integral(&|z: Complex| Ok(z.norm_sqr()), 0.5, &p).unwrap();
        assert!((m2 - PI * 0.5f64.powi(4) / 2.0).abs() < 1e-14);
        let pair = disc_integrals(&|_| Ok(1.0), &[0.5, 0.9], &p).unwrap();
        assert!((pair[0] - PI * 0.25).abs() < 1e-13);
        assert!((pair[1] - PI * 0.81).abs() < 1e-13);
    }
}
