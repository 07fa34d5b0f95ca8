//! Multiplicative semicocycles `m_t` over a semiflow: integral cocycles,
//! semicoboundaries, the derivative cocycle, and growth diagnostics.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::flows::Semiflow;
use crate::holo::{derivative, extrapolate_quotients, Domain, FnKind, GaussRule, GeneratorEstimate, HoloFn, QuadPolicy};
use crate::{Complex, Error, Result};

/// Radius around a declared zero inside which the removable-singularity
/// extension is used instead of the quotient.
pub const ZERO_GUARD: f64 = 1e-3;
const EXTENSION_NODES: usize = 64;
const ZERO_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
const OVERFLOW_GUARD: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CocycleProvenance {
    Explicit { label: String },
    Integral { g: String, nodes: usize },
    Multiplication { g: String },
    Coboundary { omega: String, orders: Vec<(Complex, u32)> },
    Derivative,
}

type CocycleFn = dyn Fn(f64, Complex) -> Result<Complex> + Send + Sync;

/// A semicocycle `(m_t)_{t≥0}`.
#[derive(Clone)]
pub struct Semicocycle {
    provenance: CocycleProvenance,
    domain: Domain,
    eval: Arc<CocycleFn>,
    mdot0: Option<HoloFn>,
    closed_form: bool,
}

impl fmt::Debug for Semicocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semicocycle")
            .field("provenance", &self.provenance)
            .field("domain", &self.domain)
            .finish()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!("time {t} must be finite and >= 0")))
    }
}

impl Semicocycle {
    /// `m ≡ 1`.
    pub fn one() -> Self {
        Semicocycle {
            provenance: CocycleProvenance::Explicit { label: "1".into() },
            domain: Domain::Plane,
            eval: Arc::new(|_, _| Ok(Complex::new(1.0, 0.0))),
            mdot0: Some(HoloFn::zero()),
            closed_form: true,
        }
    }

    /// A cocycle from a closed-form evaluator `(t, z) ↦ m_t(z)`, with its
    /// derivative at `t = 0` when known.
    pub fn explicit<F>(label: impl Into<String>, domain: Domain, mdot0: Option<HoloFn>, f: F) -> Self
    where
        F: Fn(f64, Complex) -> Complex + Send + Sync + 'static,
    {
        Semicocycle {
            provenance: CocycleProvenance::Explicit { label: label.into() },
            domain,
            eval: Arc::new(move |t, z| Ok(f(t, z))),
            mdot0,
            closed_form: true,
        }
    }

    /// `m_t = e^{t·g}`, a semicocycle for the identity flow.
    pub fn multiplication(g: HoloFn) -> Self {
        let gg = g.clone();
        Semicocycle {
            provenance: CocycleProvenance::Multiplication { g: g.label().to_string() },
            domain: g.domain(),
            eval: Arc::new(move |t, z| Ok((t * gg.eval(z)?).exp())),
            mdot0: Some(g),
            closed_form: true,
        }
    }

    /// The derivative cocycle `m_t = φ_t′`.
    pub fn derivative_of(phi: &Semiflow, policy: &QuadPolicy) -> Self {
        let (flow, policy) = (phi.clone(), *policy);
        Semicocycle {
            provenance: CocycleProvenance::Derivative,
            domain: phi.domain(),
            eval: Arc::new(move |t, z| flow.space_derivative(t, z, &policy)),
            mdot0: phi.generator_prime().cloned(),
            closed_form: phi.is_closed_form(),
        }
    }

    pub fn provenance(&self) -> &CocycleProvenance {
        &self.provenance
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn label(&self) -> String {
        match &self.provenance {
            CocycleProvenance::Explicit { label } => label.clone(),
            CocycleProvenance::Integral { g, .. } => format!("integral[{g}]"),
            CocycleProvenance::Multiplication { g } => format!("exp(t*{g})"),
            CocycleProvenance::Coboundary { omega, .. } => format!("coboundary[{omega}]"),
            CocycleProvenance::Derivative => "derivative".into(),
        }
    }

    /// True when `m_t(z)` is evaluated without quadrature.
    pub fn is_closed_form(&self) -> bool {
        self.closed_form
    }

    /// `ṁ₀` in closed form when the constructor knows it.
    pub fn mdot0_fn(&self) -> Option<&HoloFn> {
        self.mdot0.as_ref()
    }

    pub fn eval(&self, t: f64, z: Complex) -> Result<Complex> {
        check_time(t)?;
        if !self.domain.contains(z) {
            return Err(Error::DomainExit { z, t: Some(t) });
        }
        let w = (self.eval)(t, z)?;
        if w.re.is_finite() && w.im.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFinite { z })
        }
    }

    /// `m_t` as a function.
    pub fn at_time(&self, t: f64) -> HoloFn {
        let m = self.clone();
        HoloFn::try_new(format!("m_{t}"), self.domain, FnKind::Composite, move |z| m.eval(t, z))
    }
}

/// Number of Gauss–Legendre nodes for a time integral over `[0, t]`.
pub fn time_nodes(t: f64) -> usize {
    (32.0 * t.max(1.0)).ceil() as usize
}

/// `∫₀ᵗ g(φ_s(z)) ds` with `n` and `2n` nodes along one trajectory.
fn time_integral(g: &HoloFn, phi: &Semiflow, t: f64, z: Complex, tol: f64) -> Result<Complex> {
    if t == 0.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let n = time_nodes(t);
    let (coarse, fine) = (GaussRule::get(n), GaussRule::get(2 * n));
    let mut times: Vec<(f64, f64, bool)> = coarse
        .on_interval(0.0, t)
        .map(|(s, w)| (s, w, false))
        .chain(fine.on_interval(0.0, t).map(|(s, w)| (s, w, true)))
        .collect();
    times.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ts: Vec<f64> = times.iter().map(|x| x.0).collect();
    let path = phi.eval_path(&ts, z)?;
    let (mut i_coarse, mut i_fine) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    for (&(_, w, is_fine), &u) in times.iter().zip(&path) {
        let v = w * g.eval(u)?;
        if is_fine {
            i_fine += v;
        } else {
            i_coarse += v;
        }
    }
    let delta = (i_fine - i_coarse).norm();
    if delta > 100.0 * tol * i_fine.norm().max(1.0) {
        return Err(Error::NonConvergent {
            what: "time integral",
            delta,
        });
    }
    Ok(i_fine)
}

/// `m_t(z) = exp(∫₀ᵗ g(φ_s(z)) ds)`.
pub fn cocycle_from_g(g: HoloFn, phi: &Semiflow, policy: &QuadPolicy) -> Semicocycle {
    let (gg, flow, tol) = (g.clone(), phi.clone(), policy.tol);
    Semicocycle {
        provenance: CocycleProvenance::Integral {
            g: g.label().to_string(),
            nodes: 32,
        },
        domain: phi.domain(),
        eval: Arc::new(move |t, z| Ok(time_integral(&gg, &flow, t, z, tol)?.exp())),
        mdot0: Some(g),
        closed_form: false,
    }
}

/// Value at `z` of the holomorphic extension of `q` across `b`, from the
/// Cauchy integral over the circle of radius `2·ZERO_GUARD` about `b`.
fn cauchy_extension<F>(q: &F, b: Complex, z: Complex) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let rho = 2.0 * ZERO_GUARD;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 0..EXTENSION_NODES {
        let e = Complex::from_polar(1.0, 2.0 * PI * k as f64 / EXTENSION_NODES as f64);
        let zeta = b + rho * e;
        acc += q(zeta)? * rho * e / (zeta - z);
    }
    Ok(acc / EXTENSION_NODES as f64)
}

/// Evaluates `q` away from the zeros, `exact(b)` at a zero and the Cauchy
/// extension in the guard disc (on real domains, the quotient itself).
fn with_removable<F, E>(q: &F, exact: &E, zeros: &[(Complex, u32)], domain: Domain, z: Complex) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
    E: Fn(Complex, u32) -> Result<Complex>,
{
    for &(b, ord) in zeros {
        let d = (z - b).norm();
        if d == 0.0 {
            return exact(b, ord);
        }
        if d < ZERO_GUARD && !domain.is_real() {
            return cauchy_extension(q, b, z);
        }
    }
    q(z)
}

fn validate_zeros(omega: &HoloFn, phi: &Semiflow, orders: &[(Complex, u32)]) -> Result<()> {
    for &(b, ord) in orders {
        if ord == 0 {
            return Err(Error::InvalidParam(format!("declared zero {b} has order 0")));
        }
        let w = omega.eval(b)?;
        if w.norm() > 1e-10 {
            return Err(Error::InvalidParam(format!("omega({b}) = {w} is not zero")));
        }
        let mut drift = 0.0f64;
        for &t in &ZERO_TIMES {
            drift = drift.max((phi.eval(t, b)? - b).norm());
        }
        if drift > 1e-8 {
            return Err(Error::ZeroNotFixed { zero: b, drift });
        }
    }
    Ok(())
}

/// Semicoboundary `m_t(z) = ω(φ_t(z))/ω(z)`, extended by `φ_t′(b)^{ord}` at
/// each declared zero `b` of `ω`.
pub fn coboundary(omega: HoloFn, phi: &Semiflow, orders: &[(Complex, u32)], policy: &QuadPolicy) -> Result<Semicocycle> {
    validate_zeros(&omega, phi, orders)?;
    let domain = phi.domain();
    let (w, flow, zeros, pol) = (omega.clone(), phi.clone(), orders.to_vec(), *policy);
    let eval = move |t: f64, z: Complex| -> Result<Complex> {
        let q = |u: Complex| Ok(w.eval(flow.eval(t, u)?)? / w.eval(u)?);
        let exact = |b: Complex, ord: u32| Ok(flow.space_derivative(t, b, &pol)?.powu(ord));
        with_removable(&q, &exact, &zeros, domain, z)
    };
    if !domain.is_real() {
        // The extension at each zero must match the derivative power.
        for &(b, ord) in orders {
            let q = |u: Complex| Ok(omega.eval(phi.eval(1.0, u)?)? / omega.eval(u)?);
            let limit = cauchy_extension(&q, b, b)?;
            let power = phi.space_derivative(1.0, b, policy)?.powu(ord);
            if (limit - power).norm() > 1e-6 * power.norm().max(1.0) {
                return Err(Error::OrderMismatch {
                    zero: b,
                    quotient: limit,
                    power,
                });
            }
        }
    }
    let mdot0 = phi
        .generator_prime()
        .map(|_| coboundary_exponent(&omega, phi.generator(), phi.generator_prime(), orders, policy));
    Ok(Semicocycle {
        provenance: CocycleProvenance::Coboundary {
            omega: omega.label().to_string(),
            orders: orders.to_vec(),
        },
        domain,
        eval: Arc::new(eval),
        mdot0,
        closed_form: phi.is_closed_form(),
    })
}

/// `g_{ω,G} = G·ω′/ω`, extended by `ord·G′(b)` at each declared zero.
pub fn coboundary_exponent(
    omega: &HoloFn,
    g: &HoloFn,
    gprime: Option<&HoloFn>,
    orders: &[(Complex, u32)],
    policy: &QuadPolicy,
) -> HoloFn {
    let (w, gg, gp, zeros, pol) = (omega.clone(), g.clone(), gprime.cloned(), orders.to_vec(), *policy);
    let domain = omega.domain();
    let label = format!("G*({})'/({})", omega.label(), omega.label());
    HoloFn::try_new(label, domain, FnKind::Composite, move |z| {
        let q = |u: Complex| Ok(gg.eval(u)? * derivative(&w, u, &pol)? / w.eval(u)?);
        let exact = |b: Complex, ord: u32| {
            let d = match &gp {
                Some(gp) => gp.eval(b)?,
                None => derivative(&gg, b, &pol)?,
            };
            Ok(ord as f64 * d)
        };
        with_removable(&q, &exact, &zeros, domain, z)
    })
}

/// `max |m_{t+s}(z) − m_t(z)·m_s(φ_t(z))|` and `max |m_0(z) − 1|`.
pub fn cocycle_law_residual(m: &Semicocycle, phi: &Semiflow, ts: &[f64], grid: &[Complex]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in grid {
        worst = worst.max((m.eval(0.0, z)? - 1.0).norm());
        for &t in ts {
            let mt = m.eval(t, z)?;
            let zt = phi.eval(t, z)?;
            for &s in ts {
                let lhs = m.eval(t + s, z)?;
                worst = worst.max((lhs - mt * m.eval(s, zt)?).norm());
            }
        }
    }
    Ok(worst)
}

/// Right derivative of `t ↦ m_t(z)` at zero.
pub fn mdot0(m: &Semicocycle, z: Complex, steps: &[f64]) -> Result<GeneratorEstimate> {
    let quotients = steps
        .iter()
        .map(|&h| Ok((m.eval(h, z)? - 1.0) / h))
        .collect::<Result<Vec<_>>>()?;
    extrapolate_quotients(steps, &quotients)
}

/// Admissibility of a coboundary representation at one fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub point: Complex,
    /// `g(b)/G′(b)`.
    pub ratio: Complex,
    pub nearest_order: u32,
    pub distance: f64,
    pub admissible: bool,
}

/// Checks `g(b)/G′(b) ∈ ℕ₀` at each fixed point.
pub fn coboundary_admissibility(
    g: &HoloFn,
    gprime_flow: &HoloFn,
    fixed_points: &[Complex],
    tol: f64,
) -> Result<Vec<Admissibility>> {
    fixed_points
        .iter()
        .map(|&b| {
            let d = gprime_flow.eval(b)?;
            if d.norm() < tol {
                return Err(Error::Degenerate(format!("G'({b}) = {d} vanishes")));
            }
            let ratio = g.eval(b)? / d;
            let nearest_order = ratio.re.round().max(0.0) as u32;
            let distance = (ratio - nearest_order as f64).norm();
            Ok(Admissibility {
                point: b,
                ratio,
                nearest_order,
                distance,
                admissible: distance < tol,
            })
        })
        .collect()
}

/// Exponential envelope `M·e^{ωt}` of the sampled sup-norms of `m_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub m_const: f64,
    pub omega: f64,
    /// Least-squares slope of `log sup|m_t|` against `t`.
    pub ls_omega: f64,
    pub samples: Vec<(f64, f64)>,
}

impl GrowthFit {
    pub fn envelope(&self, t: f64) -> f64 {
        self.m_const * (self.omega * t).exp()
    }
}

/// Sample grid for growth fits: radii accumulating at `r_cap` on the disc,
/// `[-50, 50]` on the line.
pub fn growth_grid(domain: Domain, policy: &QuadPolicy) -> Vec<Complex> {
    if domain.is_real() {
        return crate::holo::real_grid(50.0, 201);
    }
    let mut radii = vec![0.0, 0.25, 0.5, 0.75, 0.9];
    let mut k = 2;
    while 1.0 - 10f64.powi(-k) < policy.r_cap {
        radii.push(1.0 - 10f64.powi(-k));
        k += 1;
    }
    radii.push(policy.r_cap);
    let mut pts = vec![Complex::new(0.0, 0.0)];
    for &r in &radii[1..] {
        for j in 0..64 {
            pts.push(Complex::from_polar(r, 2.0 * PI * j as f64 / 64.0));
        }
    }
    pts
}

/// Envelope anchored at `M = max(1, sup|m_0|)` with the smallest `ω` that
/// dominates every sample.
pub fn growth_fit(m: &Semicocycle, ts: &[f64], grid: &[Complex]) -> Result<GrowthFit> {
    if ts.is_empty() {
        return Err(Error::InvalidParam("growth fit needs at least one time".into()));
    }
    let mut samples = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut s = 0.0f64;
        for &z in grid {
            let v = match m.eval(t, z) {
                Ok(v) => v.norm(),
                Err(Error::NonFinite { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            s = s.max(v);
        }
        if !(s < OVERFLOW_GUARD) {
            return Err(Error::UnboundedSignal { value: s });
        }
        samples.push((t, s));
    }
    let m0 = samples.iter().filter(|x| x.0 == 0.0).map(|x| x.1).fold(1.0, f64::max);
    let omega = samples
        .iter()
        .filter(|x| x.0 > 0.0)
        .map(|&(t, s)| (s.ln() - m0.ln()) / t)
        .fold(f64::NEG_INFINITY, f64::max);
    let omega = if omega.is_finite() { omega } else { 0.0 };
    let ls_omega = least_squares_slope(&samples);
    Ok(GrowthFit {
        m_const: m0,
        omega,
        ls_omega,
        samples,
    })
}

fn least_squares_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().filter(|x| x.1 > 0.0).map(|&(t, s)| (t, s.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
