//! Semiflows: closed-form catalog entries and flows reconstructed from a
//! generator by integrating `u′ = G(u)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::holo::{derivative, extrapolate_quotients, Domain, FnKind, GeneratorEstimate, HoloFn, QuadPolicy};
use crate::{Complex, Error, Result};

/// Step control for the Runge–Kutta reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdeCfg {
    pub h0: f64,
    pub tol_step: f64,
    pub exit_margin: f64,
}

impl Default for OdeCfg {
    fn default() -> Self {
        OdeCfg {
            h0: 1e-3,
            tol_step: 1e-10,
            exit_margin: 1e-9,
        }
    }
}

impl OdeCfg {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h0", self.h0), ("tol_step", self.tol_step), ("exit_margin", self.exit_margin)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParam(format!("ode {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

const MIN_STEP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FlowProvenance {
    Catalog { name: String, params: BTreeMap<String, f64> },
    Ode { generator: String, cfg: OdeCfg },
}

type MapFn = dyn Fn(f64, Complex) -> Complex + Send + Sync;

#[derive(Clone)]
enum Inner {
    Closed { map: Arc<MapFn>, dmap: Arc<MapFn> },
    Ode { g: HoloFn, cfg: OdeCfg },
}

/// A semiflow `(φ_t)_{t≥0}` on a domain.
#[derive(Clone)]
pub struct Semiflow {
    domain: Domain,
    provenance: FlowProvenance,
    generator: HoloFn,
    generator_prime: Option<HoloFn>,
    trivial: bool,
    inner: Inner,
}

impl fmt::Debug for Semiflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semiflow")
            .field("domain", &self.domain)
            .field("provenance", &self.provenance)
            .field("generator", &self.generator.label())
            .finish()
    }
}

fn closed<F, D>(map: F, dmap: D) -> Inner
where
    F: Fn(f64, Complex) -> Complex + Send + Sync + 'static,
    D: Fn(f64, Complex) -> Complex + Send + Sync + 'static,
{
    Inner::Closed {
        map: Arc::new(map),
        dmap: Arc::new(dmap),
    }
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> Result<f64> {
    let v = params.get(key).copied().unwrap_or(default);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParam(format!("parameter {key} must be finite")))
    }
}

/// Names accepted by [`make_catalog_semiflow`].
pub const CATALOG: [&str; 6] = ["dilation", "attracting", "rotation", "translation-real", "cubic-real", "identity"];

/// Builds a closed-form semiflow.
///
/// * `dilation` (`c`, `c_im`; default `c = 1`): `e^{−ct}z` on the disc, `Re c ≥ 0`
/// * `attracting`: `e^{−t}z + 1 − e^{−t}` on the disc
/// * `rotation` (`rate`, default 1): `e^{i·rate·t}z` on the disc
/// * `translation-real`: `x + t` on the line
/// * `cubic-real`: `(x^{1/3} + t/3)³` on the line
/// * `identity`: `z` on the disc
pub fn make_catalog_semiflow(name: &str, params: &BTreeMap<String, f64>) -> Result<Semiflow> {
    let allowed: &[&str] = match name {
        "dilation" => &["c", "c_im"],
        "rotation" => &["rate"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParam(format!("flow {name} has no parameter {k}")));
    }
    let real = |f: fn(Complex) -> Complex, label: &str| HoloFn::new(label, Domain::real_line(), FnKind::ClosedForm, f);
    let (domain, generator, generator_prime, inner, trivial) = match name {
        "dilation" => {
            let c = Complex::new(param(params, "c", 1.0)?, param(params, "c_im", 0.0)?);
            if c.re < 0.0 {
                return Err(Error::InvalidParam(format!("dilation needs Re c >= 0, got {c}")));
            }
            let g = HoloFn::new(format!("-({c})*z"), Domain::Plane, FnKind::ClosedForm, move |z| -c * z);
            let gp = HoloFn::constant(-c);
            let inner = closed(move |t, z| (-c * t).exp() * z, move |t, _| (-c * t).exp());
            (Domain::UnitDisc, g, Some(gp), inner, c == Complex::new(0.0, 0.0))
        }
        "attracting" => {
            let g = HoloFn::new("1-z", Domain::Plane, FnKind::ClosedForm, |z| 1.0 - z);
            let gp = HoloFn::constant(Complex::new(-1.0, 0.0));
            let inner = closed(
                |t, z| {
                    let e = (-t).exp();
                    e * z + (1.0 - e)
                },
                |t, _| Complex::new((-t).exp(), 0.0),
            );
            (Domain::UnitDisc, g, Some(gp), inner, false)
        }
        "rotation" => {
            let rate = param(params, "rate", 1.0)?;
            let w = Complex::new(0.0, rate);
            let g = HoloFn::new(format!("{w}*z"), Domain::Plane, FnKind::ClosedForm, move |z| w * z);
            let gp = HoloFn::constant(w);
            let inner = closed(move |t, z| (w * t).exp() * z, move |t, _| (w * t).exp());
            (Domain::UnitDisc, g, Some(gp), inner, rate == 0.0)
        }
        "translation-real" => {
            let g = real(|_| Complex::new(1.0, 0.0), "1");
            let gp = real(|_| Complex::new(0.0, 0.0), "0");
            let inner = closed(|t, x| x + t, |_, _| Complex::new(1.0, 0.0));
            (Domain::real_line(), g, Some(gp), inner, false)
        }
        "cubic-real" => {
            let g = real(|x| Complex::new(x.re.cbrt().powi(2), 0.0), "x^(2/3)");
            let gp = real(|x| Complex::new(2.0 / (3.0 * x.re.cbrt()), 0.0), "(2/3)x^(-1/3)");
            let inner = closed(
                |t, x| Complex::new((x.re.cbrt() + t / 3.0).powi(3), 0.0),
                |t, x| {
                    let c = x.re.cbrt();
                    Complex::new(((c + t / 3.0) / c).powi(2), 0.0)
                },
            );
            (Domain::real_line(), g, Some(gp), inner, false)
        }
        "identity" => {
            let inner = closed(|_, z| z, |_, _| Complex::new(1.0, 0.0));
            (Domain::UnitDisc, HoloFn::zero(), Some(HoloFn::zero()), inner, true)
        }
        other => return Err(Error::UnknownCatalogEntry(other.to_string())),
    };
    Ok(Semiflow {
        domain,
        provenance: FlowProvenance::Catalog {
            name: name.to_string(),
            params: params.clone(),
        },
        generator: generator.with_domain(domain),
        generator_prime: generator_prime.map(|g| g.with_domain(domain)),
        trivial,
        inner,
    })
}

/// Semiflow obtained by integrating `u′ = G(u), u(0) = z` on the domain of
/// `G` with step-doubling RK4.
pub fn semiflow_from_generator(g: HoloFn, cfg: OdeCfg) -> Result<Semiflow> {
    cfg.validate()?;
    Ok(Semiflow {
        domain: g.domain(),
        provenance: FlowProvenance::Ode {
            generator: g.label().to_string(),
            cfg,
        },
        trivial: false,
        generator_prime: None,
        generator: g.clone(),
        inner: Inner::Ode { g, cfg },
    })
}

fn rk4(g: &HoloFn, y: Complex, h: f64) -> Result<Complex> {
    let k1 = g.eval(y)?;
    let k2 = g.eval(y + 0.5 * h * k1)?;
    let k3 = g.eval(y + 0.5 * h * k2)?;
    let k4 = g.eval(y + h * k3)?;
    Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Integrates from `z` through the sorted times `ts`, returning the state at
/// each.
fn integrate(g: &HoloFn, cfg: &OdeCfg, domain: Domain, z: Complex, ts: &[f64]) -> Result<Vec<Complex>> {
    let mut out = Vec::with_capacity(ts.len());
    let (mut t, mut y, mut h) = (0.0f64, z, cfg.h0);
    let escaped = |y: Complex| domain.boundary_distance(y) < cfg.exit_margin;
    if escaped(y) {
        return Err(Error::EscapedDomain { tau: 0.0 });
    }
    for &target in ts {
        while t < target {
            let step = h.min(target - t);
            let attempt = rk4(g, y, step).and_then(|full| {
                let half = rk4(g, rk4(g, y, 0.5 * step)?, 0.5 * step)?;
                Ok((full, half))
            });
            let (accept, next, err) = match attempt {
                Ok((full, half)) => {
                    let err = (half - full).norm() / 15.0;
                    let ok = err <= cfg.tol_step * half.norm().max(1.0) && !escaped(half);
                    (ok, half, err)
                }
                // A stage outside the domain: retry with a smaller step.
                Err(Error::DomainExit { .. } | Error::NonFinite { .. }) => (false, y, f64::INFINITY),
                Err(e) => return Err(e),
            };
            if accept {
                y = next;
                t = if step == target - t { target } else { t + step };
                if err < cfg.tol_step / 64.0 && step == h {
                    h *= 2.0;
                }
            } else {
                h = step / 2.0;
                if h < MIN_STEP {
                    return if domain.boundary_distance(y) < 1e3 * cfg.exit_margin.max(MIN_STEP) {
                        Err(Error::EscapedDomain { tau: t })
                    } else {
                        Err(Error::StepUnderflow { t })
                    };
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

impl Semiflow {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn provenance(&self) -> &FlowProvenance {
        &self.provenance
    }

    pub fn label(&self) -> String {
        match &self.provenance {
            FlowProvenance::Catalog { name, params } if params.is_empty() => name.clone(),
            FlowProvenance::Catalog { name, params } => {
                let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{name}({})", ps.join(","))
            }
            FlowProvenance::Ode { generator, .. } => format!("ode[{generator}]"),
        }
    }

    /// The generator `G`; for catalog flows the closed form.
    pub fn generator(&self) -> &HoloFn {
        &self.generator
    }

    /// Closed-form `G′` when known.
    pub fn generator_prime(&self) -> Option<&HoloFn> {
        self.generator_prime.as_ref()
    }

    /// True for flows with `G ≡ 0`.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.inner, Inner::Closed { .. })
    }

    fn check(&self, t: f64, z: Complex) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParam(format!("time {t} must be finite and >= 0")));
        }
        if !self.domain.contains(z) {
            return Err(Error::DomainExit { z, t: Some(t) });
        }
        Ok(())
    }

    pub fn eval(&self, t: f64, z: Complex) -> Result<Complex> {
        self.check(t, z)?;
        match &self.inner {
            Inner::Closed { map, .. } => Ok(map(t, z)),
            Inner::Ode { g, cfg } => Ok(integrate(g, cfg, self.domain, z, &[t])?[0]),
        }
    }

    /// `φ_t(z)` for every `t` in `ts` (nondecreasing), from one trajectory.
    pub fn eval_path(&self, ts: &[f64], z: Complex) -> Result<Vec<Complex>> {
        if ts.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParam("times must be nondecreasing".into()));
        }
        for &t in ts {
            self.check(t, z)?;
        }
        match &self.inner {
            Inner::Closed { map, .. } => Ok(ts.iter().map(|&t| map(t, z)).collect()),
            Inner::Ode { g, cfg } => integrate(g, cfg, self.domain, z, ts),
        }
    }

    /// `φ_t` as a function on the flow domain.
    pub fn at_time(&self, t: f64) -> HoloFn {
        let flow = self.clone();
        HoloFn::try_new(format!("phi_{t}"), self.domain, FnKind::Composite, move |z| flow.eval(t, z))
    }

    /// `φ_t′(z)`: closed form for catalog flows, numerical otherwise.
    pub fn space_derivative(&self, t: f64, z: Complex, policy: &QuadPolicy) -> Result<Complex> {
        self.check(t, z)?;
        match &self.inner {
            Inner::Closed { dmap, .. } => {
                let d = dmap(t, z);
                if d.re.is_finite() && d.im.is_finite() {
                    Ok(d)
                } else {
                    Err(Error::NonFinite { z })
                }
            }
            Inner::Ode { .. } => derivative(&self.at_time(t), z, policy),
        }
    }
}

/// `max |φ_{t+s}(z) − φ_t(φ_s(z))|` and `max |φ_0(z) − z|` over the samples.
pub fn semiflow_law_residual(phi: &Semiflow, ts: &[f64], grid: &[Complex]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in grid {
        worst = worst.max((phi.eval(0.0, z)? - z).norm());
        for &s in ts {
            let zs = phi.eval(s, z)?;
            for &t in ts {
                let lhs = phi.eval(t + s, z)?;
                let rhs = phi.eval(t, zs)?;
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    Ok(worst)
}

/// Default steps for one-sided difference quotients at `t = 0`.
pub const DEFAULT_FD_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Right derivative of `t ↦ φ_t(z)` at zero.
pub fn generator_fd(phi: &Semiflow, z: Complex, steps: &[f64]) -> Result<GeneratorEstimate> {
    let path = phi.eval_path(&steps.iter().rev().copied().collect::<Vec<_>>(), z)?;
    let quotients: Vec<Complex> = steps
        .iter()
        .zip(path.iter().rev())
        .map(|(&h, &w)| (w - z) / h)
        .collect();
    extrapolate_quotients(steps, &quotients)
}

/// Zeros of the generator that are verified fixed points, plus the ones that
/// failed the `φ_t(b) = b` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub points: Vec<Complex>,
    /// Zeros of `G` that move under the flow.
    pub rejected: Vec<Complex>,
    /// `G ≡ 0` on the grid: every point is fixed.
    pub trivial: bool,
}

const FIX_TIMES: [f64; 3] = [0.1, 0.5, 1.0];
const FIX_TOL: f64 = 1e-8;
const FIX_MARGIN: f64 = 1e-6;

/// Zeros of `G` found by Newton iteration from each grid seed, verified
/// against the flow.
pub fn fixed_points(phi: &Semiflow, g: &HoloFn, grid: &[Complex], policy: &QuadPolicy) -> Result<FixedPoints> {
    let domain = phi.domain();
    let mut all_zero = true;
    for &z in grid {
        if g.eval(z)?.norm() > 1e-14 {
            all_zero = false;
            break;
        }
    }
    if all_zero {
        return Ok(FixedPoints {
            points: Vec::new(),
            rejected: Vec::new(),
            trivial: true,
        });
    }
    let mut zeros: Vec<Complex> = Vec::new();
    for &seed in grid {
        let mut z = seed;
        let mut found = None;
        for _ in 0..80 {
            let gz = match g.eval(z) {
                Ok(v) => v,
                Err(_) => break,
            };
            if gz.norm() < 1e-14 {
                found = Some(z);
                break;
            }
            let d = match derivative(g, z, policy) {
                Ok(d) if d.norm() > 0.0 => d,
                _ => break,
            };
            let next = z - gz / d;
            if !domain.contains(next) {
                break;
            }
            z = next;
        }
        // Zeros on the boundary (up to rounding) are not points of the domain.
        if let Some(b) = found.filter(|b| domain.boundary_distance(*b) > FIX_MARGIN) {
            if !zeros.iter().any(|w| (w - b).norm() < 1e-8) {
                zeros.push(b);
            }
        }
    }
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let (mut points, mut rejected) = (Vec::new(), Vec::new());
    for b in zeros {
        let mut drift = 0.0f64;
        for &t in &FIX_TIMES {
            drift = drift.max((phi.eval(t, b)? - b).norm());
        }
        if drift < FIX_TOL {
            points.push(b);
        } else {
            rejected.push(b);
        }
    }
    Ok(FixedPoints {
        points,
        rejected,
        trivial: false,
    })
}

/// `max |G(φ_t(z)) − φ_t′(z)·G(z)|` with `φ_t′` from numerical
/// differentiation of `φ_t`.
pub fn chain_rule_residual(
    phi: &Semiflow,
    g: &HoloFn,
    ts: &[f64],
    grid: &[Complex],
    policy: &QuadPolicy,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in ts {
        let phi_t = phi.at_time(t);
        for &z in grid {
            let dphi = derivative(&phi_t, z, policy)?;
            let lhs = g.eval(phi.eval(t, z)?)?;
            worst = worst.max((lhs - dphi * g.eval(z)?).norm());
        }
    }
    Ok(worst)
}
