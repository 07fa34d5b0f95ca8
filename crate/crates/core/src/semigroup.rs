//! Weighted composition semigroups `C(t)f = m_t·(f∘φ_t)`: operator-norm
//! brackets, generator diagnostics and continuity probes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cocycles::Semicocycle;
use crate::flows::Semiflow;
use crate::holo::{
    derivative, extrapolate_quotients, polar_grid, real_grid, Domain, FnKind, GaussRule, HoloFn, QuadPolicy,
};
use crate::spaces::{sup_disc, sup_line, SeminormIndex, SpaceKind, SpaceSpec, Weight, DEFAULT_NORM_CAP, DEFAULT_TOL_CONV};
use crate::{Complex, Error, Result};

/// Entry cap for the per-node caches of `m_t` and `φ_t`.
const MEMO_CAPACITY: usize = 1 << 20;

/// Half-width of the real window used for sup-type quantities on the line.
const LINE_HALF_WIDTH: f64 = 50.0;
const LINE_POINTS: usize = 2001;

/// The semigroup `C_{m,φ}` on a space.
#[derive(Debug, Clone)]
pub struct WcSemigroup {
    pub phi: Semiflow,
    pub m: Semicocycle,
    pub space: SpaceSpec,
}

impl WcSemigroup {
    pub fn new(phi: Semiflow, m: Semicocycle, space: SpaceSpec) -> Result<Self> {
        if phi.domain().is_real() != space.domain().is_real() {
            return Err(Error::InvalidParam(format!(
                "flow on {} does not act on {}",
                phi.domain(),
                space.label()
            )));
        }
        Ok(WcSemigroup { phi, m, space })
    }

    pub fn label(&self) -> String {
        format!("C[{}, {}] on {}", self.m.label(), self.phi.label(), self.space.label())
    }

    /// `C(t)f = m_t·(f∘φ_t)` on the space domain.
    pub fn apply(&self, t: f64, f: &HoloFn) -> Result<HoloFn> {
        Ok(self.operator(t)?.apply(f))
    }

    /// `C(t)` as a reusable operator. Factors without a closed form are
    /// cached per node, so applying it to a whole test set evaluates them
    /// once.
    pub fn operator(&self, t: f64) -> Result<Operator> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParam(format!("time {t} must be finite and >= 0")));
        }
        let share = |h: HoloFn, closed: bool| if closed { h } else { h.memoized(MEMO_CAPACITY) };
        Ok(Operator {
            t,
            domain: self.space.domain(),
            m_t: share(self.m.at_time(t), self.m.is_closed_form()),
            phi_t: share(self.phi.at_time(t), self.phi.is_closed_form()),
        })
    }

    /// Samples of the space domain used for pointwise checks.
    pub fn sample_grid(&self) -> Vec<Complex> {
        if self.space.domain().is_real() {
            real_grid(10.0, 41)
        } else {
            polar_grid(0.95, 5, 16)
        }
    }
}

/// `C(t)` for one fixed `t`.
#[derive(Debug, Clone)]
pub struct Operator {
    t: f64,
    domain: Domain,
    m_t: HoloFn,
    phi_t: HoloFn,
}

impl Operator {
    pub fn apply(&self, f: &HoloFn) -> HoloFn {
        if self.t == 0.0 {
            return f.clone();
        }
        let (phi, m, g) = (self.phi_t.clone(), self.m_t.clone(), f.clone());
        HoloFn::try_new(
            format!("C({}){}", self.t, f.label()),
            self.domain,
            FnKind::Composite,
            move |z| Ok(m.eval(z)? * g.eval(phi.eval(z)?)?),
        )
    }
}

fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// Real-line test corpus for `𝒞v(ℝ)`.
pub fn real_testset() -> Vec<HoloFn> {
    let line = Domain::real_line();
    let mk = |label: &str, f: fn(Complex) -> Complex| HoloFn::new(label, line, FnKind::ClosedForm, f);
    vec![
        mk("1", |_| c(1.0)),
        mk("x", |x| x),
        mk("x^2", |x| x * x),
        mk("1/(1+x^2)", |x| 1.0 / (1.0 + x * x)),
        mk("exp(-x^2)", |x| (-x * x).exp()),
        mk("cos(x)", |x| x.cos()),
        mk("exp(x/2)", |x| (0.5 * x).exp()),
    ]
}

/// Default test functions for operator-norm witnesses: monomials `e_0…e_8`,
/// kernels `1/(1 − conj(a)z)`, and the singular inner function where the
/// space contains `H^∞`.
pub fn default_testset(space: &SpaceSpec) -> Vec<HoloFn> {
    if space.domain().is_real() {
        return real_testset();
    }
    let mut out: Vec<HoloFn> = (0..=8).map(HoloFn::monomial).collect();
    for a in [Complex::new(0.5, 0.0), Complex::new(0.0, 0.7), Complex::new(-0.9, 0.0), Complex::new(0.6, -0.6)] {
        out.push(HoloFn::kernel(a));
    }
    let bloch = matches!(space.kind, SpaceKind::BlochWeighted { .. });
    if space.contains_h_infinity() && !bloch {
        out.push(HoloFn::singular_inner());
    }
    out
}

/// Smaller fixed set for pointwise law checks.
pub fn law_testset(space: &SpaceSpec) -> Vec<HoloFn> {
    if space.domain().is_real() {
        let all = real_testset();
        return vec![all[0].clone(), all[1].clone(), all[4].clone()];
    }
    vec![
        HoloFn::one(),
        HoloFn::identity(),
        HoloFn::monomial(3),
        HoloFn::kernel(Complex::new(0.5, 0.3)),
    ]
}

/// `max |C(t+s)f(z) − C(t)C(s)f(z)|` over the grid and the law test set.
pub fn semigroup_residual(sg: &WcSemigroup, t: f64, s: f64, grid: &[Complex]) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in law_testset(&sg.space) {
        let lhs = sg.apply(t + s, &f)?;
        let rhs = sg.apply(t, &sg.apply(s, &f)?)?;
        for &z in grid {
            worst = worst.max((lhs.eval(z)? - rhs.eval(z)?).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    Hardy,
    Bergman,
    Dirichlet,
    Bloch,
    Supweight,
}

/// Bracket for `‖C(t)‖`: formula value above, test-function witness below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub t: f64,
    pub theoretical: f64,
    pub empirical_lower: Option<f64>,
    pub formula_tag: FormulaTag,
    /// Named factors entering the formula.
    pub components: BTreeMap<String, f64>,
}

impl BoundResult {
    /// `empirical_lower ≤ theoretical·(1 + slack)`; vacuous without a witness.
    pub fn dominates(&self, slack: f64) -> bool {
        self.empirical_lower.is_none_or(|e| e <= self.theoretical * (1.0 + slack))
    }
}

/// Grid sup of `|h|` over the space domain (disc up to `r_cap`, or the line
/// window).
fn sup_over_domain<F>(space: &SpaceSpec, h: &F) -> Result<f64>
where
    F: Fn(Complex) -> Result<f64>,
{
    if space.domain().is_real() {
        Ok(sup_line(h, LINE_HALF_WIDTH, LINE_POINTS)?.value)
    } else {
        Ok(sup_disc(h, space.policy.r_cap, space.policy.n_theta)?.value)
    }
}

/// `Some(|m_t|)` when `m_t` is constant on the sample grid.
fn constant_modulus(sg: &WcSemigroup, t: f64) -> Result<Option<Complex>> {
    let grid = sg.sample_grid();
    let m0 = sg.m.eval(t, grid[0])?;
    for &z in &grid[1..] {
        if (sg.m.eval(t, z)? - m0).norm() > 1e-14 * m0.norm().max(1.0) {
            return Ok(None);
        }
    }
    Ok(Some(m0))
}

fn m_sup(sg: &WcSemigroup, t: f64) -> Result<f64> {
    if let Some(m0) = constant_modulus(sg, t)? {
        return Ok(m0.norm());
    }
    sup_over_domain(&sg.space, &|z| Ok(sg.m.eval(t, z)?.norm()))
}

/// `∫₀^a (1 − ρ²)^{−α} dρ`.
fn bloch_integral(alpha: f64, a: f64) -> f64 {
    GaussRule::get(64).integrate(0.0, a, |r| (1.0 - r * r).powf(-alpha))
}

/// Evaluates the local-boundedness formula for `‖C(t)‖` on the space.
pub fn theoretical_bound(sg: &WcSemigroup, t: f64) -> Result<BoundResult> {
    let mut comp = BTreeMap::new();
    let space = &sg.space;
    let policy = &space.policy;
    let phi_t = sg.phi.at_time(t);
    let (tag, theoretical) = match &space.kind {
        SpaceKind::Hardy { p } => {
            let a = phi_t.eval(c(0.0))?.norm();
            let ms = m_sup(sg, t)?;
            let factor = ((1.0 + a) / (1.0 - a)).powf(1.0 / p);
            comp.insert("phi_t(0)".into(), a);
            comp.insert("composition".into(), factor);
            comp.insert("m_sup".into(), ms);
            (FormulaTag::Hardy, factor * ms)
        }
        SpaceKind::Bergman { alpha, p } => {
            let a = phi_t.eval(c(0.0))?.norm();
            let s = sup_disc(&|z| Ok(phi_t.eval(z)?.norm()), policy.r_cap, policy.n_theta)?.value;
            let k = if *alpha >= 0.0 {
                1.0
            } else {
                (s + a).powf(alpha / p) * (s + 3.0 * a).powf(-alpha / p)
            };
            let factor = k * ((s + a) / (s - a)).powf((alpha + 2.0) / p);
            let ms = m_sup(sg, t)?;
            comp.insert("phi_t(0)".into(), a);
            comp.insert("phi_sup".into(), s);
            comp.insert("K".into(), k);
            comp.insert("composition".into(), factor);
            comp.insert("m_sup".into(), ms);
            (FormulaTag::Bergman, factor * ms)
        }
        SpaceKind::Dirichlet => {
            let Some(m0) = constant_modulus(sg, t)? else {
                return Err(Error::UnsupportedSpaceBound(
                    "Dirichlet multiplier constant is only known for z-independent cocycles".into(),
                ));
            };
            let a = phi_t.eval(c(0.0))?.norm();
            let l = -(1.0 - a * a).ln();
            let factor = (1.0 + 0.5 * (l + (l * (4.0 + l)).sqrt())).sqrt();
            comp.insert("phi_t(0)".into(), a);
            comp.insert("L".into(), l);
            comp.insert("composition".into(), factor);
            comp.insert("m_sup".into(), m0.norm());
            (FormulaTag::Dirichlet, factor * m0.norm())
        }
        SpaceKind::BlochWeighted { weight } => {
            let Weight::Standard { alpha } = weight else {
                return Err(Error::UnsupportedSpaceBound(
                    "Bloch bound needs the standard weight (1-|z|^2)^alpha".into(),
                ));
            };
            let alpha = *alpha;
            let k_alpha = sup_disc(
                &|z| {
                    let d = sg.phi.space_derivative(t, z, policy)?.norm();
                    let w = phi_t.eval(z)?.norm_sqr();
                    Ok(d * ((1.0 - z.norm_sqr()) / (1.0 - w)).powf(alpha))
                },
                policy.r_cap,
                policy.n_theta,
            )?
            .value;
            let a = phi_t.eval(c(0.0))?.norm();
            let i_a = bloch_integral(alpha, a);
            let composition = (k_alpha + i_a).max(1.0);
            let (m0, ms, a0, a1) = match constant_modulus(sg, t)? {
                Some(m) => (m.norm(), m.norm(), 0.0, 0.0),
                None => {
                    let m_t = sg.m.at_time(t).memoized(MEMO_CAPACITY);
                    let dm = |z: Complex| -> Result<f64> {
                        Ok(derivative(&m_t, z, policy)?.norm() * (1.0 - z.norm_sqr()).powf(alpha))
                    };
                    let a0 = sup_disc(&dm, policy.r_cap, policy.n_theta)?.value;
                    let a1 = sup_disc(
                        &|z| Ok(dm(z)? * bloch_integral(alpha, z.norm())),
                        policy.r_cap,
                        policy.n_theta,
                    )?
                    .value;
                    (sg.m.eval(t, c(0.0))?.norm(), m_sup(sg, t)?, a0, a1)
                }
            };
            let multiplier = (m0 + a0).max(ms + a1);
            comp.insert("K_alpha".into(), k_alpha);
            comp.insert("I_alpha".into(), i_a);
            comp.insert("phi_t(0)".into(), a);
            comp.insert("composition".into(), composition);
            comp.insert("m_sup".into(), ms);
            comp.insert("multiplier".into(), multiplier);
            (FormulaTag::Bloch, composition * multiplier)
        }
        SpaceKind::SupWeightedHolo { weight } | SpaceKind::SupWeightedCont { weight } => {
            let k = sup_over_domain(space, &|z| Ok(weight.eval(z)? / weight.eval(phi_t.eval(z)?)?))?;
            let ms = m_sup(sg, t)?;
            comp.insert("K".into(), k);
            comp.insert("m_sup".into(), ms);
            (FormulaTag::Supweight, k * ms)
        }
    };
    if !theoretical.is_finite() {
        return Err(Error::Unbounded { value: theoretical });
    }
    Ok(BoundResult {
        t,
        theoretical,
        empirical_lower: None,
        formula_tag: tag,
        components: comp,
    })
}

/// Best ratio `‖C(t)f‖/‖f‖` over a test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormWitness {
    pub value: f64,
    pub witness: String,
    /// Test functions skipped because a norm could not be computed.
    pub skipped: Vec<String>,
}

pub fn operator_norm_lower_bound(sg: &WcSemigroup, t: f64, testset: &[HoloFn]) -> Result<NormWitness> {
    operator_norm_lower_bounds(sg, &[t], testset)?
        .pop()
        .expect("one time")
}

/// Coarser quadrature for witness norms: a lower bound only needs to be
/// accurate well inside the dominance slack.
pub fn witness_policy(policy: &QuadPolicy) -> QuadPolicy {
    QuadPolicy {
        n_theta: policy.n_theta.min(64),
        n_radial: policy.n_radial.min(32),
        tol: policy.tol.max(1e-6),
        ..*policy
    }
}

/// Witnesses for several times; the norms of the test functions are
/// computed once. Per-time failures are returned in place.
pub fn operator_norm_lower_bounds(sg: &WcSemigroup, ts: &[f64], testset: &[HoloFn]) -> Result<Vec<Result<NormWitness>>> {
    let space = sg.space.clone().with_policy(witness_policy(&sg.space.policy))?;
    let norms: Vec<Result<f64>> = testset.iter().map(|f| space.norm(f)).collect();
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let op = match sg.operator(t) {
            Ok(op) => op,
            Err(e) => {
                out.push(Err(e));
                continue;
            }
        };
        let mut best = NormWitness {
            value: 0.0,
            witness: String::new(),
            skipped: Vec::new(),
        };
        for (f, nf) in testset.iter().zip(&norms) {
            let ratio = match nf {
                Ok(nf) if *nf == 0.0 => Ok(None),
                Ok(nf) => space.norm(&op.apply(f)).map(|n| Some(n / nf)),
                Err(e) => Err(e.clone()),
            };
            match ratio {
                Ok(Some(r)) if r > best.value => {
                    best.value = r;
                    best.witness = f.label().to_string();
                }
                Ok(_) => {}
                Err(_) => best.skipped.push(f.label().to_string()),
            }
        }
        out.push(Ok(best));
    }
    Ok(out)
}

/// Theoretical bound with its witness filled in.
pub fn bound_with_witness(sg: &WcSemigroup, t: f64) -> Result<(BoundResult, NormWitness)> {
    bound_table(sg, &[t])?.pop().expect("one time")
}

/// [`bound_with_witness`] over a list of times, sharing the test-set norms.
pub fn bound_table(sg: &WcSemigroup, ts: &[f64]) -> Result<Vec<Result<(BoundResult, NormWitness)>>> {
    let bounds: Vec<Result<BoundResult>> = ts.iter().map(|&t| theoretical_bound(sg, t)).collect();
    let live: Vec<f64> = ts
        .iter()
        .zip(&bounds)
        .filter(|(_, b)| b.is_ok())
        .map(|(&t, _)| t)
        .collect();
    let mut witnesses = operator_norm_lower_bounds(sg, &live, &default_testset(&sg.space))?.into_iter();
    Ok(bounds
        .into_iter()
        .map(|b| {
            let mut bound = b?;
            let w = witnesses.next().expect("witness per live time")?;
            bound.empirical_lower = Some(w.value);
            Ok((bound, w))
        })
        .collect())
}

/// `z ↦ G(z)f′(z) + g(z)f(z)`.
pub fn generator_formula_apply(g_flow: &HoloFn, g_mult: &HoloFn, f: &HoloFn, policy: &QuadPolicy) -> HoloFn {
    let (gf, gm, ff, pol) = (g_flow.clone(), g_mult.clone(), f.clone(), *policy);
    let label = format!("({})*({})' + ({})*({})", g_flow.label(), f.label(), g_mult.label(), f.label());
    HoloFn::try_new(label, f.domain(), FnKind::Composite, move |z| {
        Ok(gf.eval(z)? * derivative(&ff, z, &pol)? + gm.eval(z)? * ff.eval(z)?)
    })
}

/// Step ladder for the difference-quotient norm.
pub const DQ_LADDER: [f64; 5] = [1.0, 0.5, 0.1, 0.01, 0.001];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub steps: Vec<f64>,
    /// Per step, `sup |(C(h)f − f)/h − Af|` on the sample set.
    pub residuals: Vec<f64>,
    /// Same after extrapolating the quotients to `h = 0`.
    pub extrapolated_residual: f64,
    /// Observed order of the raw residuals, `None` when they vanish.
    pub observed_order: Option<f64>,
    /// `(h, ‖(C(h)f − f)/h‖)` over [`DQ_LADDER`]; `None` when the norm
    /// cannot be computed.
    pub dq_norms: Vec<(f64, Option<f64>)>,
    /// Difference quotients stay bounded along the ladder.
    pub bounded: bool,
}

fn sample_set(domain: Domain, radius: f64) -> Vec<Complex> {
    if domain.is_real() {
        real_grid(radius, 41)
    } else {
        polar_grid(radius, 4, 16)
    }
}

/// Compares `(C(h)f − f)/h` with `Af = Gf′ + gf` for `|z| ≤ radius`.
pub fn generator_residual(
    sg: &WcSemigroup,
    g_flow: &HoloFn,
    g_mult: &HoloFn,
    f: &HoloFn,
    steps: &[f64],
    radius: f64,
) -> Result<GeneratorReport> {
    let policy = &sg.space.policy;
    let af = generator_formula_apply(g_flow, g_mult, f, policy);
    let grid = sample_set(sg.space.domain(), radius);
    let applied: Vec<HoloFn> = steps.iter().map(|&h| sg.apply(h, f)).collect::<Result<_>>()?;
    let mut residuals = vec![0.0f64; steps.len()];
    let mut extrapolated_residual = 0.0f64;
    for &z in &grid {
        let target = af.eval(z)?;
        let fz = f.eval(z)?;
        let mut qs = Vec::with_capacity(steps.len());
        for (i, (&h, ch)) in steps.iter().zip(&applied).enumerate() {
            let q = (ch.eval(z)? - fz) / h;
            residuals[i] = residuals[i].max((q - target).norm());
            qs.push(q);
        }
        let est = extrapolate_quotients(steps, &qs)?;
        extrapolated_residual = extrapolated_residual.max((est.value - target).norm());
    }
    let k = residuals.len();
    let scale = residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    let observed_order = if k >= 2 && residuals[k - 1] > 1e-13 * scale.max(1.0) && residuals[k - 2] > 0.0 {
        Some((residuals[k - 2] / residuals[k - 1]).ln() / (steps[k - 2] / steps[k - 1]).ln())
    } else {
        None
    };
    let dq_norms: Vec<(f64, Option<f64>)> = DQ_LADDER
        .iter()
        .map(|&h| {
            let dq = sg
                .apply(h, f)
                .map(|ch| ch.sub(f).scale(c(1.0 / h)))
                .and_then(|q| sg.space.norm(&q));
            (h, dq.ok())
        })
        .collect();
    let bounded = dq_norms.iter().all(|x| x.1.is_some()) && {
        let v: Vec<f64> = dq_norms.iter().map(|x| x.1.unwrap()).collect();
        let n = v.len();
        v[n - 1] <= 2.0 * v[n - 2].max(v[0]) + 1e-12
    };
    Ok(GeneratorReport {
        steps: steps.to_vec(),
        residuals,
        extrapolated_residual,
        observed_order,
        dq_norms,
        bounded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRecord {
    pub t: f64,
    pub norm_residual: f64,
    pub co_residuals: Vec<(f64, f64)>,
    pub norm_of_cf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub records: Vec<ContinuityRecord>,
    /// Compact-open residuals fall below the tolerance and `‖C(t)f‖` stays
    /// bounded.
    pub gamma_convergent: bool,
    /// Norm residuals fall below the tolerance.
    pub norm_convergent: bool,
}

/// Compact-open residual `sup_{K_r} |h|·v` (weighted for sup-type spaces).
fn co_residual(space: &SpaceSpec, h: &HoloFn, r: f64) -> Result<f64> {
    match &space.kind {
        SpaceKind::SupWeightedHolo { .. } | SpaceKind::SupWeightedCont { .. } => {
            space.co_seminorm(h, SeminormIndex::new(r)?)
        }
        _ => Ok(sup_disc(&|z| Ok(h.eval(z)?.norm()), r, space.policy.n_theta)?.value),
    }
}

/// Residuals of `C(t)f − f` for decreasing `ts`.
pub fn continuity_probe(sg: &WcSemigroup, f: &HoloFn, ts: &[f64], radii: &[f64]) -> Result<ContinuityReport> {
    continuity_probe_with(sg, f, ts, radii, DEFAULT_TOL_CONV, DEFAULT_NORM_CAP)
}

pub fn continuity_probe_with(
    sg: &WcSemigroup,
    f: &HoloFn,
    ts: &[f64],
    radii: &[f64],
    tol_conv: f64,
    norm_cap: f64,
) -> Result<ContinuityReport> {
    if ts.is_empty() || ts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParam("times must be nonempty and decreasing".into()));
    }
    let mut records = Vec::with_capacity(ts.len());
    for &t in ts {
        let cf = sg.apply(t, f)?;
        let diff = cf.sub(f);
        let norm_residual = sg.space.norm(&diff)?;
        let co_residuals = radii
            .iter()
            .map(|&r| Ok((r, co_residual(&sg.space, &diff, r)?)))
            .collect::<Result<Vec<_>>>()?;
        records.push(ContinuityRecord {
            t,
            norm_residual,
            co_residuals,
            norm_of_cf: sg.space.norm(&cf)?,
        });
    }
    let worst_co = |r: &ContinuityRecord| r.co_residuals.iter().map(|x| x.1).fold(0.0, f64::max);
    let (first, last) = (&records[0], &records[records.len() - 1]);
    let max_norm = records.iter().map(|r| r.norm_of_cf).fold(0.0, f64::max);
    let gamma_convergent = worst_co(last) < tol_conv && worst_co(last) <= worst_co(first) && max_norm < norm_cap;
    let norm_convergent = last.norm_residual < tol_conv && last.norm_residual <= first.norm_residual;
    Ok(ContinuityReport {
        records,
        gamma_convergent,
        norm_convergent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquicontinuityReport {
    pub t0: f64,
    pub k_radius: f64,
    /// `sup |φ_t(z)|` over `t ≤ t0`, `z ∈ K`.
    pub r_prime: f64,
    /// `sup |m_t(z)|` over the same set.
    pub m_prime: f64,
    pub holds: bool,
}

const EQUI_MARGIN: f64 = 1e-6;

/// Image of the compact `K` (disc of radius `k_radius`, or `[-k, k]`) under
/// `φ_{[0,t0]}` and the size of `m` there.
pub fn equicontinuity_probe(sg: &WcSemigroup, t0: f64, k_radius: f64) -> Result<EquicontinuityReport> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidParam("t0 must be positive".into()));
    }
    let real = sg.space.domain().is_real();
    let grid = if real {
        real_grid(k_radius, 81)
    } else {
        polar_grid(k_radius, 8, 64)
    };
    let ts: Vec<f64> = (0..=20).map(|i| t0 * i as f64 / 20.0).collect();
    let (mut r_prime, mut m_prime) = (0.0f64, 0.0f64);
    for &z in &grid {
        let path = sg.phi.eval_path(&ts, z)?;
        for (&t, w) in ts.iter().zip(path) {
            r_prime = r_prime.max(w.norm());
            m_prime = m_prime.max(sg.m.eval(t, z)?.norm());
        }
    }
    let bounded = m_prime.is_finite() && m_prime < 1e300;
    let holds = bounded && (real || r_prime < 1.0 - EQUI_MARGIN);
    Ok(EquicontinuityReport {
        t0,
        k_radius,
        r_prime,
        m_prime,
        holds,
    })
}
