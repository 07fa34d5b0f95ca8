//! Norms, compact-open seminorms and mixed-topology diagnostics for the
//! example spaces.
//!
//! Integral-type norms (Hardy, Bergman, Dirichlet) are computed at two
//! truncation radii `r_cap` and [`R_CAP_SECOND`] and extrapolated to the
//! boundary in `δ^κ` with `δ = 1 − r²` (`κ = 1`, or `α + 1` for Bergman
//! weights). Sup-type norms are certified grid maxima: a coarse polar (or
//! real) grid followed by repeated local zoom around the best
//! candidates. Grid maxima are lower bounds of the true suprema.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::holo::{
    circle_mean_p, derivative, disc_integrals, polar_grid, Domain, HoloFn, QuadPolicy, R_CAP_SECOND,
};
use crate::{Complex, Error, Result};

const OVERFLOW_GUARD: f64 = 1e300;
const ZOOM_ROUNDS: usize = 4;
/// Relative growth between the two truncation radii above which a function
/// is declared outside the space.
const GROWTH_GUARD: f64 = 1e-2;

/// Positive weight `v` on the disc or the line.
#[derive(Debug, Clone)]
pub enum Weight {
    One,
    /// `(1 − |z|²)^α` on the disc.
    Standard { alpha: f64 },
    /// `e^{−rate·|x|}`.
    ExpAbs { rate: f64 },
    /// `|v(z)|` for an arbitrary evaluator.
    Custom(HoloFn),
}

impl Weight {
    pub fn eval(&self, z: Complex) -> Result<f64> {
        Ok(match self {
            Weight::One => 1.0,
            Weight::Standard { alpha } => (1.0 - z.norm_sqr()).powf(*alpha),
            Weight::ExpAbs { rate } => (-rate * z.norm()).exp(),
            Weight::Custom(v) => v.eval(z)?.norm(),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Weight::One => "1".into(),
            Weight::Standard { alpha } => format!("(1-|z|^2)^{alpha}"),
            Weight::ExpAbs { rate } => format!("exp(-{rate}|x|)"),
            Weight::Custom(v) => v.label().to_string(),
        }
    }

    /// True when `v ≤ 1` is known analytically.
    pub fn bounded_by_one(&self) -> bool {
        match self {
            Weight::One | Weight::ExpAbs { .. } => true,
            Weight::Standard { alpha } => *alpha >= 0.0,
            Weight::Custom(_) => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SpaceKind {
    Hardy { p: f64 },
    Bergman { alpha: f64, p: f64 },
    Dirichlet,
    BlochWeighted { weight: Weight },
    SupWeightedHolo { weight: Weight },
    SupWeightedCont { weight: Weight },
}

#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub policy: QuadPolicy,
}

/// Radius parameter `s ∈ [0, 1)` of a compact-open seminorm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormIndex {
    pub s: f64,
}

impl SeminormIndex {
    pub fn new(s: f64) -> Result<Self> {
        if (0.0..1.0).contains(&s) {
            Ok(SeminormIndex { s })
        } else {
            Err(Error::InvalidParam(format!("seminorm radius {s} outside [0,1)")))
        }
    }
}

/// Norm value plus the data it was extrapolated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Value at the first truncation radius (integral norms) or the coarse
    /// grid maximum (sup norms).
    pub truncated: f64,
    /// Value at the second truncation radius; equals `truncated` for sup norms.
    pub truncated_second: f64,
    /// Change contributed by extrapolation or grid refinement.
    pub correction: f64,
    /// Half-width of the real window for spaces on the line.
    pub window: Option<f64>,
}

/// Location and value of a grid maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub at: Complex,
    pub coarse: f64,
}

impl SupEstimate {
    pub fn refinement_delta(&self) -> f64 {
        self.value - self.coarse
    }
}

fn check_guard(v: f64) -> Result<f64> {
    if v.is_finite() && v < OVERFLOW_GUARD {
        Ok(v)
    } else {
        Err(Error::Unbounded { value: v })
    }
}

fn disc_sup_radii(r_max: f64) -> Vec<f64> {
    let mut radii: Vec<f64> = (0..=48).map(|i| r_max * i as f64 / 48.0).collect();
    let mut k = 5;
    loop {
        let r = 1.0 - 0.5f64.powi(k);
        if r >= r_max {
            break;
        }
        radii.push(r);
        k += 1;
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    radii
}

/// Grid maximum of `f` over the closed disc `|z| ≤ r_max`.
pub fn sup_disc<F>(f: &F, r_max: f64, n_theta: usize) -> Result<SupEstimate>
where
    F: Fn(Complex) -> Result<f64>,
{
    let radii = disc_sup_radii(r_max);
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut coarse: Vec<(f64, usize, usize)> = Vec::with_capacity(radii.len() * n_theta);
    for (i, &r) in radii.iter().enumerate() {
        let n = if r == 0.0 { 1 } else { n_theta };
        for k in 0..n {
            let v = f(Complex::from_polar(r, k as f64 * dtheta))?;
            coarse.push((v, i, k));
        }
    }
    coarse.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let coarse_max = coarse[0].0;
    let mut best = (coarse_max, Complex::from_polar(radii[coarse[0].1], coarse[0].2 as f64 * dtheta));
    for &(_, i, k) in coarse.iter().take(8) {
        let mut r0 = radii[i];
        let mut th0 = k as f64 * dtheta;
        let lo = if i > 0 { radii[i - 1] } else { 0.0 };
        let hi = if i + 1 < radii.len() { radii[i + 1] } else { r_max };
        let mut dr = (r0 - lo).max(hi - r0);
        let mut dt = dtheta;
        let mut local = f(Complex::from_polar(r0, th0))?;
        for _round in 0..ZOOM_ROUNDS {
            let (mut br, mut bt) = (r0, th0);
            for a in -4..=4 {
                let r = (r0 + dr * a as f64 / 4.0).clamp(0.0, r_max);
                for b in -4..=4 {
                    let th = th0 + dt * b as f64 / 4.0;
                    let v = f(Complex::from_polar(r, th))?;
                    if v > local {
                        local = v;
                        br = r;
                        bt = th;
                    }
                }
            }
            r0 = br;
            th0 = bt;
            dr /= 4.0;
            dt /= 4.0;
        }
        if local > best.0 {
            best = (local, Complex::from_polar(r0, th0));
        }
    }
    Ok(SupEstimate {
        value: check_guard(best.0)?,
        at: best.1,
        coarse: coarse_max,
    })
}

/// Grid maximum of `f` over `[-half_width, half_width]`.
pub fn sup_line<F>(f: &F, half_width: f64, n: usize) -> Result<SupEstimate>
where
    F: Fn(Complex) -> Result<f64>,
{
    let h = 2.0 * half_width / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| -half_width + h * i as f64).collect();
    let mut coarse: Vec<(f64, usize)> = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| Ok((f(Complex::new(x, 0.0))?, i)))
        .collect::<Result<_>>()?;
    coarse.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let coarse_max = coarse[0].0;
    let mut best = (coarse_max, xs[coarse[0].1]);
    for &(v0, i) in coarse.iter().take(8) {
        let (mut x0, mut local, mut dx) = (xs[i], v0, h);
        for _round in 0..ZOOM_ROUNDS {
            let mut bx = x0;
            for a in -8..=8 {
                let x = (x0 + dx * a as f64 / 8.0).clamp(-half_width, half_width);
                let v = f(Complex::new(x, 0.0))?;
                if v > local {
                    local = v;
                    bx = x;
                }
            }
            x0 = bx;
            dx /= 8.0;
        }
        if local > best.0 {
            best = (local, x0);
        }
    }
    Ok(SupEstimate {
        value: check_guard(best.0)?,
        at: Complex::new(best.1, 0.0),
        coarse: coarse_max,
    })
}

const LINE_POINTS: usize = 4001;

/// Smallest dyadic window `[-X, X]` (X ≥ 8) outside which `f` stays below
/// `tol` times its inner maximum; `X` is capped at 2^14.
pub fn line_window<F>(f: &F, tol: f64) -> Result<f64>
where
    F: Fn(Complex) -> Result<f64>,
{
    let mut x = 8.0;
    loop {
        let inner = (0..=200)
            .map(|i| f(Complex::new(-x + 2.0 * x * i as f64 / 200.0, 0.0)))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
        let tail = [1.0, 1.5, 2.0, 3.0, 4.0]
            .iter()
            .flat_map(|&s| [s * x, -s * x])
            .map(|t| f(Complex::new(t, 0.0)))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
        if tail <= tol * inner.max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
        if x >= 16384.0 {
            if tail > 10.0 * inner {
                return Err(Error::Unbounded { value: tail });
            }
            return Ok(x);
        }
        x *= 2.0;
    }
}

fn seminorm_half_width(s: f64) -> f64 {
    s / (1.0 - s)
}

fn extrapolate_with(i1: f64, i2: f64, d1: f64, d2: f64) -> Result<f64> {
    if i1 > 0.0 && (i2 - i1) / i1 > GROWTH_GUARD {
        return Err(Error::Unbounded { value: i2 });
    }
    check_guard(i2)?;
    Ok(i2 + (i2 - i1) * d2 / (d1 - d2))
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, policy: QuadPolicy) -> Result<Self> {
        policy.validate()?;
        let bad = |m: String| Err(Error::InvalidParam(m));
        match &kind {
            SpaceKind::Hardy { p } if !(*p >= 1.0) => return bad(format!("Hardy p = {p} < 1")),
            SpaceKind::Bergman { alpha, p } if !(*alpha > -1.0 && *p >= 1.0) => {
                return bad(format!("Bergman needs alpha > -1, p >= 1 (got {alpha}, {p})"))
            }
            _ => {}
        }
        let spec = SpaceSpec { kind, policy };
        if let Some(w) = spec.weight() {
            let samples = if spec.domain().is_real() {
                crate::holo::real_grid(50.0, 101)
            } else {
                polar_grid(0.99, 8, 16)
            };
            for z in samples {
                let v = w.eval(z)?;
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("weight {} not positive at {z}", w.label()));
                }
            }
        }
        Ok(spec)
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(SpaceKind::Hardy { p }, QuadPolicy::default())
    }

    pub fn bergman(alpha: f64, p: f64) -> Result<Self> {
        Self::new(SpaceKind::Bergman { alpha, p }, QuadPolicy::default())
    }

    pub fn dirichlet() -> Self {
        SpaceSpec {
            kind: SpaceKind::Dirichlet,
            policy: QuadPolicy::default(),
        }
    }

    /// `ℬ_α` with the standard weight `(1 − |z|²)^α`.
    pub fn bloch(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParam(format!("Bloch alpha = {alpha} <= 0")));
        }
        Self::new(
            SpaceKind::BlochWeighted {
                weight: Weight::Standard { alpha },
            },
            QuadPolicy::default(),
        )
    }

    pub fn hv(weight: Weight) -> Result<Self> {
        Self::new(SpaceKind::SupWeightedHolo { weight }, QuadPolicy::default())
    }

    /// `H^∞` as the sup-weighted space with `v = 𝟙`.
    pub fn h_infinity() -> Self {
        SpaceSpec {
            kind: SpaceKind::SupWeightedHolo { weight: Weight::One },
            policy: QuadPolicy::default(),
        }
    }

    pub fn cv(weight: Weight) -> Result<Self> {
        Self::new(SpaceKind::SupWeightedCont { weight }, QuadPolicy::default())
    }

    pub fn with_policy(mut self, policy: QuadPolicy) -> Result<Self> {
        policy.validate()?;
        self.policy = policy;
        Ok(self)
    }

    pub fn domain(&self) -> Domain {
        match self.kind {
            SpaceKind::SupWeightedCont { .. } => Domain::real_line(),
            _ => Domain::UnitDisc,
        }
    }

    pub fn weight(&self) -> Option<&Weight> {
        match &self.kind {
            SpaceKind::BlochWeighted { weight }
            | SpaceKind::SupWeightedHolo { weight }
            | SpaceKind::SupWeightedCont { weight } => Some(weight),
            _ => None,
        }
    }

    pub fn is_sup_type(&self) -> bool {
        self.weight().is_some()
    }

    /// Short human-readable name used in reports.
    pub fn label(&self) -> String {
        match &self.kind {
            SpaceKind::Hardy { p } => format!("H^{p}"),
            SpaceKind::Bergman { alpha, p } => format!("A^{p}_{alpha}"),
            SpaceKind::Dirichlet => "D".into(),
            SpaceKind::BlochWeighted { weight } => format!("B[{}]", weight.label()),
            SpaceKind::SupWeightedHolo { weight } => format!("Hv[{}]", weight.label()),
            SpaceKind::SupWeightedCont { weight } => format!("Cv[{}]", weight.label()),
        }
    }

    /// True when the space is known to contain `H^∞` (so bounded test
    /// functions such as inner functions belong to it).
    pub fn contains_h_infinity(&self) -> bool {
        match &self.kind {
            SpaceKind::Hardy { .. } | SpaceKind::Bergman { .. } => true,
            SpaceKind::Dirichlet => false,
            SpaceKind::BlochWeighted { weight } => {
                matches!(weight, Weight::Standard { alpha } if *alpha >= 1.0)
            }
            SpaceKind::SupWeightedHolo { weight } => weight.bounded_by_one(),
            SpaceKind::SupWeightedCont { .. } => false,
        }
    }

    fn is_zero(&self, f: &HoloFn) -> Result<bool> {
        let samples = if self.domain().is_real() {
            crate::holo::real_grid(5.0, 23)
        } else {
            polar_grid(0.9, 3, 8)
        };
        for z in samples {
            if f.eval(z)? != Complex::new(0.0, 0.0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dirichlet_integrand<'a>(&'a self, f: &'a HoloFn) -> impl Fn(Complex) -> Result<f64> + 'a {
        let inner = QuadPolicy {
            tol: 1e-13,
            ..self.policy
        };
        move |z| Ok(derivative(f, z, &inner)?.norm_sqr())
    }

    fn bergman_integrand<'a>(f: &'a HoloFn, alpha: f64, p: f64) -> impl Fn(Complex) -> Result<f64> + 'a {
        move |z| Ok(f.eval(z)?.norm().powf(p) * (1.0 - z.norm_sqr()).powf(alpha))
    }

    /// Integrand of the sup-type norm (`|f|·v`, or `|f′|·v` for Bloch).
    fn sup_integrand<'a>(&'a self, f: &'a HoloFn) -> impl Fn(Complex) -> Result<f64> + 'a {
        let weight = self.weight().expect("sup-type space");
        let bloch = matches!(self.kind, SpaceKind::BlochWeighted { .. });
        move |z| {
            let v = weight.eval(z)?;
            let a = if bloch {
                derivative(f, z, &self.policy)?.norm()
            } else {
                f.eval(z)?.norm()
            };
            Ok(a * v)
        }
    }

    fn bloch_offset(&self, f: &HoloFn) -> Result<f64> {
        Ok(match self.kind {
            SpaceKind::BlochWeighted { .. } => f.eval(Complex::new(0.0, 0.0))?.norm(),
            _ => 0.0,
        })
    }

    pub fn norm(&self, f: &HoloFn) -> Result<f64> {
        Ok(self.norm_estimate(f)?.value)
    }

    pub fn norm_estimate(&self, f: &HoloFn) -> Result<NormEstimate> {
        if self.is_zero(f)? {
            return Ok(NormEstimate {
                value: 0.0,
                truncated: 0.0,
                truncated_second: 0.0,
                correction: 0.0,
                window: None,
            });
        }
        let policy = &self.policy;
        let r1 = policy.r_cap;
        let r2 = R_CAP_SECOND.max(r1);
        let d = |r: f64| 1.0 - r * r;
        match &self.kind {
            SpaceKind::Hardy { p } => {
                let i1 = circle_mean_p(f, r1, *p, policy)?;
                let i2 = circle_mean_p(f, r2, *p, policy)?;
                let i = extrapolate_with(i1, i2, d(r1), d(r2))?;
                Ok(NormEstimate {
                    value: i.max(0.0).powf(1.0 / p),
                    truncated: i1.powf(1.0 / p),
                    truncated_second: i2.powf(1.0 / p),
                    correction: i.max(0.0).powf(1.0 / p) - i2.powf(1.0 / p),
                    window: None,
                })
            }
            SpaceKind::Bergman { alpha, p } => {
                let g = Self::bergman_integrand(f, *alpha, *p);
                let ints = disc_integrals(&g, &[r1, r2], policy)?;
                let c = (alpha + 1.0) / PI;
                let (i1, i2) = (c * ints[0], c * ints[1]);
                let kappa = alpha + 1.0;
                let i = extrapolate_with(i1, i2, d(r1).powf(kappa), d(r2).powf(kappa))?;
                let value = i.max(0.0).powf(1.0 / p);
                Ok(NormEstimate {
                    value,
                    truncated: i1.powf(1.0 / p),
                    truncated_second: i2.powf(1.0 / p),
                    correction: value - i2.powf(1.0 / p),
                    window: None,
                })
            }
            SpaceKind::Dirichlet => {
                let f0 = f.eval(Complex::new(0.0, 0.0))?.norm_sqr();
                let g = self.dirichlet_integrand(f);
                let ints = disc_integrals(&g, &[r1, r2], policy)?;
                let (i1, i2) = (ints[0] / PI, ints[1] / PI);
                let i = extrapolate_with(i1, i2, d(r1), d(r2))?;
                let value = (f0 + i.max(0.0)).sqrt();
                Ok(NormEstimate {
                    value,
                    truncated: (f0 + i1).sqrt(),
                    truncated_second: (f0 + i2).sqrt(),
                    correction: value - (f0 + i2).sqrt(),
                    window: None,
                })
            }
            SpaceKind::BlochWeighted { .. } | SpaceKind::SupWeightedHolo { .. } => {
                let offset = self.bloch_offset(f)?;
                let g = self.sup_integrand(f);
                let sup = sup_disc(&g, r1, policy.n_theta)?;
                Ok(NormEstimate {
                    value: offset + sup.value,
                    truncated: offset + sup.coarse,
                    truncated_second: offset + sup.coarse,
                    correction: sup.refinement_delta(),
                    window: None,
                })
            }
            SpaceKind::SupWeightedCont { .. } => {
                let g = self.sup_integrand(f);
                let x = line_window(&g, policy.tol)?;
                let sup = sup_line(&g, x, LINE_POINTS)?;
                Ok(NormEstimate {
                    value: sup.value,
                    truncated: sup.coarse,
                    truncated_second: sup.coarse,
                    correction: sup.refinement_delta(),
                    window: Some(x),
                })
            }
        }
    }

    /// Compact-open seminorm with radius parameter `idx.s`. On the line the
    /// compact set is `[-s/(1-s), s/(1-s)]`, clipped to the norm window.
    pub fn co_seminorm(&self, f: &HoloFn, idx: SeminormIndex) -> Result<f64> {
        let s = idx.s;
        let policy = &self.policy;
        if self.is_zero(f)? {
            return Ok(0.0);
        }
        match &self.kind {
            SpaceKind::Hardy { p } => Ok(circle_mean_p(f, s, *p, policy)?.powf(1.0 / p)),
            SpaceKind::Bergman { alpha, p } => {
                if s == 0.0 {
                    return Ok(0.0);
                }
                let g = Self::bergman_integrand(f, *alpha, *p);
                let i = disc_integrals(&g, &[s], policy)?[0] * (alpha + 1.0) / PI;
                Ok(check_guard(i)?.powf(1.0 / p))
            }
            SpaceKind::Dirichlet => {
                let f0 = f.eval(Complex::new(0.0, 0.0))?.norm_sqr();
                if s == 0.0 {
                    return Ok(f0.sqrt());
                }
                let g = self.dirichlet_integrand(f);
                let i = disc_integrals(&g, &[s], policy)?[0] / PI;
                Ok((f0 + check_guard(i)?).sqrt())
            }
            SpaceKind::BlochWeighted { .. } | SpaceKind::SupWeightedHolo { .. } => {
                let offset = self.bloch_offset(f)?;
                let g = self.sup_integrand(f);
                Ok(offset + sup_disc(&g, s, policy.n_theta)?.value)
            }
            SpaceKind::SupWeightedCont { .. } => {
                let g = self.sup_integrand(f);
                let x = line_window(&g, policy.tol)?;
                let half = seminorm_half_width(s).min(x);
                if half == 0.0 {
                    return g(Complex::new(0.0, 0.0));
                }
                Ok(sup_line(&g, half, LINE_POINTS)?.value)
            }
        }
    }
}

/// Outcome of comparing the norm with the supremum of the generating
/// seminorms over a radius ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaksReport {
    pub norm: f64,
    pub seminorms: Vec<(f64, f64)>,
    pub max_seminorm: f64,
    /// `norm − max_s seminorm`.
    pub gap: f64,
}

impl SaksReport {
    /// Seminorms never exceed the norm (up to `tol`) and the gap is below
    /// `gap_tol`.
    pub fn passes(&self, gap_tol: f64, tol: f64) -> bool {
        self.gap < gap_tol && self.gap > -tol * self.norm.max(1.0)
    }
}

pub fn saks_sup_check(space: &SpaceSpec, f: &HoloFn, radii: &[f64]) -> Result<SaksReport> {
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam("radii must increase".into()));
    }
    let norm = space.norm(f)?;
    let seminorms = radii
        .iter()
        .map(|&s| Ok((s, space.co_seminorm(f, SeminormIndex::new(s)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let max_seminorm = seminorms.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(SaksReport {
        norm,
        seminorms,
        max_seminorm,
        gap: norm - max_seminorm,
    })
}

/// Radii `s_n` and weights `a_n → 0` defining a submixed seminorm
/// `sup_n p_{s_n}(f)·a_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSequence {
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl NullSequence {
    /// Radii in `[0, 1)`, nonnegative weights that are nonincreasing and whose
    /// last entry is below `1e-6` of the largest.
    pub fn new(radii: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != weights.len() {
            return Err(Error::InvalidParam("radii and weights must be nonempty and equal length".into()));
        }
        if radii.iter().any(|s| !(0.0..1.0).contains(s)) {
            return Err(Error::InvalidParam("radii must lie in [0,1)".into()));
        }
        if weights.iter().any(|&a| !(a >= 0.0)) || weights.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParam("weights must be nonnegative and nonincreasing".into()));
        }
        let max = weights[0];
        if *weights.last().unwrap() >= 1e-6 * max && max > 0.0 {
            return Err(Error::InvalidParam("final weight must be below 1e-6 of the maximum".into()));
        }
        Ok(NullSequence { radii, weights })
    }

    /// Samples `n ↦ (s_n, a_n)` for `n = 1, 2, …` until `a_n < 1e-6·a_1`.
    pub fn from_fn<F: Fn(usize) -> (f64, f64)>(f: F, max_len: usize) -> Result<Self> {
        let (mut radii, mut weights) = (Vec::new(), Vec::new());
        for n in 1..=max_len {
            let (s, a) = f(n);
            radii.push(s);
            weights.push(a);
            if a < 1e-6 * weights[0] {
                break;
            }
        }
        Self::new(radii, weights)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// `max_n p_{s_n}(f)·a_n`; stops once `a_n·‖f‖` cannot beat the running
/// maximum (seminorms are bounded by the norm).
pub fn submixed_seminorm(space: &SpaceSpec, f: &HoloFn, ns: &NullSequence) -> Result<f64> {
    if space.is_zero(f)? {
        return Ok(0.0);
    }
    let norm = space.norm(f)?;
    let mut best = 0.0f64;
    for (&s, &a) in ns.radii.iter().zip(&ns.weights) {
        if a * norm * (1.0 + 1e-9) <= best {
            break;
        }
        let p = space.co_seminorm(f, SeminormIndex::new(s)?)?;
        best = best.max(p * a);
    }
    Ok(best)
}

/// Sequential mixed-topology verdict: compact-open residuals and norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaVerdict {
    /// Per index, `max_r p_r(f_k − f)`.
    pub residuals: Vec<f64>,
    pub norms: Vec<f64>,
    pub sup_norm: f64,
    pub converges: bool,
}

pub const DEFAULT_TOL_CONV: f64 = 1e-3;
pub const DEFAULT_NORM_CAP: f64 = 1e6;

/// γ-convergence of `seq` to `limit` via compact-open convergence on the
/// radius ladder plus a uniform norm bound.
pub fn gamma_convergence_probe(
    space: &SpaceSpec,
    seq: &[HoloFn],
    limit: &HoloFn,
    radii: &[f64],
    tol_conv: f64,
    norm_cap: f64,
) -> Result<GammaVerdict> {
    if seq.is_empty() {
        return Err(Error::InvalidParam("empty sequence".into()));
    }
    let mut residuals = Vec::with_capacity(seq.len());
    let mut norms = Vec::with_capacity(seq.len());
    for f in seq {
        let diff = f.sub(limit);
        let r = radii
            .iter()
            .map(|&s| space.co_seminorm(&diff, SeminormIndex::new(s)?))
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
        residuals.push(r);
        norms.push(space.norm(f)?);
    }
    let sup_norm = norms.iter().copied().fold(0.0, f64::max);
    let last = *residuals.last().unwrap();
    let converges = last < tol_conv && last <= residuals[0] && sup_norm < norm_cap;
    Ok(GammaVerdict {
        residuals,
        norms,
        sup_norm,
        converges,
    })
}
