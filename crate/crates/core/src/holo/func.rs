use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

/// Where a function (or flow) lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    UnitDisc,
    Disc { radius: f64 },
    /// Open interval of the real line; infinite endpoints allowed.
    Real { lo: f64, hi: f64 },
    Plane,
}

impl Domain {
    pub fn real_line() -> Self {
        Domain::Real {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Domain::Real { .. })
    }

    /// Radius of the disc for disc-like domains, `None` for the plane and
    /// real intervals.
    pub fn radius(&self) -> Option<f64> {
        match *self {
            Domain::UnitDisc => Some(1.0),
            Domain::Disc { radius } => Some(radius),
            _ => None,
        }
    }

    /// Distance from `z` to the boundary; negative outside, infinite for the
    /// plane.
    pub fn boundary_distance(&self, z: Complex) -> f64 {
        match *self {
            Domain::UnitDisc => 1.0 - z.norm(),
            Domain::Disc { radius } => radius - z.norm(),
            Domain::Real { lo, hi } => {
                if z.im != 0.0 {
                    -z.im.abs()
                } else {
                    (z.re - lo).min(hi - z.re)
                }
            }
            Domain::Plane => f64::INFINITY,
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.boundary_distance(z) > 0.0
    }

    /// True if every point of `other` is a point of `self`.
    pub fn covers(&self, other: &Domain) -> bool {
        match (*self, *other) {
            (Domain::Plane, _) => true,
            (Domain::Real { lo, hi }, Domain::Real { lo: l2, hi: h2 }) => lo <= l2 && h2 <= hi,
            (Domain::Real { .. }, _) => false,
            (a, Domain::Real { lo, hi }) => {
                let r = a.radius().unwrap_or(f64::INFINITY);
                lo >= -r && hi <= r
            }
            (a, b) => match (a.radius(), b.radius()) {
                (Some(r1), Some(r2)) => r2 <= r1,
                (Some(_), None) => false,
                _ => true,
            },
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitDisc => write!(f, "D"),
            Domain::Disc { radius } => write!(f, "D({radius})"),
            Domain::Real { lo, hi } => write!(f, "({lo}, {hi})"),
            Domain::Plane => write!(f, "C"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnKind {
    ClosedForm,
    Series,
    Composite,
}

type EvalFn = dyn Fn(Complex) -> Result<Complex> + Send + Sync;

/// A function given by an evaluator on a declared domain.
///
/// Evaluation outside the domain fails with [`Error::DomainExit`]; non-finite
/// values fail with [`Error::NonFinite`], so nothing non-finite reaches the
/// quadrature code.
#[derive(Clone)]
pub struct HoloFn {
    label: String,
    domain: Domain,
    kind: FnKind,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for HoloFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HoloFn")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .finish()
    }
}

impl HoloFn {
    pub fn new<F>(label: impl Into<String>, domain: Domain, kind: FnKind, f: F) -> Self
    where
        F: Fn(Complex) -> Complex + Send + Sync + 'static,
    {
        Self::try_new(label, domain, kind, move |z| Ok(f(z)))
    }

    pub fn try_new<F>(label: impl Into<String>, domain: Domain, kind: FnKind, f: F) -> Self
    where
        F: Fn(Complex) -> Result<Complex> + Send + Sync + 'static,
    {
        HoloFn {
            label: label.into(),
            domain,
            kind,
            eval: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> FnKind {
        self.kind
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        if !self.domain.contains(z) {
            return Err(Error::DomainExit { z, t: None });
        }
        let w = (self.eval)(z)?;
        if w.re.is_finite() && w.im.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFinite { z })
        }
    }

    /// Same evaluator, different label.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same evaluator restricted (or extended) to `domain`.
    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn constant(c: Complex) -> Self {
        HoloFn::new(format!("{c}"), Domain::Plane, FnKind::ClosedForm, move |_| c)
    }

    /// The constant-one function `𝟙`.
    pub fn one() -> Self {
        HoloFn::new("1", Domain::Plane, FnKind::ClosedForm, |_| Complex::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        HoloFn::new("0", Domain::Plane, FnKind::ClosedForm, |_| Complex::new(0.0, 0.0))
    }

    pub fn identity() -> Self {
        HoloFn::new("z", Domain::Plane, FnKind::ClosedForm, |z| z)
    }

    /// The monomial `e_n(z) = z^n`.
    pub fn monomial(n: u32) -> Self {
        let label = match n {
            0 => "1".to_string(),
            1 => "z".to_string(),
            _ => format!("z^{n}"),
        };
        HoloFn::new(label, Domain::Plane, FnKind::ClosedForm, move |z| z.powu(n))
    }

    /// `z ↦ exp(a·z)`.
    pub fn exp_scaled(a: Complex) -> Self {
        HoloFn::new(format!("exp({a}*z)"), Domain::Plane, FnKind::ClosedForm, move |z| {
            (a * z).exp()
        })
    }

    /// Reproducing-kernel type function `z ↦ 1/(1 − conj(a)·z)`, holomorphic
    /// on the disc of radius `1/|a|`.
    pub fn kernel(a: Complex) -> Self {
        let domain = if a.norm() == 0.0 {
            Domain::Plane
        } else {
            Domain::Disc {
                radius: 1.0 / a.norm(),
            }
        };
        let ac = a.conj();
        HoloFn::new(format!("kernel({a})"), domain, FnKind::ClosedForm, move |z| {
            1.0 / (1.0 - ac * z)
        })
    }

    /// Disc automorphism `z ↦ (a − z)/(1 − conj(a)·z)` for `|a| < 1`.
    pub fn mobius(a: Complex) -> Self {
        let domain = if a.norm() == 0.0 {
            Domain::Plane
        } else {
            Domain::Disc {
                radius: 1.0 / a.norm(),
            }
        };
        let ac = a.conj();
        HoloFn::new(format!("mobius({a})"), domain, FnKind::ClosedForm, move |z| {
            (a - z) / (1.0 - ac * z)
        })
    }

    /// Atomic singular inner function `exp((z+1)/(z−1))`.
    pub fn singular_inner() -> Self {
        HoloFn::new(
            "exp((z+1)/(z-1))",
            Domain::UnitDisc,
            FnKind::ClosedForm,
            |z| ((z + 1.0) / (z - 1.0)).exp(),
        )
    }

    /// Pointwise combination on the intersection of the two domains (taken
    /// as the smaller of the two when they are nested).
    pub fn zip_with<F>(&self, other: &HoloFn, label: String, op: F) -> HoloFn
    where
        F: Fn(Complex, Complex) -> Complex + Send + Sync + 'static,
    {
        let domain = narrower(self.domain, other.domain);
        let (a, b) = (self.clone(), other.clone());
        HoloFn::try_new(label, domain, FnKind::Composite, move |z| {
            Ok(op(a.eval(z)?, b.eval(z)?))
        })
    }

    pub fn add(&self, other: &HoloFn) -> HoloFn {
        self.zip_with(other, format!("({} + {})", self.label, other.label), |a, b| a + b)
    }

    pub fn sub(&self, other: &HoloFn) -> HoloFn {
        self.zip_with(other, format!("({} - {})", self.label, other.label), |a, b| a - b)
    }

    pub fn mul(&self, other: &HoloFn) -> HoloFn {
        self.zip_with(other, format!("({} * {})", self.label, other.label), |a, b| a * b)
    }

    pub fn scale(&self, c: Complex) -> HoloFn {
        let a = self.clone();
        HoloFn::try_new(
            format!("{c}*{}", self.label),
            self.domain,
            FnKind::Composite,
            move |z| Ok(c * a.eval(z)?),
        )
    }

    /// Same function with successful evaluations cached by the exact bits
    /// of `z`, up to `capacity` entries. Worth it when many functions share
    /// an expensive factor on the same nodes.
    pub fn memoized(&self, capacity: usize) -> HoloFn {
        let inner = self.clone();
        let cache: Mutex<HashMap<(u64, u64), Complex>> = Mutex::new(HashMap::new());
        HoloFn::try_new(self.label.clone(), self.domain, self.kind, move |z| {
            let key = (z.re.to_bits(), z.im.to_bits());
            if let Some(&w) = cache.lock().expect("memo cache").get(&key) {
                return Ok(w);
            }
            let w = inner.eval(z)?;
            let mut map = cache.lock().expect("memo cache");
            if map.len() < capacity {
                map.insert(key, w);
            }
            Ok(w)
        })
    }

    /// `z ↦ self(inner(z))` on the domain of `inner`.
    pub fn compose(&self, inner: &HoloFn) -> HoloFn {
        let (outer, inner) = (self.clone(), inner.clone());
        let label = format!("{}∘{}", outer.label, inner.label);
        let domain = inner.domain;
        HoloFn::try_new(label, domain, FnKind::Composite, move |z| {
            outer.eval(inner.eval(z)?)
        })
    }
}

/// The smaller of two domains when one covers the other; otherwise the
/// first one (evaluation still checks both).
fn narrower(a: Domain, b: Domain) -> Domain {
    if a.covers(&b) {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn domain_membership() {
        assert!(Domain::UnitDisc.contains(c(0.5, 0.5)));
        assert!(!Domain::UnitDisc.contains(c(1.0, 0.0)));
        assert!(Domain::real_line().contains(c(-1e6, 0.0)));
        assert!(!Domain::real_line().contains(c(0.0, 1e-3)));
        assert!(!Domain::Plane.contains(c(f64::NAN, 0.0)));
        assert!(Domain::Plane.covers(&Domain::UnitDisc));
        assert!(Domain::Disc { radius: 2.0 }.covers(&Domain::UnitDisc));
        assert!(!Domain::UnitDisc.covers(&Domain::Disc { radius: 2.0 }));
    }

    #[test]
    fn eval_checks_domain_and_finiteness() {
        let s = HoloFn::singular_inner();
        assert!(matches!(s.eval(c(1.0, 0.0)), Err(Error::DomainExit { .. })));
        let blow = HoloFn::new("1/z", Domain::Plane, FnKind::ClosedForm, |z| 1.0 / z);
        assert!(matches!(blow.eval(c(0.0, 0.0)), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn combinators() {
        let f = HoloFn::monomial(2).add(&HoloFn::one());
        assert_eq!(f.eval(c(2.0, 0.0)).unwrap(), c(5.0, 0.0));
        let k = HoloFn::kernel(c(0.5, 0.0));
        assert_eq!(k.domain(), Domain::Disc { radius: 2.0 });
        let prod = k.mul(&HoloFn::identity());
        assert_eq!(prod.domain(), Domain::Disc { radius: 2.0 });
        let m = HoloFn::mobius(c(0.3, 0.1));
        let mm = m.compose(&m);
        let z = c(0.2, -0.4);
        assert!((mm.eval(z).unwrap() - z).norm() < 1e-15);
        let memo = mm.memoized(1);
        assert_eq!(memo.eval(z).unwrap(), mm.eval(z).unwrap());
        assert_eq!(memo.eval(z).unwrap(), mm.eval(z).unwrap());
        assert_eq!(memo.eval(-z).unwrap(), mm.eval(-z).unwrap());
    }
}
